// Copyright 2026 The semeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semeq/mismatch.h"

#include <stdexcept>
#include <string>

namespace semeq {
namespace {

SemanticSymbol Transmitted(const Language& src, const SymbolTransform& eq,
                           const Observation& obs) {
  const SemanticSymbol& x = src.Encode(obs);
  return eq ? eq(obs, x) : x;
}

}  // namespace

void CheckCompatible(const Language& src, const Language& tgt) {
  if (!(src.grid() == tgt.grid())) {
    throw std::invalid_argument(
        "source and target languages use different "
        "grids");
  }
}

MismatchReport ComputeMismatch(const Language& src, const Language& tgt,
                               const SymbolTransform& equalizer,
                               bool per_observation) {
  CheckCompatible(src, tgt);
  const GridWorld& world = tgt.world();
  const ObservationDistribution& mu = src.mu();
  MismatchReport report;
  double preserved = 0.0;
  double effective = 0.0;
  // Fixed iteration order keeps the sums bit-stable.
  for (std::size_t k = 0; k < mu.support.size(); ++k) {
    const Observation& obs = mu.support[k];
    const SemanticSymbol x = Transmitted(src, equalizer, obs);
    const int received_atom = tgt.AtomOf(x);
    const int intended_atom = tgt.AtomOf(tgt.Encode(obs));
    if (received_atom == intended_atom) preserved += mu.weights[k];

    const PerAction<double> q_plus = world.QPlusValues(obs);
    const Action best = world.BestAction(obs);
    const double denom = q_plus[ActionIndex(best)];
    const double ratio = denom > 0.0 ? q_plus[received_atom] / denom : 1.0;
    effective += mu.weights[k] * ratio;

    if (per_observation) {
      report.per_observation.push_back(
          {obs, src.AtomOf(src.Encode(obs)), intended_atom,
           ActionFromIndex(received_atom), best, ratio});
    }
  }
  report.sm = 1.0 - preserved;
  report.em = 1.0 - effective;
  // Guard the [0, 1] contract against rounding of the weight sum.
  if (report.sm < 0.0) report.sm = 0.0;
  if (report.em < 0.0) report.em = 0.0;
  return report;
}

double SemanticMismatch(const Language& src, const Language& tgt,
                        const SymbolTransform& equalizer) {
  return ComputeMismatch(src, tgt, equalizer).sm;
}

double EffectivenessMismatch(const Language& src, const Language& tgt,
                             const SymbolTransform& equalizer) {
  return ComputeMismatch(src, tgt, equalizer).em;
}

PerAction<double> InfoTransferRow(const Language& src, const Language& tgt,
                                  const AffineMap& map, int i) {
  CheckCompatible(src, tgt);
  const ObservationDistribution& mu = src.mu();
  PerAction<double> mass{};
  double total = 0.0;
  for (std::size_t k = 0; k < mu.support.size(); ++k) {
    const SemanticSymbol& x = src.Encode(mu.support[k]);
    if (src.AtomOf(x) != i) continue;
    mass[tgt.AtomOf(map(x))] += mu.weights[k];
    total += mu.weights[k];
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("source atom " + std::to_string(i) +
                                " carries no mass");
  }
  for (double& v : mass) v /= total;
  return mass;
}

InfoTransfer ComputeInfoTransfer(const Language& src, const Language& tgt,
                                 const AffineMap& map, int i, int j) {
  if (j < 0 || j >= kNumActions || i < 0 || i >= kNumActions) {
    throw std::invalid_argument("atom index out of range");
  }
  int count = 0;
  for (const Observation& obs : src.mu().support) {
    if (src.AtomOf(src.Encode(obs)) == i) ++count;
  }
  return {InfoTransferRow(src, tgt, map, i)[j], count};
}

}  // namespace semeq
