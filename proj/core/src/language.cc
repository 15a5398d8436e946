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

#include "semeq/language.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace semeq {
namespace {

constexpr uint64_t kOrientationStream = 0x6f7269656e74ULL;
constexpr uint64_t kJitterStream = 0x6a6974746572ULL;
constexpr uint64_t kPerturbStream = 0x7065727475ULL;

double SquaredNorm(const SemanticSymbol& v) { return v.squaredNorm(); }

// Uniform point in a disc of the given radius.
SemanticSymbol DiscSample(Rng& rng, double radius) {
  const double theta = 2.0 * std::numbers::pi * UnitUniform(rng);
  const double r = radius * std::sqrt(UnitUniform(rng));
  return {r * std::cos(theta), r * std::sin(theta)};
}

void CheckAnchors(const PerAction<SemanticSymbol>& anchors) {
  for (int a = 0; a < kNumActions; ++a) {
    if (!anchors[a].allFinite()) {
      throw std::invalid_argument("anchor " + std::to_string(a) +
                                  " is not finite");
    }
    for (int b = 0; b < a; ++b) {
      if (anchors[a] == anchors[b]) {
        throw std::invalid_argument("anchors " + std::to_string(b) + " and " +
                                    std::to_string(a) + " coincide");
      }
    }
  }
}

}  // namespace

bool InPeakBox(const SemanticSymbol& x) {
  return std::abs(x[0]) <= 1.0 && std::abs(x[1]) <= 1.0;
}

SemanticSymbol ClipToPeakBox(const SemanticSymbol& x) {
  return x.cwiseMax(-1.0).cwiseMin(1.0);
}

Eigen::Matrix2d Orientation::Matrix() const {
  Eigen::Matrix2d rot;
  rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  Eigen::Matrix2d flip = Eigen::Matrix2d::Identity();
  if (reflect) flip(1, 1) = -1.0;
  return rot * flip;
}

PerAction<SemanticSymbol> CanonicalAnchors() {
  const double m = kAnchorRadius;
  return {SemanticSymbol(m, 0.0), SemanticSymbol(0.0, -m),
          SemanticSymbol(-m, 0.0), SemanticSymbol(0.0, m)};
}

Orientation OrientationForSeed(uint64_t seed) {
  Rng rng(DeriveSeed(seed, {kOrientationStream}));
  Orientation o;
  o.angle = 2.0 * std::numbers::pi * UnitUniform(rng);
  o.reflect = UnitUniform(rng) < 0.5;
  return o;
}

Language::Language(const GridConfig& grid, uint64_t seed,
                   const PerAction<SemanticSymbol>& anchors,
                   std::vector<SemanticSymbol> table)
    : world_(grid),
      mu_(UniformMu(grid)),
      seed_(seed),
      anchors_(anchors),
      table_(std::move(table)) {
  CheckAnchors(anchors_);
}

Language Language::Synthesize(const GridConfig& grid, uint64_t seed,
                              const SynthesisOptions& options) {
  grid.Validate();
  const double max_jitter = kAnchorRadius / std::numbers::sqrt2;
  if (!(options.jitter_radius >= 0.0 && options.jitter_radius < max_jitter)) {
    throw std::invalid_argument("jitter_radius must lie in [0, " +
                                std::to_string(max_jitter) + ")");
  }
  const Orientation orientation =
      options.orientation.value_or(OrientationForSeed(seed));
  const Eigen::Matrix2d transform = orientation.Matrix();
  PerAction<SemanticSymbol> anchors = CanonicalAnchors();
  for (auto& a : anchors) a = transform * a;

  const GridWorld world(grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SemanticSymbol> table(grid.NumObservationSlots(),
                                    SemanticSymbol(nan, nan));
  for (std::size_t slot = 0; slot < table.size(); ++slot) {
    const Observation obs = grid.ObservationAtSlot(slot);
    if (obs.IsTerminal()) continue;
    Rng rng(DeriveSeed(seed, {kJitterStream, slot}));
    const int best = ActionIndex(world.BestAction(obs));
    table[slot] = anchors[best] + DiscSample(rng, options.jitter_radius);
    if (!InPeakBox(table[slot])) {
      throw std::invalid_argument(
          "jitter pushes a symbol outside the peak-power box at " +
          ToString(obs));
    }
  }
  Language lang(grid, seed, anchors, std::move(table));

  for (const Observation& obs : lang.mu().support) {
    const SemanticSymbol& x = lang.Encode(obs);
    const int best = ActionIndex(world.BestAction(obs));
    const double own = SquaredNorm(x - anchors[best]);
    for (int a = 0; a < kNumActions; ++a) {
      if (a != best && !(own < SquaredNorm(x - anchors[a]))) {
        throw std::logic_error(
            "synthesized symbol not strictly inside its "
            "atom at " +
            ToString(obs));
      }
    }
  }
  return lang;
}

Language Language::FromEntries(
    const GridConfig& grid, uint64_t seed,
    const PerAction<SemanticSymbol>& anchors,
    const std::vector<std::pair<Observation, SemanticSymbol>>& entries) {
  grid.Validate();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SemanticSymbol> table(grid.NumObservationSlots(),
                                    SemanticSymbol(nan, nan));
  std::vector<bool> seen(table.size(), false);
  for (const auto& [obs, x] : entries) {
    const std::size_t slot = grid.SlotOf(obs);
    if (obs.IsTerminal()) {
      throw std::invalid_argument("encoder entry for terminal observation " +
                                  ToString(obs));
    }
    if (seen[slot]) {
      throw std::invalid_argument("duplicate encoder entry for " +
                                  ToString(obs));
    }
    if (!x.allFinite() || !InPeakBox(x)) {
      throw std::invalid_argument("encoder symbol outside the peak box at " +
                                  ToString(obs));
    }
    seen[slot] = true;
    table[slot] = x;
  }
  for (std::size_t slot = 0; slot < table.size(); ++slot) {
    if (!seen[slot] && !grid.ObservationAtSlot(slot).IsTerminal()) {
      throw std::invalid_argument("missing encoder entry for " +
                                  ToString(grid.ObservationAtSlot(slot)));
    }
  }
  return Language(grid, seed, anchors, std::move(table));
}

const SemanticSymbol& Language::Encode(const Observation& obs) const {
  const std::size_t slot = grid().SlotOf(obs);
  if (obs.IsTerminal()) {
    throw std::invalid_argument("cannot encode terminal observation " +
                                ToString(obs));
  }
  return table_[slot];
}

int Language::AtomOf(const SemanticSymbol& x) const {
  int best = 0;
  double best_d = SquaredNorm(x - anchors_[0]);
  for (int a = 1; a < kNumActions; ++a) {
    const double d = SquaredNorm(x - anchors_[a]);
    if (d < best_d) {
      best = a;
      best_d = d;
    }
  }
  return best;
}

PerAction<double> Language::DecoderQ(const SemanticSymbol& x) const {
  PerAction<double> q;
  for (int a = 0; a < kNumActions; ++a) q[a] = -SquaredNorm(x - anchors_[a]);
  return q;
}

PerAction<double> Language::ActionProbabilities(const SemanticSymbol& x,
                                                double beta) const {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  PerAction<double> p{};
  if (std::isinf(beta)) {
    p[AtomOf(x)] = 1.0;
    return p;
  }
  if (beta == 0.0) {
    p.fill(1.0 / kNumActions);
    return p;
  }
  const PerAction<double> q = DecoderQ(x);
  const double top = *std::max_element(q.begin(), q.end());
  double total = 0.0;
  for (int a = 0; a < kNumActions; ++a) {
    p[a] = std::exp(beta * (q[a] - top));
    total += p[a];
  }
  for (double& v : p) v /= total;
  return p;
}

Action Language::Decode(const SemanticSymbol& x, double beta, Rng& rng) const {
  if (std::isinf(beta) && beta > 0) return ActionFromIndex(AtomOf(x));
  const PerAction<double> p = ActionProbabilities(x, beta);
  const double u = UnitUniform(rng);
  double cumulative = 0.0;
  for (int a = 0; a < kNumActions - 1; ++a) {
    cumulative += p[a];
    if (u < cumulative) return ActionFromIndex(a);
  }
  return ActionFromIndex(kNumActions - 1);
}

PerAction<double> Language::DecoderQTable(const Observation& obs,
                                          QSource source) const {
  if (source == QSource::kOracle) return world_.QValues(obs);
  return DecoderQ(Encode(obs));
}

bool Language::IsTaskConsistent() const {
  for (const Observation& obs : mu_.support) {
    const Action decoded = ActionFromIndex(AtomOf(Encode(obs)));
    const PerAction<double> q = world_.QValues(obs);
    if (q[ActionIndex(decoded)] < *std::max_element(q.begin(), q.end())) {
      return false;
    }
  }
  return true;
}

Language Language::WithSymbol(const Observation& obs,
                              const SemanticSymbol& x) const {
  if (!x.allFinite() || !InPeakBox(x)) {
    throw std::invalid_argument("symbol outside the peak box");
  }
  Language copy = *this;
  const std::size_t slot = grid().SlotOf(obs);
  if (obs.IsTerminal()) {
    throw std::invalid_argument("terminal observation " + ToString(obs));
  }
  copy.table_[slot] = x;
  return copy;
}

std::vector<std::pair<Observation, SemanticSymbol>> Language::Entries() const {
  std::vector<std::pair<Observation, SemanticSymbol>> out;
  out.reserve(mu_.support.size());
  for (const Observation& obs : mu_.support) out.emplace_back(obs, Encode(obs));
  return out;
}

Language PerturbEncoder(const Language& lang, double fraction, uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("perturbation fraction must lie in [0, 1]");
  }
  std::vector<std::pair<Observation, SemanticSymbol>> entries = lang.Entries();
  for (auto& [obs, x] : entries) {
    Rng rng(DeriveSeed(seed, {kPerturbStream, lang.grid().SlotOf(obs)}));
    if (!(UnitUniform(rng) < fraction)) continue;
    const int atom = lang.AtomOf(x);
    const int other =
        (atom + 1 + UniformIndex(rng, kNumActions - 1)) % kNumActions;
    x = ClipToPeakBox(lang.anchors()[other] + (x - lang.anchors()[atom]));
  }
  return Language::FromEntries(lang.grid(), lang.seed(), lang.anchors(),
                               entries);
}

}  // namespace semeq
