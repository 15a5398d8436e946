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

#ifndef SEMEQ_MISMATCH_H_
#define SEMEQ_MISMATCH_H_

#include <functional>
#include <vector>

#include "semeq/affine_map.h"
#include "semeq/language.h"

namespace semeq {

// Symbol-wise equalizer composed into a source encoder: (obs, lambda_s(obs))
// -> transformed symbol. An empty function is the identity.
using SymbolTransform =
    std::function<SemanticSymbol(const Observation&, const SemanticSymbol&)>;

struct ObservationBreakdown {
  Observation obs;
  // Atom of the source symbol in the source partition.
  int source_atom = 0;
  // Atom of the target language's own symbol in the target partition.
  int target_atom = 0;
  // Target decoder's argmax on the (equalized) source symbol.
  Action interpreted = Action::kRight;
  Action best = Action::kRight;
  double q_plus_ratio = 1.0;
};

struct MismatchReport {
  double sm = 0.0;
  double em = 0.0;
  std::vector<ObservationBreakdown> per_observation;
};

// Semantic mismatch for deterministic encoders, by exact enumeration:
//   SM = sum_o mu(o) [atom_t(E(lambda_s(o))) != atom_t(lambda_t(o))].
// Throws std::invalid_argument when the two grids differ.
double SemanticMismatch(const Language& src, const Language& tgt,
                        const SymbolTransform& equalizer = {});

// Effectiveness mismatch with argmax decoding and the grid-world q+:
//   EM = 1 - sum_o mu(o) q+(a_hat(o), o) / q+(a*(o), o),
// where observations with q+(a*(o), o) = 0 contribute a ratio of 1.
double EffectivenessMismatch(const Language& src, const Language& tgt,
                             const SymbolTransform& equalizer = {});

MismatchReport ComputeMismatch(const Language& src, const Language& tgt,
                               const SymbolTransform& equalizer = {},
                               bool per_observation = false);

struct InfoTransfer {
  double value = 0.0;
  int sample_count = 0;
};

// Fraction of source atom i's mu-mass that `map` sends into target atom j,
// enumerated exactly over the observations whose source symbol lies in atom
// i. Throws std::invalid_argument when atom i carries no mass.
InfoTransfer ComputeInfoTransfer(const Language& src, const Language& tgt,
                                 const AffineMap& map, int i, int j);

// {I_{i->j}(map)} for every target atom j; sums to 1.
PerAction<double> InfoTransferRow(const Language& src, const Language& tgt,
                                  const AffineMap& map, int i);

// Throws std::invalid_argument unless both languages share grid and mu.
void CheckCompatible(const Language& src, const Language& tgt);

}  // namespace semeq

#endif  // SEMEQ_MISMATCH_H_
