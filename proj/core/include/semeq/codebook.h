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

#ifndef SEMEQ_CODEBOOK_H_
#define SEMEQ_CODEBOOK_H_

#include <array>
#include <cstdint>

#include "semeq/affine_map.h"
#include "semeq/language.h"
#include "semeq/transport.h"

namespace semeq {

template <typename T>
using AtomPairTable = std::array<std::array<T, kNumActions>, kNumActions>;

// One affine map per (source atom i, target atom j) plus the cached
// information-transfer rows {I_{i->j'}(T_{i,j})}_{j'}.
class TransformCodebook {
 public:
  // Validates that every map is finite and every cached row sums to 1.
  TransformCodebook(uint64_t source_seed, uint64_t target_seed,
                    const AtomPairTable<AffineMap>& maps,
                    const AtomPairTable<PerAction<double>>& transfer);

  uint64_t source_seed() const { return source_seed_; }
  uint64_t target_seed() const { return target_seed_; }
  const AffineMap& map(int i, int j) const { return maps_.at(i).at(j); }
  const PerAction<double>& transfer_row(int i, int j) const {
    return transfer_.at(i).at(j);
  }
  // Source atom i corresponds to the target atom with the same action.
  int correspondence(int i) const { return i; }

 private:
  uint64_t source_seed_;
  uint64_t target_seed_;
  AtomPairTable<AffineMap> maps_;
  AtomPairTable<PerAction<double>> transfer_;
};

struct CodebookOptions {
  FitOptions fit;
};

// Empirical cloud of a language's encoded symbols that fall in `atom`,
// weighted by mu and renormalised.
PointCloud AtomCloud(const Language& lang, int atom);

// Fits T_{i,j} = FitAffineMap(source atom i, target atom j) for all 16 pairs
// and caches the enumerated information-transfer rows. Throws
// std::invalid_argument naming the atom when either side has fewer than two
// symbols in some atom.
TransformCodebook BuildCodebook(const Language& src, const Language& tgt,
                                const CodebookOptions& options = {});

}  // namespace semeq

#endif  // SEMEQ_CODEBOOK_H_
