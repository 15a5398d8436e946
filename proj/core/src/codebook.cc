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

#include "semeq/codebook.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "semeq/mismatch.h"

namespace semeq {

TransformCodebook::TransformCodebook(
    uint64_t source_seed, uint64_t target_seed,
    const AtomPairTable<AffineMap>& maps,
    const AtomPairTable<PerAction<double>>& transfer)
    : source_seed_(source_seed),
      target_seed_(target_seed),
      maps_(maps),
      transfer_(transfer) {
  for (int i = 0; i < kNumActions; ++i) {
    for (int j = 0; j < kNumActions; ++j) {
      if (!maps_[i][j].IsFinite()) {
        throw std::invalid_argument("codebook map (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not finite");
      }
      double total = 0.0;
      for (double v : transfer_[i][j]) {
        if (!(v >= 0.0 && v <= 1.0)) {
          throw std::invalid_argument("information transfer outside [0,1]");
        }
        total += v;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("information-transfer row (" +
                                    std::to_string(i) + "," +
                                    std::to_string(j) + ") does not sum to 1");
      }
    }
  }
}

PointCloud AtomCloud(const Language& lang, int atom) {
  const ObservationDistribution& mu = lang.mu();
  PointCloud cloud;
  double total = 0.0;
  for (std::size_t k = 0; k < mu.support.size(); ++k) {
    const SemanticSymbol& x = lang.Encode(mu.support[k]);
    if (lang.AtomOf(x) != atom) continue;
    cloud.points.push_back(x);
    cloud.weights.push_back(mu.weights[k]);
    total += mu.weights[k];
  }
  for (double& w : cloud.weights) w /= total;
  return cloud;
}

TransformCodebook BuildCodebook(const Language& src, const Language& tgt,
                                const CodebookOptions& options) {
  CheckCompatible(src, tgt);
  PerAction<PointCloud> source_clouds;
  PerAction<PointCloud> target_clouds;
  for (int a = 0; a < kNumActions; ++a) {
    source_clouds[a] = AtomCloud(src, a);
    target_clouds[a] = AtomCloud(tgt, a);
    if (source_clouds[a].size() < 2) {
      throw std::invalid_argument(
          "source atom " + std::to_string(a) + " (" +
          std::string(ActionName(ActionFromIndex(a))) + ") holds " +
          std::to_string(source_clouds[a].size()) + " symbols; need >= 2");
    }
    if (target_clouds[a].size() < 2) {
      throw std::invalid_argument(
          "target atom " + std::to_string(a) + " (" +
          std::string(ActionName(ActionFromIndex(a))) + ") holds " +
          std::to_string(target_clouds[a].size()) + " symbols; need >= 2");
    }
  }
  AtomPairTable<AffineMap> maps;
  AtomPairTable<PerAction<double>> transfer;
  for (int i = 0; i < kNumActions; ++i) {
    for (int j = 0; j < kNumActions; ++j) {
      maps[i][j] =
          FitAffineMap(source_clouds[i], target_clouds[j], options.fit);
      transfer[i][j] = InfoTransferRow(src, tgt, maps[i][j], i);
    }
  }
  return TransformCodebook(src.seed(), tgt.seed(), maps, transfer);
}

}  // namespace semeq
