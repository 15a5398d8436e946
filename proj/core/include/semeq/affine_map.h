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

#ifndef SEMEQ_AFFINE_MAP_H_
#define SEMEQ_AFFINE_MAP_H_

#include <Eigen/Core>

namespace semeq {

// x -> linear * x + offset on the semantic plane.
struct AffineMap {
  Eigen::Matrix2d linear = Eigen::Matrix2d::Identity();
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();

  static AffineMap Identity() { return {}; }

  Eigen::Vector2d operator()(const Eigen::Vector2d& x) const {
    return linear * x + offset;
  }
  bool IsFinite() const { return linear.allFinite() && offset.allFinite(); }
};

}  // namespace semeq

#endif  // SEMEQ_AFFINE_MAP_H_
