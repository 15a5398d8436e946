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

#ifndef SEMEQ_TRANSPORT_H_
#define SEMEQ_TRANSPORT_H_

#include <Eigen/Core>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "semeq/affine_map.h"

namespace semeq {

// Weighted empirical measure on the plane.
struct PointCloud {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;

  static PointCloud Uniform(std::vector<Eigen::Vector2d> points);

  std::size_t size() const { return points.size(); }
  // Throws std::invalid_argument unless there are >= 2 finite points with
  // nonnegative weights summing to 1 within 1e-12.
  void Validate() const;
  Eigen::VectorXd WeightVector() const;
};

// Transport plan between two clouds; rows index source points.
struct Coupling {
  Eigen::MatrixXd plan;
  int iterations = 0;
};

Eigen::MatrixXd SquaredEuclideanCost(const PointCloud& src,
                                     const PointCloud& tgt);
double TransportCost(const Eigen::MatrixXd& plan, const Eigen::MatrixXd& cost);
// L1 deviation of the row and column sums from the two marginals.
double RowResidual(const Eigen::MatrixXd& plan, const Eigen::VectorXd& a);
double ColumnResidual(const Eigen::MatrixXd& plan, const Eigen::VectorXd& b);

class SinkhornNotConverged : public std::runtime_error {
 public:
  SinkhornNotConverged(double residual, int iterations);
  double residual() const { return residual_; }

 private:
  double residual_;
};

inline constexpr double kSinkhornTolerance = 1e-9;
inline constexpr double kSinkhornFailureResidual = 1e-6;

// Entropic OT in the log domain. Stops once both L1 marginal residuals are
// below 1e-9 or after max_iter iterations at `epsilon`; throws
// SinkhornNotConverged when the residual is still above 1e-6 at that point.
// Larger epsilons are swept first (a few dozen sweeps each, not counted
// against max_iter) to warm-start the potentials. After 100 plain sweeps,
// problems with at most 1200 rows plus columns spend the rest of the budget
// on damped Newton steps of the dual, each counted as one iteration.
Coupling Sinkhorn(const PointCloud& src, const PointCloud& tgt, double epsilon,
                  int max_iter = 1000);
Coupling SinkhornWithCost(const Eigen::MatrixXd& cost, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b, double epsilon,
                          int max_iter = 1000);

// Exact transportation problem by the primal network simplex on the
// bipartite graph. Supplies and demands must have equal totals (within
// 1e-9). No size limit.
Coupling SolveTransportation(const Eigen::MatrixXd& cost,
                             const Eigen::VectorXd& supply,
                             const Eigen::VectorXd& demand);

inline constexpr std::size_t kExactEmdMaxCells = 10000;

// Exact squared-Euclidean OT. Rejects instances with more than 10^4 cells.
Coupling ExactEmd(const PointCloud& src, const PointCloud& tgt);

// Mean of the squared-Euclidean cost matrix; the natural length scale for
// entropic regularization.
double MeanSquaredDistance(const PointCloud& src, const PointCloud& tgt);

struct FitOptions {
  // Ridge pull of the linear part towards the identity.
  double ridge = 1e-4;
  int rounds = 10;
  // Entropic regularization relative to MeanSquaredDistance of the current
  // round's cost matrix. 0 solves every coupling exactly.
  double epsilon = 0.0;
  int sinkhorn_max_iter = 1000;
};

// Alternating affine Monge-map fit. Starting from the identity, each round
// couples the mapped source with the target, moves every source point's
// regression target to its barycentric projection and refits
//   min sum_k w_k |A x_k + c - b_k|^2 + ridge |A - I|_F^2.
// Stops early once the coupling changes by less than 1e-10 (Frobenius).
AffineMap FitAffineMap(const PointCloud& src, const PointCloud& tgt,
                       const FitOptions& options = {});

}  // namespace semeq

#endif  // SEMEQ_TRANSPORT_H_
