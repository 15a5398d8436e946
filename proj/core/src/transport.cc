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

#include "semeq/transport.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace semeq {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kAnnealSweeps = 50;
constexpr int kSweepsBeforeNewton = 100;
constexpr Eigen::Index kNewtonMaxSize = 1200;

// log(sum(exp(v))) that tolerates -inf entries.
template <typename Vec>
double LogSumExp(const Vec& v) {
  const double top = v.maxCoeff();
  if (top == kNegInf) return kNegInf;
  return top + std::log((v.array() - top).exp().sum());
}

Eigen::VectorXd SafeLog(const Eigen::VectorXd& w) {
  Eigen::VectorXd out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    out[i] = w[i] > 0.0 ? std::log(w[i]) : kNegInf;
  }
  return out;
}

Eigen::MatrixXd PlanFromPotentials(const Eigen::MatrixXd& cost,
                                   const Eigen::VectorXd& f,
                                   const Eigen::VectorXd& g, double epsilon) {
  Eigen::MatrixXd plan(cost.rows(), cost.cols());
  for (Eigen::Index j = 0; j < cost.cols(); ++j) {
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      const double e = f[i] + g[j];
      plan(i, j) = e == kNegInf ? 0.0 : std::exp((e - cost(i, j)) / epsilon);
    }
  }
  return plan;
}

// Primal network simplex specialised to the complete bipartite graph. Nodes
// 0..m-1 are sources, m..m+n-1 sinks; the basis is a spanning tree of
// m+n-1 cells.
class TransportationSimplex {
 public:
  TransportationSimplex(const Eigen::MatrixXd& cost,
                        const Eigen::VectorXd& supply,
                        const Eigen::VectorXd& demand)
      : cost_(cost),
        m_(static_cast<int>(cost.rows())),
        n_(static_cast<int>(cost.cols())),
        adjacency_(m_ + n_),
        potential_(m_ + n_),
        parent_edge_(m_ + n_),
        depth_(m_ + n_) {
    const double scale = cost.cwiseAbs().maxCoeff();
    tolerance_ = 1e-12 * std::max(scale, 1.0);
    InitialBasis(supply, demand);
  }

  Coupling Solve() {
    const long long cells = static_cast<long long>(m_) * n_;
    const long long block =
        std::max<long long>(16, static_cast<long long>(std::sqrt(cells)));
    const long long max_iterations =
        1000 * static_cast<long long>(m_ + n_) + 100000;
    long long cursor = 0;
    int iterations = 0;
    for (;; ++iterations) {
      if (iterations > max_iterations) {
        throw std::runtime_error("transportation simplex failed to converge");
      }
      UpdateTree();
      // Block search: scan blocks of cells, stop at the first block that
      // contains an improving cell and take its most negative one.
      long long scanned = 0;
      int enter_i = -1;
      int enter_j = -1;
      double best = -tolerance_;
      while (scanned < cells) {
        const long long stop = std::min(cells, scanned + block);
        for (; scanned < stop; ++scanned) {
          const int i = static_cast<int>(cursor / n_);
          const int j = static_cast<int>(cursor % n_);
          if (++cursor == cells) cursor = 0;
          const double reduced =
              cost_(i, j) - potential_[i] - potential_[m_ + j];
          if (reduced < best) {
            best = reduced;
            enter_i = i;
            enter_j = j;
          }
        }
        if (enter_i >= 0) break;
      }
      if (enter_i < 0) break;
      Pivot(enter_i, enter_j);
    }

    Coupling out;
    out.plan = Eigen::MatrixXd::Zero(m_, n_);
    for (const Edge& e : edges_) out.plan(e.i, e.j) = std::max(e.flow, 0.0);
    out.iterations = iterations;
    return out;
  }

 private:
  struct Edge {
    int i;
    int j;
    double flow;
  };

  int SinkNode(int j) const { return m_ + j; }

  void AddEdge(int i, int j, double flow) {
    edges_.push_back({i, j, flow});
    const int id = static_cast<int>(edges_.size()) - 1;
    adjacency_[i].push_back(id);
    adjacency_[SinkNode(j)].push_back(id);
  }

  // North-west corner rule; always yields m+n-1 basic cells forming a tree.
  void InitialBasis(const Eigen::VectorXd& supply,
                    const Eigen::VectorXd& demand) {
    Eigen::VectorXd s = supply;
    Eigen::VectorXd d = demand;
    edges_.reserve(m_ + n_ - 1);
    int i = 0;
    int j = 0;
    for (;;) {
      const double x = std::min(s[i], d[j]);
      AddEdge(i, j, x);
      s[i] -= x;
      d[j] -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (j == n_ - 1 || (i < m_ - 1 && s[i] <= d[j])) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void UpdateTree() {
    std::fill(parent_edge_.begin(), parent_edge_.end(), -1);
    std::vector<int> stack = {0};
    potential_[0] = 0.0;
    depth_[0] = 0;
    std::vector<bool> visited(m_ + n_, false);
    visited[0] = true;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int id : adjacency_[node]) {
        const Edge& e = edges_[id];
        const int other = node < m_ ? SinkNode(e.j) : e.i;
        if (visited[other]) continue;
        visited[other] = true;
        parent_edge_[other] = id;
        depth_[other] = depth_[node] + 1;
        potential_[other] = cost_(e.i, e.j) - potential_[node];
        stack.push_back(other);
      }
    }
  }

  int Parent(int node) const {
    const Edge& e = edges_[parent_edge_[node]];
    return node < m_ ? SinkNode(e.j) : e.i;
  }

  void Pivot(int enter_i, int enter_j) {
    // Tree path from the entering sink back to the entering source. Edges
    // alternate -, +, -, ... starting at the sink; the entering cell is +.
    std::vector<int> sink_side;
    std::vector<int> source_side;
    int a = SinkNode(enter_j);
    int b = enter_i;
    while (depth_[a] > depth_[b]) {
      sink_side.push_back(parent_edge_[a]);
      a = Parent(a);
    }
    while (depth_[b] > depth_[a]) {
      source_side.push_back(parent_edge_[b]);
      b = Parent(b);
    }
    while (a != b) {
      sink_side.push_back(parent_edge_[a]);
      a = Parent(a);
      source_side.push_back(parent_edge_[b]);
      b = Parent(b);
    }
    std::vector<int> path = std::move(sink_side);
    path.insert(path.end(), source_side.rbegin(), source_side.rend());

    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = 0;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      if (edges_[path[k]].flow < theta) {
        theta = edges_[path[k]].flow;
        leaving = k;
      }
    }
    theta = std::max(theta, 0.0);
    for (std::size_t k = 0; k < path.size(); ++k) {
      edges_[path[k]].flow += (k % 2 == 0) ? -theta : theta;
    }

    const int leaving_id = path[leaving];
    const Edge old = edges_[leaving_id];
    auto drop = [&](int node) {
      auto& adj = adjacency_[node];
      adj.erase(std::find(adj.begin(), adj.end(), leaving_id));
    };
    drop(old.i);
    drop(SinkNode(old.j));
    edges_[leaving_id] = {enter_i, enter_j, theta};
    adjacency_[enter_i].push_back(leaving_id);
    adjacency_[SinkNode(enter_j)].push_back(leaving_id);
  }

  const Eigen::MatrixXd& cost_;
  int m_;
  int n_;
  double tolerance_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<double> potential_;
  std::vector<int> parent_edge_;
  std::vector<int> depth_;
};

// Damped Newton iterations on the entropic dual over the rows and columns
// with positive mass, updating (f, g) in place. Returns the number of steps
// taken; stops early at the sweep tolerance or when no step is accepted.
int NewtonPolish(const Eigen::MatrixXd& cost, const Eigen::VectorXd& a,
                 const Eigen::VectorXd& b, double eps, int limit,
                 Eigen::VectorXd& f, Eigen::VectorXd& g) {
  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) rows.push_back(i);
  }
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (b[j] > 0.0) cols.push_back(j);
  }
  const Eigen::Index m = rows.size();
  const Eigen::Index n = cols.size();
  Eigen::MatrixXd c(m, n);
  Eigen::VectorXd ra(m), rb(n), x(m + n);
  for (Eigen::Index i = 0; i < m; ++i) {
    ra[i] = a[rows[i]];
    x[i] = f[rows[i]];
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = cost(rows[i], cols[j]);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    rb[j] = b[cols[j]];
    x[m + j] = g[cols[j]];
  }

  auto plan = [&](const Eigen::VectorXd& z) {
    Eigen::MatrixXd p(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        p(i, j) = std::exp((z[i] + z[m + j] - c(i, j)) / eps);
      }
    }
    return p;
  };
  // Negated dual objective; convex in z.
  auto objective = [&](const Eigen::VectorXd& z, const Eigen::MatrixXd& p) {
    return eps * p.sum() - ra.dot(z.head(m)) - rb.dot(z.tail(n));
  };

  int steps = 0;
  Eigen::MatrixXd p = plan(x);
  while (steps < limit) {
    const Eigen::VectorXd row_sum = p.rowwise().sum();
    const Eigen::VectorXd col_sum = p.colwise().sum().transpose();
    Eigen::VectorXd grad(m + n);
    grad << row_sum - ra, col_sum - rb;
    if (grad.lpNorm<1>() < kSinkhornTolerance) break;
    ++steps;

    // The last column potential is pinned to remove the constant shift
    // that leaves the objective unchanged.
    const Eigen::Index k = m + n - 1;
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(k, k);
    hess.diagonal().head(m) = row_sum;
    hess.diagonal().tail(n - 1) = col_sum.head(n - 1);
    hess.topRightCorner(m, n - 1) = p.leftCols(n - 1);
    hess.bottomLeftCorner(n - 1, m) = p.leftCols(n - 1).transpose();
    hess /= eps;
    hess.diagonal().array() += 1e-14 * hess.diagonal().mean();
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(m + n);
    dir.head(k) = hess.ldlt().solve(-grad.head(k));
    if (!dir.allFinite()) break;

    const double base = objective(x, p);
    const double slope = grad.dot(dir);
    bool accepted = false;
    for (double t = 1.0; t > 1e-10; t *= 0.5) {
      const Eigen::VectorXd trial = x + t * dir;
      Eigen::MatrixXd trial_plan = plan(trial);
      const double value = objective(trial, trial_plan);
      if (std::isfinite(value) && value <= base + 1e-4 * t * slope) {
        x = trial;
        p = std::move(trial_plan);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  for (Eigen::Index i = 0; i < m; ++i) f[rows[i]] = x[i];
  for (Eigen::Index j = 0; j < n; ++j) g[cols[j]] = x[m + j];
  return steps;
}

}  // namespace

PointCloud PointCloud::Uniform(std::vector<Eigen::Vector2d> points) {
  PointCloud cloud;
  cloud.weights.assign(points.size(),
                       points.empty() ? 0.0 : 1.0 / points.size());
  cloud.points = std::move(points);
  return cloud;
}

void PointCloud::Validate() const {
  if (points.size() < 2) {
    throw std::invalid_argument("point cloud needs at least 2 points");
  }
  if (weights.size() != points.size()) {
    throw std::invalid_argument("point cloud weights/points size mismatch");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!points[k].allFinite() || !(weights[k] >= 0.0)) {
      throw std::invalid_argument(
          "point cloud has a non-finite point or "
          "negative weight");
    }
    total += weights[k];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("point cloud weights sum to " +
                                std::to_string(total));
  }
}

Eigen::VectorXd PointCloud::WeightVector() const {
  return Eigen::Map<const Eigen::VectorXd>(
      weights.data(), static_cast<Eigen::Index>(weights.size()));
}

Eigen::MatrixXd SquaredEuclideanCost(const PointCloud& src,
                                     const PointCloud& tgt) {
  Eigen::MatrixXd cost(src.size(), tgt.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      cost(i, j) = (src.points[i] - tgt.points[j]).squaredNorm();
    }
  }
  return cost;
}

double TransportCost(const Eigen::MatrixXd& plan, const Eigen::MatrixXd& cost) {
  return plan.cwiseProduct(cost).sum();
}

double RowResidual(const Eigen::MatrixXd& plan, const Eigen::VectorXd& a) {
  return (plan.rowwise().sum() - a).cwiseAbs().sum();
}

double ColumnResidual(const Eigen::MatrixXd& plan, const Eigen::VectorXd& b) {
  return (plan.colwise().sum().transpose() - b).cwiseAbs().sum();
}

double MeanSquaredDistance(const PointCloud& src, const PointCloud& tgt) {
  return SquaredEuclideanCost(src, tgt).mean();
}

SinkhornNotConverged::SinkhornNotConverged(double residual, int iterations)
    : std::runtime_error("sinkhorn did not converge: residual " +
                         std::to_string(residual) + " after " +
                         std::to_string(iterations) + " iterations"),
      residual_(residual) {}

Coupling SinkhornWithCost(const Eigen::MatrixXd& cost, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b, double epsilon,
                          int max_iter) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!cost.allFinite()) throw std::invalid_argument("cost is not finite");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  const Eigen::Index m = cost.rows();
  const Eigen::Index n = cost.cols();
  const Eigen::VectorXd log_a = SafeLog(a);
  const Eigen::VectorXd log_b = SafeLog(b);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd scratch_row(n);
  Eigen::VectorXd scratch_col(m);

  int it = 0;
  // Plain alternating sweeps at `eps`, warm-started from (f, g).
  auto sweeps = [&](double eps, int limit, double tolerance) {
    for (int k = 0; k < limit; ++k) {
      ++it;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (log_a[i] == kNegInf) {
          f[i] = kNegInf;
          continue;
        }
        scratch_row = (g - cost.row(i).transpose()) / eps;
        f[i] = eps * (log_a[i] - LogSumExp(scratch_row));
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        if (log_b[j] == kNegInf) {
          g[j] = kNegInf;
          continue;
        }
        scratch_col = (f - cost.col(j)) / eps;
        g[j] = eps * (log_b[j] - LogSumExp(scratch_col));
      }
      // Columns are exact after the g-update; the row residual decides.
      double row_residual = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (log_a[i] == kNegInf) continue;
        scratch_row = (g - cost.row(i).transpose()) / eps;
        row_residual +=
            std::abs(std::exp(f[i] / eps + LogSumExp(scratch_row)) - a[i]);
      }
      if (row_residual < tolerance) return true;
    }
    return false;
  };

  // Anneal from the cost scale down to epsilon, warm-starting each stage.
  for (double eps = cost.maxCoeff(); eps > 4.0 * epsilon; eps /= 4.0) {
    sweeps(eps, kAnnealSweeps, 1e-6);
  }
  const int first = std::min(max_iter, kSweepsBeforeNewton);
  bool done = sweeps(epsilon, first, kSinkhornTolerance);
  if (!done && m + n <= kNewtonMaxSize) {
    // Near-permutation plans make the sweeps crawl; finish with Newton steps
    // on the dual instead.
    it += NewtonPolish(cost, a, b, epsilon, max_iter - first, f, g);
  } else if (!done) {
    sweeps(epsilon, max_iter - first, kSinkhornTolerance);
  }

  Coupling out;
  out.plan = PlanFromPotentials(cost, f, g, epsilon);
  out.iterations = it;
  const double residual =
      std::max(RowResidual(out.plan, a), ColumnResidual(out.plan, b));
  if (!(residual <= kSinkhornFailureResidual)) {
    throw SinkhornNotConverged(residual, it);
  }
  return out;
}

Coupling Sinkhorn(const PointCloud& src, const PointCloud& tgt, double epsilon,
                  int max_iter) {
  src.Validate();
  tgt.Validate();
  return SinkhornWithCost(SquaredEuclideanCost(src, tgt), src.WeightVector(),
                          tgt.WeightVector(), epsilon, max_iter);
}

Coupling SolveTransportation(const Eigen::MatrixXd& cost,
                             const Eigen::VectorXd& supply,
                             const Eigen::VectorXd& demand) {
  if (cost.rows() != supply.size() || cost.cols() != demand.size() ||
      cost.size() == 0) {
    throw std::invalid_argument("transportation problem shape mismatch");
  }
  if (!cost.allFinite()) throw std::invalid_argument("cost is not finite");
  if ((supply.array() < 0).any() || (demand.array() < 0).any()) {
    throw std::invalid_argument("negative supply or demand");
  }
  if (std::abs(supply.sum() - demand.sum()) > 1e-9) {
    throw std::invalid_argument("supply and demand totals differ");
  }
  // Absorb rounding differences in the last sink.
  Eigen::VectorXd balanced = demand;
  balanced[balanced.size() - 1] += supply.sum() - demand.sum();
  return TransportationSimplex(cost, supply, balanced).Solve();
}

Coupling ExactEmd(const PointCloud& src, const PointCloud& tgt) {
  src.Validate();
  tgt.Validate();
  if (src.size() * tgt.size() > kExactEmdMaxCells) {
    throw std::invalid_argument("exact EMD limited to " +
                                std::to_string(kExactEmdMaxCells) + " cells");
  }
  return SolveTransportation(SquaredEuclideanCost(src, tgt), src.WeightVector(),
                             tgt.WeightVector());
}

AffineMap FitAffineMap(const PointCloud& src, const PointCloud& tgt,
                       const FitOptions& options) {
  src.Validate();
  tgt.Validate();
  if (!(options.ridge >= 0.0))
    throw std::invalid_argument("ridge must be >= 0");
  if (options.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (!(options.epsilon >= 0.0)) {
    throw std::invalid_argument("epsilon must be >= 0");
  }

  const Eigen::VectorXd a = src.WeightVector();
  const Eigen::VectorXd b = tgt.WeightVector();
  Eigen::MatrixXd targets(tgt.size(), 2);
  for (std::size_t l = 0; l < tgt.size(); ++l) {
    targets.row(l) = tgt.points[l].transpose();
  }

  AffineMap map;
  Eigen::MatrixXd previous;
  for (int round = 0; round < options.rounds; ++round) {
    PointCloud image = src;
    for (auto& p : image.points) p = map(p);
    const Eigen::MatrixXd cost = SquaredEuclideanCost(image, tgt);
    Eigen::MatrixXd plan;
    if (options.epsilon > 0.0) {
      plan = SinkhornWithCost(cost, a, b, options.epsilon * cost.mean(),
                              options.sinkhorn_max_iter)
                 .plan;
    } else {
      plan = SolveTransportation(cost, a, b).plan;
    }
    if (round > 0 && (plan - previous).norm() < 1e-10) break;
    previous = plan;

    // Weighted normal equations over rows z_k = (x_k, 1); the ridge term
    // penalises only the linear block, towards the identity.
    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Matrix<double, 3, 2> rhs = Eigen::Matrix<double, 3, 2>::Zero();
    const Eigen::VectorXd mass = plan.rowwise().sum();
    for (std::size_t k = 0; k < src.size(); ++k) {
      if (!(mass[k] > 0.0)) continue;  // no barycentric target
      const Eigen::Vector2d bary =
          (plan.row(k) * targets).transpose() / mass[k];
      const Eigen::Vector3d z(src.points[k][0], src.points[k][1], 1.0);
      normal += mass[k] * z * z.transpose();
      rhs += mass[k] * z * bary.transpose();
    }
    auto solve = [&](double ridge) {
      Eigen::Matrix3d lhs = normal;
      Eigen::Matrix<double, 3, 2> r = rhs;
      lhs(0, 0) += ridge;
      lhs(1, 1) += ridge;
      r(0, 0) += ridge;
      r(1, 1) += ridge;
      const Eigen::FullPivLU<Eigen::Matrix3d> lu(lhs);
      return std::make_pair(lu.isInvertible(),
                            Eigen::Matrix<double, 3, 2>(lu.solve(r)));
    };
    auto [ok, theta] = solve(options.ridge);
    if (!ok || !theta.allFinite()) {
      // Rank-deficient design (e.g. collinear source points).
      std::tie(ok, theta) = solve(std::max(options.ridge, 1e-6));
    }
    map.linear = theta.topRows<2>().transpose();
    map.offset = theta.row(2).transpose();
  }
  return map;
}

}  // namespace semeq
