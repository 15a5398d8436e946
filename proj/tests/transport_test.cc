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

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "semeq/random.h"

namespace semeq {
namespace {

using Eigen::Vector2d;

std::vector<Vector2d> RandomPoints(Rng& rng, int n, double spread = 1.0) {
  std::vector<Vector2d> pts;
  for (int k = 0; k < n; ++k) {
    pts.emplace_back(spread * (2 * UnitUniform(rng) - 1),
                     spread * (2 * UnitUniform(rng) - 1));
  }
  return pts;
}

// Minimum over all assignments of n equally weighted points, times 1/n.
double BruteForceAssignment(const std::vector<Vector2d>& a,
                            const std::vector<Vector2d>& b) {
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      total += (a[k] - b[perm[k]]).squaredNorm();
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / a.size();
}

// Clouds with rational weights units/total, expanded into unit atoms.
std::vector<Vector2d> Expand(const std::vector<Vector2d>& pts,
                             const std::vector<int>& units) {
  std::vector<Vector2d> out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    out.insert(out.end(), units[k], pts[k]);
  }
  return out;
}

PointCloud Weighted(const std::vector<Vector2d>& pts,
                    const std::vector<int>& units) {
  const double total = std::accumulate(units.begin(), units.end(), 0);
  PointCloud c;
  c.points = pts;
  for (int u : units) c.weights.push_back(u / total);
  return c;
}

double ExactObjective(const PointCloud& a, const PointCloud& b) {
  return TransportCost(ExactEmd(a, b).plan, SquaredEuclideanCost(a, b));
}

TEST(SinkhornTest, IdenticalCloudConcentratesOnDiagonal) {
  const PointCloud c = PointCloud::Uniform(
      {Vector2d(0, 0), Vector2d(1, 0), Vector2d(0, 1), Vector2d(1, 1)});
  const Coupling k = Sinkhorn(c, c, 1e-3);
  double off = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) off += k.plan(i, j);
    }
  }
  EXPECT_LT(off, 1e-3);
}

TEST(SinkhornTest, TwoPointVertex) {
  // a->c and b->d cost 0.01 each; the crossed vertex costs 2 + 2.
  const PointCloud src = PointCloud::Uniform({Vector2d(0, 0), Vector2d(1, 1)});
  const PointCloud tgt =
      PointCloud::Uniform({Vector2d(0.1, 0), Vector2d(1, 1.1)});
  const Coupling k = Sinkhorn(src, tgt, 0.05);
  EXPECT_NEAR(k.plan(0, 0), 0.5, 1e-6);
  EXPECT_NEAR(k.plan(1, 1), 0.5, 1e-6);
  const Coupling e = ExactEmd(src, tgt);
  EXPECT_NEAR(e.plan(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(e.plan(0, 1), 0.0, 1e-12);
}

TEST(SinkhornTest, MarginalsOnRandomInstances) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + UniformIndex(rng, 10);
    const int m = 3 + UniformIndex(rng, 10);
    std::vector<int> nu(n), mu(m);
    for (int& u : nu) u = 1 + UniformIndex(rng, 5);
    for (int& u : mu) u = 1 + UniformIndex(rng, 5);
    const PointCloud a = Weighted(RandomPoints(rng, n), nu);
    const PointCloud b = Weighted(RandomPoints(rng, m), mu);
    const double eps = 0.05 * MeanSquaredDistance(a, b);
    const Coupling k = Sinkhorn(a, b, eps, 5000);
    EXPECT_LT(RowResidual(k.plan, a.WeightVector()), 1e-6);
    EXPECT_LT(ColumnResidual(k.plan, b.WeightVector()), 1e-6);
    EXPECT_GE(k.plan.minCoeff(), 0.0);
  }
}

TEST(SinkhornTest, ReportsNonConvergence) {
  Rng rng(5);
  std::vector<int> units(40);
  for (int& u : units) u = 1 + UniformIndex(rng, 9);
  const PointCloud a = Weighted(RandomPoints(rng, 40), units);
  const PointCloud b = PointCloud::Uniform(RandomPoints(rng, 40, 3.0));
  try {
    Sinkhorn(a, b, 1e-4, 1);
    ADD_FAILURE() << "converged in one sweep";
  } catch (const SinkhornNotConverged& e) {
    EXPECT_GT(e.residual(), kSinkhornFailureResidual);
  }
  EXPECT_THROW(Sinkhorn(a, b, 0.0), std::invalid_argument);
}

TEST(ExactEmdTest, IdenticalCloudsCostNothing) {
  Rng rng(1);
  const PointCloud c = PointCloud::Uniform(RandomPoints(rng, 9));
  EXPECT_NEAR(ExactObjective(c, c), 0.0, 1e-15);
}

TEST(ExactEmdTest, TranslationCostsSquaredNorm) {
  Rng rng(3);
  const Vector2d t(0.3, -0.45);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<Vector2d> pts = RandomPoints(rng, 12);
    std::vector<Vector2d> moved;
    for (const Vector2d& p : pts) moved.push_back(p + t);
    EXPECT_NEAR(
        ExactObjective(PointCloud::Uniform(pts), PointCloud::Uniform(moved)),
        t.squaredNorm(), 1e-12);
  }
}

TEST(ExactEmdTest, MatchesBruteForceAssignments) {
  Rng rng(11);
  for (int n = 2; n <= 7; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<Vector2d> a = RandomPoints(rng, n);
      const std::vector<Vector2d> b = RandomPoints(rng, n);
      EXPECT_NEAR(
          ExactObjective(PointCloud::Uniform(a), PointCloud::Uniform(b)),
          BruteForceAssignment(a, b), 1e-12)
          << n;
    }
  }
}

TEST(ExactEmdTest, MatchesBruteForceWithUnequalWeights) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    // Three source and four target points sharing seven weight units.
    std::vector<int> su = {1, 2, 4};
    std::vector<int> tu = {2, 1, 1, 3};
    std::shuffle(su.begin(), su.end(), rng);
    std::shuffle(tu.begin(), tu.end(), rng);
    const std::vector<Vector2d> a = RandomPoints(rng, 3);
    const std::vector<Vector2d> b = RandomPoints(rng, 4);
    EXPECT_NEAR(ExactObjective(Weighted(a, su), Weighted(b, tu)),
                BruteForceAssignment(Expand(a, su), Expand(b, tu)), 1e-12);
  }
}

TEST(ExactEmdTest, PlanIsFeasible) {
  Rng rng(13);
  const PointCloud a = Weighted(RandomPoints(rng, 30), std::vector<int>(30, 2));
  const PointCloud b = Weighted(RandomPoints(rng, 45), std::vector<int>(45, 1));
  const Coupling k = ExactEmd(a, b);
  EXPECT_LT(RowResidual(k.plan, a.WeightVector()), 1e-12);
  EXPECT_LT(ColumnResidual(k.plan, b.WeightVector()), 1e-12);
  EXPECT_GE(k.plan.minCoeff(), 0.0);
}

TEST(ExactEmdTest, RejectsOversizedInstances) {
  Rng rng(14);
  const PointCloud a = PointCloud::Uniform(RandomPoints(rng, 101));
  const PointCloud b = PointCloud::Uniform(RandomPoints(rng, 100));
  EXPECT_THROW(ExactEmd(a, b), std::invalid_argument);
}

TEST(ExactEmdTest, BoundsSinkhornAndIsApproached) {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud a = PointCloud::Uniform(RandomPoints(rng, 6));
    const PointCloud b = PointCloud::Uniform(RandomPoints(rng, 6));
    const Eigen::MatrixXd cost = SquaredEuclideanCost(a, b);
    const double exact = ExactObjective(a, b);
    const double scale = MeanSquaredDistance(a, b);
    double previous = std::numeric_limits<double>::infinity();
    for (double rel : {1.0, 0.1, 0.01}) {
      const double cost_eps =
          TransportCost(Sinkhorn(a, b, rel * scale, 20000).plan, cost);
      EXPECT_GE(cost_eps, exact - 1e-12);
      EXPECT_LE(cost_eps, previous + 1e-12);
      previous = cost_eps;
    }
    EXPECT_LE(previous, exact + 0.01 * std::max(exact, 1e-3 * scale));
  }
}

TEST(FitAffineMapTest, IdentityFixedPoint) {
  Rng rng(21);
  const PointCloud c = PointCloud::Uniform(RandomPoints(rng, 25));
  FitOptions opts;
  opts.ridge = 1e-6;
  const AffineMap m = FitAffineMap(c, c, opts);
  EXPECT_LT((m.linear - Eigen::Matrix2d::Identity()).norm(), 1e-6);
  EXPECT_LT(m.offset.norm(), 1e-6);
}

TEST(FitAffineMapTest, RecoversPlantedRotation) {
  Rng rng(22);
  for (double angle : {0.1, 0.3, -0.25}) {
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    // An anisotropic cloud so the coupling cannot be fooled by symmetry.
    std::vector<Vector2d> src;
    for (int k = 0; k < 20; ++k) {
      src.emplace_back(0.8 * (2 * UnitUniform(rng) - 1),
                       0.25 * (2 * UnitUniform(rng) - 1));
    }
    std::vector<Vector2d> tgt;
    for (const Vector2d& p : src) tgt.push_back(r * p);
    FitOptions opts;
    opts.ridge = 1e-9;
    opts.rounds = 30;
    const AffineMap m =
        FitAffineMap(PointCloud::Uniform(src), PointCloud::Uniform(tgt), opts);
    EXPECT_LT((m.linear - r).norm(), 1e-3) << angle;
    EXPECT_LT(m.offset.norm(), 1e-3) << angle;
  }
}

TEST(FitAffineMapTest, RecoversTranslation) {
  Rng rng(23);
  const std::vector<Vector2d> src = RandomPoints(rng, 20, 0.3);
  const Vector2d t(0.05, -0.04);
  std::vector<Vector2d> tgt;
  for (const Vector2d& p : src) tgt.push_back(p + t);
  FitOptions opts;
  opts.ridge = 1e-9;
  const AffineMap m =
      FitAffineMap(PointCloud::Uniform(src), PointCloud::Uniform(tgt), opts);
  EXPECT_LT((m.offset - t).norm(), 1e-6);
  EXPECT_LT((m.linear - Eigen::Matrix2d::Identity()).norm(), 1e-6);
}

TEST(FitAffineMapTest, DegenerateSourceFallsBackToRidge) {
  std::vector<Vector2d> line;
  for (int k = 0; k < 10; ++k) line.emplace_back(0.1 * k, 0.0);
  Rng rng(24);
  const PointCloud tgt = PointCloud::Uniform(RandomPoints(rng, 10));
  FitOptions opts;
  opts.ridge = 0.0;
  const AffineMap m = FitAffineMap(PointCloud::Uniform(line), tgt, opts);
  EXPECT_TRUE(m.IsFinite());
}

TEST(FitAffineMapTest, EntropicModeAndValidation) {
  Rng rng(25);
  const PointCloud a = PointCloud::Uniform(RandomPoints(rng, 15));
  FitOptions opts;
  opts.epsilon = 0.05;
  EXPECT_TRUE(FitAffineMap(a, a, opts).IsFinite());
  opts.epsilon = -1.0;
  EXPECT_THROW(FitAffineMap(a, a, opts), std::invalid_argument);
  opts = FitOptions{};
  opts.rounds = 0;
  EXPECT_THROW(FitAffineMap(a, a, opts), std::invalid_argument);
  opts = FitOptions{};
  opts.ridge = -1.0;
  EXPECT_THROW(FitAffineMap(a, a, opts), std::invalid_argument);
}

TEST(PointCloudTest, Validate) {
  EXPECT_THROW(PointCloud::Uniform({Vector2d(0, 0)}).Validate(),
               std::invalid_argument);
  PointCloud c = PointCloud::Uniform({Vector2d(0, 0), Vector2d(1, 0)});
  EXPECT_NO_THROW(c.Validate());
  c.weights[0] = 0.7;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace semeq
