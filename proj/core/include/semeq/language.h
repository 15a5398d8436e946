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

#ifndef SEMEQ_LANGUAGE_H_
#define SEMEQ_LANGUAGE_H_

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "semeq/gridworld.h"
#include "semeq/random.h"

namespace semeq {

// A point of the two-dimensional semantic space.
using SemanticSymbol = Eigen::Vector2d;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Distance of every anchor from the origin. With radius 1/sqrt(2) the anchors
// stay inside the unit box under any rotation.
inline constexpr double kAnchorRadius = 0.70710678118654752440;
inline constexpr double kDefaultJitterFraction = 0.15;

// Each component of a transmitted symbol must lie in [-1, 1].
bool InPeakBox(const SemanticSymbol& x);
SemanticSymbol ClipToPeakBox(const SemanticSymbol& x);

// Orthogonal transform applied to the canonical anchors: optional reflection
// x2 -> -x2, then rotation by `angle` radians.
struct Orientation {
  double angle = 0.0;
  bool reflect = false;

  Eigen::Matrix2d Matrix() const;
};

// Canonical anchors: right (+m,0), down (0,-m), left (-m,0), up (0,+m).
PerAction<SemanticSymbol> CanonicalAnchors();

struct SynthesisOptions {
  double jitter_radius = kDefaultJitterFraction * kAnchorRadius;
  // Drawn from the seed when empty.
  std::optional<Orientation> orientation;
};

// Which value estimate the effectiveness-oriented machinery uses.
enum class QSource { kDecoder, kOracle };

// A language: a deterministic encoder table from observations to semantic
// symbols, and a decoder given by one anchor per action. The decoder's value
// estimate is q(a, x) = -|x - anchor(a)|^2, so its argmax regions (atoms) are
// the Voronoi cells of the anchors and atom i decodes to action i.
class Language {
 public:
  // Builds a task-optimal language: every observation is encoded to the
  // anchor of its best action plus a deterministic per-observation jitter.
  // Throws std::invalid_argument if jitter_radius is outside
  // [0, kAnchorRadius / sqrt(2)) or if a symbol leaves the peak box, and
  // std::logic_error if a symbol fails to land strictly inside its atom.
  static Language Synthesize(const GridConfig& grid, uint64_t seed,
                             const SynthesisOptions& options = {});

  // Builds a language from explicit parts. `entries` must cover every
  // non-terminal observation exactly once; symbols must lie in the peak box
  // and anchors must be pairwise distinct.
  static Language FromEntries(
      const GridConfig& grid, uint64_t seed,
      const PerAction<SemanticSymbol>& anchors,
      const std::vector<std::pair<Observation, SemanticSymbol>>& entries);

  const GridConfig& grid() const { return world_.config(); }
  const GridWorld& world() const { return world_; }
  const ObservationDistribution& mu() const { return mu_; }
  uint64_t seed() const { return seed_; }
  const PerAction<SemanticSymbol>& anchors() const { return anchors_; }
  const SemanticSymbol& anchor(Action a) const {
    return anchors_[ActionIndex(a)];
  }

  // Table lookup. Throws std::invalid_argument on terminal observations.
  const SemanticSymbol& Encode(const Observation& obs) const;

  // Index of the nearest anchor, lowest index on exact ties.
  int AtomOf(const SemanticSymbol& x) const;

  PerAction<double> DecoderQ(const SemanticSymbol& x) const;

  // SoftMax(beta * q(., x)). beta = +inf is the argmax, beta = 0 is uniform.
  PerAction<double> ActionProbabilities(const SemanticSymbol& x,
                                        double beta) const;

  // Samples an action. Draws exactly one uniform from `rng` unless beta is
  // infinite, in which case nothing is drawn.
  Action Decode(const SemanticSymbol& x, double beta, Rng& rng) const;

  // The language's own value estimate for an observation, q(a, encode(obs)),
  // or the exact grid-world values when `source` is kOracle.
  PerAction<double> DecoderQTable(const Observation& obs,
                                  QSource source = QSource::kDecoder) const;

  // True when every observation's symbol decodes (argmax) to an optimal
  // action of the grid world.
  bool IsTaskConsistent() const;

  // Copy with one encoder entry replaced.
  Language WithSymbol(const Observation& obs, const SemanticSymbol& x) const;

  // Encoder entries in slot order.
  std::vector<std::pair<Observation, SemanticSymbol>> Entries() const;

 private:
  Language(const GridConfig& grid, uint64_t seed,
           const PerAction<SemanticSymbol>& anchors,
           std::vector<SemanticSymbol> table);

  GridWorld world_;
  ObservationDistribution mu_;
  uint64_t seed_;
  PerAction<SemanticSymbol> anchors_;
  // Indexed by GridConfig::SlotOf; terminal slots hold NaN.
  std::vector<SemanticSymbol> table_;
};

// Orientation that Language::Synthesize draws for `seed`.
Orientation OrientationForSeed(uint64_t seed);

// Replaces a fraction of encoder entries by the same jitter around the anchor
// of a different, randomly chosen action. The result deliberately breaks task
// consistency and is used to model systematic language errors.
Language PerturbEncoder(const Language& lang, double fraction, uint64_t seed);

}  // namespace semeq

#endif  // SEMEQ_LANGUAGE_H_
