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

#ifndef SEMEQ_GRIDWORLD_H_
#define SEMEQ_GRIDWORLD_H_

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace semeq {

// Fixed action alphabet. The integer value is also the atom index of the
// decoder partition that selects the action.
enum class Action : int { kRight = 0, kDown = 1, kLeft = 2, kUp = 3 };

inline constexpr int kNumActions = 4;
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::kRight, Action::kDown, Action::kLeft, Action::kUp};

constexpr int ActionIndex(Action a) { return static_cast<int>(a); }
Action ActionFromIndex(int index);
std::string_view ActionName(Action a);

template <typename T>
using PerAction = std::array<T, kNumActions>;

struct Cell {
  int col = 0;
  int row = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Rows grow downwards: kDown increases `row`.
struct Observation {
  Cell agent;
  Cell treasure;

  bool IsTerminal() const { return agent == treasure; }
  friend auto operator<=>(const Observation&, const Observation&) = default;
};

std::string ToString(const Observation& obs);

struct GridConfig {
  int width = 5;
  int height = 5;
  int max_steps = 150;

  // Throws std::invalid_argument unless width, height >= 2 and
  // max_steps >= width + height.
  void Validate() const;

  int NumCells() const { return width * height; }
  bool Contains(Cell c) const {
    return c.col >= 0 && c.col < width && c.row >= 0 && c.row < height;
  }
  // Dense index over all (agent, treasure) pairs, terminal ones included.
  std::size_t NumObservationSlots() const {
    return static_cast<std::size_t>(NumCells()) * NumCells();
  }
  std::size_t SlotOf(const Observation& obs) const;
  Observation ObservationAtSlot(std::size_t slot) const;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

// Parses "WxH" (e.g. "5x5").
GridConfig ParseGridSize(std::string_view text, int max_steps = 150);

// All non-terminal observations in slot order.
std::vector<Observation> NonTerminalObservations(const GridConfig& cfg);

struct ObservationDistribution {
  std::vector<Observation> support;
  std::vector<double> weights;
};

// Uniform mass over every non-terminal observation.
ObservationDistribution UniformMu(const GridConfig& cfg);

int ManhattanDistance(Cell a, Cell b);

// Deterministic obstacle-free grid world. The action-value oracle is the
// negative number of steps still needed after taking an action, so
// QStar(o, a) = -(1 + D(step(o, a).agent, treasure)).
class GridWorld {
 public:
  explicit GridWorld(GridConfig cfg);

  const GridConfig& config() const { return cfg_; }

  // Moves the agent one cell; moves into a wall leave it in place.
  // Throws std::invalid_argument on terminal or out-of-bounds input.
  Observation Step(const Observation& obs, Action act) const;

  double QStar(const Observation& obs, Action act) const;
  PerAction<double> QValues(const Observation& obs) const;
  double QStarPlus(const Observation& obs, Action act) const;
  PerAction<double> QPlusValues(const Observation& obs) const;

  // Argmax of QStar, lowest action index on ties.
  Action BestAction(const Observation& obs) const;

  // Shortest path length between two cells.
  int Distance(Cell a, Cell b) const { return ManhattanDistance(a, b); }

 private:
  void CheckPlayable(const Observation& obs) const;

  GridConfig cfg_;
};

}  // namespace semeq

#endif  // SEMEQ_GRIDWORLD_H_
