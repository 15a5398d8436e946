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

#include "semeq/gridworld.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace semeq {

Action ActionFromIndex(int index) {
  if (index < 0 || index >= kNumActions) {
    throw std::out_of_range("action index out of range: " +
                            std::to_string(index));
  }
  return static_cast<Action>(index);
}

std::string_view ActionName(Action a) {
  switch (a) {
    case Action::kRight:
      return "right";
    case Action::kDown:
      return "down";
    case Action::kLeft:
      return "left";
    case Action::kUp:
      return "up";
  }
  return "?";
}

std::string ToString(const Observation& obs) {
  return "agent=(" + std::to_string(obs.agent.col) + "," +
         std::to_string(obs.agent.row) + ") treasure=(" +
         std::to_string(obs.treasure.col) + "," +
         std::to_string(obs.treasure.row) + ")";
}

void GridConfig::Validate() const {
  if (width < 2 || height < 2) {
    throw std::invalid_argument("grid must be at least 2x2, got " +
                                std::to_string(width) + "x" +
                                std::to_string(height));
  }
  if (max_steps < width + height) {
    throw std::invalid_argument("max_steps must be >= width + height");
  }
}

std::size_t GridConfig::SlotOf(const Observation& obs) const {
  if (!Contains(obs.agent) || !Contains(obs.treasure)) {
    throw std::invalid_argument("observation outside the grid: " +
                                ToString(obs));
  }
  const std::size_t agent = obs.agent.row * width + obs.agent.col;
  const std::size_t treasure = obs.treasure.row * width + obs.treasure.col;
  return treasure * NumCells() + agent;
}

Observation GridConfig::ObservationAtSlot(std::size_t slot) const {
  const std::size_t cells = NumCells();
  const auto agent = static_cast<int>(slot % cells);
  const auto treasure = static_cast<int>(slot / cells);
  return Observation{{agent % width, agent / width},
                     {treasure % width, treasure / width}};
}

GridConfig ParseGridSize(std::string_view text, int max_steps) {
  const auto x = text.find_first_of("xX");
  GridConfig cfg;
  cfg.max_steps = max_steps;
  auto parse = [&](std::string_view part, int& out) {
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, out);
    return ec == std::errc() && ptr == end;
  };
  if (x == std::string_view::npos || !parse(text.substr(0, x), cfg.width) ||
      !parse(text.substr(x + 1), cfg.height)) {
    throw std::invalid_argument("grid size must look like WxH, got '" +
                                std::string(text) + "'");
  }
  cfg.Validate();
  return cfg;
}

std::vector<Observation> NonTerminalObservations(const GridConfig& cfg) {
  std::vector<Observation> out;
  out.reserve(cfg.NumObservationSlots() - cfg.NumCells());
  for (std::size_t slot = 0; slot < cfg.NumObservationSlots(); ++slot) {
    const Observation obs = cfg.ObservationAtSlot(slot);
    if (!obs.IsTerminal()) out.push_back(obs);
  }
  return out;
}

ObservationDistribution UniformMu(const GridConfig& cfg) {
  cfg.Validate();
  ObservationDistribution mu;
  mu.support = NonTerminalObservations(cfg);
  mu.weights.assign(mu.support.size(), 1.0 / mu.support.size());
  return mu;
}

int ManhattanDistance(Cell a, Cell b) {
  return std::abs(a.col - b.col) + std::abs(a.row - b.row);
}

GridWorld::GridWorld(GridConfig cfg) : cfg_(cfg) { cfg_.Validate(); }

void GridWorld::CheckPlayable(const Observation& obs) const {
  if (!cfg_.Contains(obs.agent) || !cfg_.Contains(obs.treasure)) {
    throw std::invalid_argument("observation outside the grid: " +
                                ToString(obs));
  }
  if (obs.IsTerminal()) {
    throw std::invalid_argument("terminal observation: " + ToString(obs));
  }
}

Observation GridWorld::Step(const Observation& obs, Action act) const {
  CheckPlayable(obs);
  Observation next = obs;
  switch (act) {
    case Action::kRight:
      next.agent.col = std::min(obs.agent.col + 1, cfg_.width - 1);
      break;
    case Action::kDown:
      next.agent.row = std::min(obs.agent.row + 1, cfg_.height - 1);
      break;
    case Action::kLeft:
      next.agent.col = std::max(obs.agent.col - 1, 0);
      break;
    case Action::kUp:
      next.agent.row = std::max(obs.agent.row - 1, 0);
      break;
  }
  return next;
}

double GridWorld::QStar(const Observation& obs, Action act) const {
  const Observation next = Step(obs, act);
  return -(1.0 + Distance(next.agent, next.treasure));
}

PerAction<double> GridWorld::QValues(const Observation& obs) const {
  PerAction<double> q;
  for (Action a : kAllActions) q[ActionIndex(a)] = QStar(obs, a);
  return q;
}

double GridWorld::QStarPlus(const Observation& obs, Action act) const {
  return QPlusValues(obs)[ActionIndex(act)];
}

PerAction<double> GridWorld::QPlusValues(const Observation& obs) const {
  PerAction<double> q = QValues(obs);
  const double lo = *std::min_element(q.begin(), q.end());
  for (double& v : q) v -= lo;
  return q;
}

Action GridWorld::BestAction(const Observation& obs) const {
  const PerAction<double> q = QValues(obs);
  // max_element returns the first maximum, which is the index tie-break.
  return ActionFromIndex(
      static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin()));
}

}  // namespace semeq
