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

#ifndef SEMEQ_HARNESS_H_
#define SEMEQ_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semeq/channel.h"
#include "semeq/codebook.h"
#include "semeq/equalizer.h"
#include "semeq/gridworld.h"
#include "semeq/language.h"

namespace semeq {

enum class Strategy {
  kNoEqualization,
  kSourceGrounded,
  kTargetGrounded,
  kSmEqualized,
  kEmEqualized,
};

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::kNoEqualization, Strategy::kSourceGrounded,
    Strategy::kTargetGrounded, Strategy::kSmEqualized, Strategy::kEmEqualized};

std::string_view StrategyName(Strategy s);
Strategy ParseStrategy(std::string_view text);
bool NeedsCodebook(Strategy s);

struct EpisodeRecord {
  Strategy strategy = Strategy::kNoEqualization;
  double snr_db = kInfinity;
  double beta = kInfinity;
  int length = 0;
  bool success = false;
  uint64_t seed = 0;
};

struct StepTrace {
  int step = 0;
  Observation obs;
  SemanticSymbol sent;
  SemanticSymbol received;
  Action action = Action::kRight;
};

// Two languages plus everything derived from them that the episode loop
// reads: the codebook, the two equalizer policies and, per strategy, the
// table of transmitted symbols. Immutable once built, so it can be shared by
// any number of worker threads.
class Scenario {
 public:
  // Builds a codebook only if one of `strategies` needs it.
  static Scenario Build(const Language& source, const Language& target,
                        const std::vector<Strategy>& strategies,
                        QSource q_source = QSource::kDecoder, bool clip = true,
                        const CodebookOptions& codebook_options = {});
  static Scenario WithCodebook(const Language& source, const Language& target,
                               const TransformCodebook& codebook,
                               QSource q_source = QSource::kDecoder,
                               bool clip = true);

  const Language& source() const { return source_; }
  const Language& target() const { return target_; }
  const GridConfig& grid() const { return source_.grid(); }
  const std::optional<TransformCodebook>& codebook() const { return codebook_; }

  // Symbol put on the channel for `obs` (post-equalization, post-clip).
  const SemanticSymbol& Sent(Strategy s, const Observation& obs) const;
  const Language& Decoder(Strategy s) const;

 private:
  Scenario(const Language& source, const Language& target,
           std::optional<TransformCodebook> codebook, QSource q_source,
           bool clip);

  Language source_;
  Language target_;
  std::optional<TransformCodebook> codebook_;
  std::array<std::vector<SemanticSymbol>, kAllStrategies.size()> sent_;
};

// Runs one episode from `start`: encode (equalize, clip), transmit, decode
// with inverse temperature `beta`, step; until the treasure is reached or
// max_steps steps have been taken.
EpisodeRecord RunEpisodeFrom(const Scenario& scenario, Strategy strategy,
                             const AwgnChannel& channel, double beta,
                             const Observation& start, Rng& rng,
                             std::vector<StepTrace>* trace = nullptr);

// Samples the start state (uniform treasure, uniform agent elsewhere) from a
// generator seeded with `seed`, then runs the episode with it.
EpisodeRecord RunEpisode(const Scenario& scenario, Strategy strategy,
                         const AwgnChannel& channel, double beta, uint64_t seed,
                         std::vector<StepTrace>* trace = nullptr);

struct CellSummary {
  Strategy strategy = Strategy::kNoEqualization;
  double snr_db = kInfinity;
  double beta = kInfinity;
  int episodes = 0;
  double mean_length = 0.0;
  double std_length = 0.0;
  double stderr_length = 0.0;
  double success_rate = 0.0;
};

CellSummary Summarize(const std::vector<EpisodeRecord>& records);

struct SweepConfig {
  GridConfig grid;
  uint64_t source_seed = 1;
  uint64_t target_seed = 2;
  uint64_t eval_seed = 3;
  std::vector<double> snr_grid = {0, 2, 4, 6, 8, 10, kInfinity};
  double beta = kInfinity;
  // Used by SweepBeta, which holds the SNR at `snr_db`.
  std::vector<double> beta_grid = {0, 1, 2, 5, kInfinity};
  double snr_db = kInfinity;
  int episodes_per_point = 2000;
  std::vector<Strategy> strategies = {kAllStrategies.begin(),
                                      kAllStrategies.end()};
  QSource q_source = QSource::kDecoder;
  bool clip = true;
  double jitter_radius = kDefaultJitterFraction * kAnchorRadius;
  // Fraction of encoder entries flipped to a wrong atom in both languages.
  double perturb_encoder = 0.0;
  // When set, the target is the source geometry rotated by this many
  // degrees (with its own jitter) instead of an independent draw.
  std::optional<double> target_rotation_deg;
  int workers = 1;
  std::string output_path;

  void Validate() const;
};

// The two languages a sweep config describes.
Language SourceLanguage(const SweepConfig& cfg);
Language TargetLanguage(const SweepConfig& cfg);
Scenario MakeScenario(const SweepConfig& cfg);

// Seed of episode `episode` at sweep point `point`. Strategies share it so
// that they are compared on common random numbers.
uint64_t EpisodeSeed(uint64_t eval_seed, std::size_t point,
                     std::size_t episode);

// Raw episode records of one (strategy, snr, beta) cell, in episode order.
std::vector<EpisodeRecord> RunCell(const Scenario& scenario, Strategy strategy,
                                   double snr_db, double beta,
                                   std::size_t point, int episodes,
                                   uint64_t eval_seed, int workers = 1);

// One row per (strategy, snr) in strategy-major order.
std::vector<CellSummary> SweepSnr(const Scenario& scenario,
                                  const SweepConfig& cfg);
// One row per (strategy, beta) in strategy-major order, at cfg.snr_db.
std::vector<CellSummary> SweepBeta(const Scenario& scenario,
                                   const SweepConfig& cfg);

inline constexpr std::string_view kSweepCsvHeader =
    "strategy,snr_db,beta,episodes,mean_length,std_length,stderr_length,"
    "success_rate";

// Shortest round-trip decimal; "inf" for +infinity.
std::string FormatReal(double value);
std::string ToCsv(const std::vector<CellSummary>& rows);

}  // namespace semeq

#endif  // SEMEQ_HARNESS_H_
