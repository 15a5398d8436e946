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

#include "semeq/harness.h"

#include <atomic>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace semeq {
namespace {

constexpr uint64_t kPerturbSeedStream = 0x70657274ULL;

std::size_t StrategyIndex(Strategy s) { return static_cast<std::size_t>(s); }

std::vector<SemanticSymbol> SentTable(
    const GridConfig& grid,
    const std::function<SemanticSymbol(const Observation&)>& encode) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SemanticSymbol> table(grid.NumObservationSlots(),
                                    SemanticSymbol(nan, nan));
  for (const Observation& obs : NonTerminalObservations(grid)) {
    table[grid.SlotOf(obs)] = encode(obs);
  }
  return table;
}

}  // namespace

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kNoEqualization:
      return "no_equalization";
    case Strategy::kSourceGrounded:
      return "source_grounded";
    case Strategy::kTargetGrounded:
      return "target_grounded";
    case Strategy::kSmEqualized:
      return "sm_equalized";
    case Strategy::kEmEqualized:
      return "em_equalized";
  }
  return "?";
}

Strategy ParseStrategy(std::string_view text) {
  for (Strategy s : kAllStrategies) {
    if (StrategyName(s) == text) return s;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

bool NeedsCodebook(Strategy s) {
  return s == Strategy::kSmEqualized || s == Strategy::kEmEqualized;
}

Scenario::Scenario(const Language& source, const Language& target,
                   std::optional<TransformCodebook> codebook, QSource q_source,
                   bool clip)
    : source_(source), target_(target), codebook_(std::move(codebook)) {
  CheckCompatible(source_, target_);
  const GridConfig& g = source_.grid();
  auto encoder_of = [](const Language& lang) {
    return [&lang](const Observation& o) { return lang.Encode(o); };
  };
  sent_[StrategyIndex(Strategy::kNoEqualization)] =
      SentTable(g, encoder_of(source_));
  sent_[StrategyIndex(Strategy::kSourceGrounded)] =
      SentTable(g, encoder_of(source_));
  sent_[StrategyIndex(Strategy::kTargetGrounded)] =
      SentTable(g, encoder_of(target_));
  if (codebook_) {
    const EqualizedLanguage sm(source_,
                               Policy::SemanticRisk(*codebook_, source_), clip);
    const EqualizedLanguage em(
        source_,
        Policy::EffectivenessRisk(*codebook_, source_, target_, q_source),
        clip);
    sent_[StrategyIndex(Strategy::kSmEqualized)] =
        SentTable(g, [&](const Observation& o) { return sm.Encode(o); });
    sent_[StrategyIndex(Strategy::kEmEqualized)] =
        SentTable(g, [&](const Observation& o) { return em.Encode(o); });
  }
}

Scenario Scenario::Build(const Language& source, const Language& target,
                         const std::vector<Strategy>& strategies,
                         QSource q_source, bool clip,
                         const CodebookOptions& codebook_options) {
  std::optional<TransformCodebook> codebook;
  for (Strategy s : strategies) {
    if (NeedsCodebook(s)) {
      codebook = BuildCodebook(source, target, codebook_options);
      break;
    }
  }
  return Scenario(source, target, std::move(codebook), q_source, clip);
}

Scenario Scenario::WithCodebook(const Language& source, const Language& target,
                                const TransformCodebook& codebook,
                                QSource q_source, bool clip) {
  return Scenario(source, target, codebook, q_source, clip);
}

const SemanticSymbol& Scenario::Sent(Strategy s, const Observation& obs) const {
  const auto& table = sent_[StrategyIndex(s)];
  if (table.empty()) {
    throw std::logic_error("strategy " + std::string(StrategyName(s)) +
                           " needs a codebook");
  }
  if (obs.IsTerminal()) {
    throw std::invalid_argument("terminal observation " + ToString(obs));
  }
  return table[grid().SlotOf(obs)];
}

const Language& Scenario::Decoder(Strategy s) const {
  return s == Strategy::kSourceGrounded ? source_ : target_;
}

EpisodeRecord RunEpisodeFrom(const Scenario& scenario, Strategy strategy,
                             const AwgnChannel& channel, double beta,
                             const Observation& start, Rng& rng,
                             std::vector<StepTrace>* trace) {
  const Language& decoder = scenario.Decoder(strategy);
  const GridWorld& world = decoder.world();
  const int max_steps = scenario.grid().max_steps;
  EpisodeRecord record;
  record.strategy = strategy;
  record.snr_db = channel.snr_db();
  record.beta = beta;
  record.length = max_steps;
  record.success = false;

  Observation obs = start;
  for (int t = 1; t <= max_steps; ++t) {
    const SemanticSymbol& sent = scenario.Sent(strategy, obs);
    const SemanticSymbol received = channel.Transmit(sent, rng);
    const Action action = decoder.Decode(received, beta, rng);
    if (trace != nullptr) trace->push_back({t, obs, sent, received, action});
    obs = world.Step(obs, action);
    if (obs.IsTerminal()) {
      record.length = t;
      record.success = true;
      break;
    }
  }
  return record;
}

EpisodeRecord RunEpisode(const Scenario& scenario, Strategy strategy,
                         const AwgnChannel& channel, double beta, uint64_t seed,
                         std::vector<StepTrace>* trace) {
  Rng rng(seed);
  const GridConfig& g = scenario.grid();
  const int cells = g.NumCells();
  const int treasure = UniformIndex(rng, cells);
  int agent = UniformIndex(rng, cells - 1);
  if (agent >= treasure) ++agent;
  const Observation start{{agent % g.width, agent / g.width},
                          {treasure % g.width, treasure / g.width}};
  EpisodeRecord record =
      RunEpisodeFrom(scenario, strategy, channel, beta, start, rng, trace);
  record.seed = seed;
  return record;
}

CellSummary Summarize(const std::vector<EpisodeRecord>& records) {
  CellSummary s;
  if (records.empty()) return s;
  s.strategy = records.front().strategy;
  s.snr_db = records.front().snr_db;
  s.beta = records.front().beta;
  s.episodes = static_cast<int>(records.size());
  double sum = 0.0;
  int successes = 0;
  for (const EpisodeRecord& r : records) {
    sum += r.length;
    if (r.success) ++successes;
  }
  s.mean_length = sum / s.episodes;
  double squares = 0.0;
  for (const EpisodeRecord& r : records) {
    squares += (r.length - s.mean_length) * (r.length - s.mean_length);
  }
  s.std_length = s.episodes > 1 ? std::sqrt(squares / (s.episodes - 1)) : 0.0;
  s.stderr_length = s.std_length / std::sqrt(static_cast<double>(s.episodes));
  s.success_rate = static_cast<double>(successes) / s.episodes;
  return s;
}

void SweepConfig::Validate() const {
  grid.Validate();
  if (episodes_per_point < 1) {
    throw std::invalid_argument("episodes_per_point must be >= 1");
  }
  if (snr_grid.empty()) throw std::invalid_argument("snr_grid is empty");
  if (beta_grid.empty()) throw std::invalid_argument("beta_grid is empty");
  if (strategies.empty()) throw std::invalid_argument("no strategies given");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (!(perturb_encoder >= 0.0 && perturb_encoder <= 1.0)) {
    throw std::invalid_argument("perturb_encoder must lie in [0, 1]");
  }
  for (double b : beta_grid) {
    if (!(b >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  }
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
}

Language SourceLanguage(const SweepConfig& cfg) {
  SynthesisOptions options;
  options.jitter_radius = cfg.jitter_radius;
  Language lang = Language::Synthesize(cfg.grid, cfg.source_seed, options);
  if (cfg.perturb_encoder > 0.0) {
    lang = PerturbEncoder(lang, cfg.perturb_encoder,
                          DeriveSeed(cfg.source_seed, {kPerturbSeedStream}));
  }
  return lang;
}

Language TargetLanguage(const SweepConfig& cfg) {
  SynthesisOptions options;
  options.jitter_radius = cfg.jitter_radius;
  if (cfg.target_rotation_deg) {
    Orientation o = OrientationForSeed(cfg.source_seed);
    o.angle += *cfg.target_rotation_deg * std::numbers::pi / 180.0;
    options.orientation = o;
  }
  Language lang = Language::Synthesize(cfg.grid, cfg.target_seed, options);
  if (cfg.perturb_encoder > 0.0) {
    lang = PerturbEncoder(lang, cfg.perturb_encoder,
                          DeriveSeed(cfg.target_seed, {kPerturbSeedStream}));
  }
  return lang;
}

Scenario MakeScenario(const SweepConfig& cfg) {
  cfg.Validate();
  return Scenario::Build(SourceLanguage(cfg), TargetLanguage(cfg),
                         cfg.strategies, cfg.q_source, cfg.clip);
}

uint64_t EpisodeSeed(uint64_t eval_seed, std::size_t point,
                     std::size_t episode) {
  return DeriveSeed(eval_seed, {point, episode});
}

std::vector<EpisodeRecord> RunCell(const Scenario& scenario, Strategy strategy,
                                   double snr_db, double beta,
                                   std::size_t point, int episodes,
                                   uint64_t eval_seed, int workers) {
  const AwgnChannel channel(snr_db);
  std::vector<EpisodeRecord> records(episodes);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int e = next++; e < episodes; e = next++) {
      records[e] = RunEpisode(scenario, strategy, channel, beta,
                              EpisodeSeed(eval_seed, point, e));
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return records;
}

std::vector<CellSummary> SweepSnr(const Scenario& scenario,
                                  const SweepConfig& cfg) {
  cfg.Validate();
  std::vector<CellSummary> rows;
  for (Strategy s : cfg.strategies) {
    for (std::size_t p = 0; p < cfg.snr_grid.size(); ++p) {
      rows.push_back(Summarize(RunCell(scenario, s, cfg.snr_grid[p], cfg.beta,
                                       p, cfg.episodes_per_point, cfg.eval_seed,
                                       cfg.workers)));
    }
  }
  return rows;
}

std::vector<CellSummary> SweepBeta(const Scenario& scenario,
                                   const SweepConfig& cfg) {
  cfg.Validate();
  std::vector<CellSummary> rows;
  for (Strategy s : cfg.strategies) {
    for (std::size_t p = 0; p < cfg.beta_grid.size(); ++p) {
      rows.push_back(Summarize(
          RunCell(scenario, s, cfg.snr_db, cfg.beta_grid[p], p,
                  cfg.episodes_per_point, cfg.eval_seed, cfg.workers)));
    }
  }
  return rows;
}

std::string FormatReal(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string ToCsv(const std::vector<CellSummary>& rows) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const CellSummary& r : rows) {
    out += StrategyName(r.strategy);
    out += ',' + FormatReal(r.snr_db) + ',' + FormatReal(r.beta) + ',' +
           std::to_string(r.episodes) + ',' + FormatReal(r.mean_length) + ',' +
           FormatReal(r.std_length) + ',' + FormatReal(r.stderr_length) + ',' +
           FormatReal(r.success_rate) + '\n';
  }
  return out;
}

}  // namespace semeq
