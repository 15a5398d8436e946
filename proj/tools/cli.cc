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

#include "cli.h"

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "semeq/channel.h"
#include "semeq/codebook.h"
#include "semeq/equalizer.h"
#include "semeq/gridworld.h"
#include "semeq/harness.h"
#include "semeq/language.h"
#include "semeq/mismatch.h"
#include "semeq/random.h"
#include "semeq/serialization.h"

namespace semeq::cli {
namespace {

constexpr uint64_t kPerturbTag = 0x70657274;  // "pert"

std::vector<double> ParseRealList(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      throw std::invalid_argument("empty item in '" + text + "'");
    }
    values.push_back(ParseRealOrInf(item));
  }
  if (values.empty()) throw std::invalid_argument("empty list");
  return values;
}

std::vector<Strategy> ParseStrategyList(const std::string& text) {
  std::vector<Strategy> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseStrategy(item));
  if (out.empty()) throw std::invalid_argument("empty strategy list");
  return out;
}

struct Globals {
  std::optional<uint64_t> seed;
  std::string grid;
  std::string out;
};

void Emit(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out.empty()) {
    out << text;
  } else {
    WriteFile(g.out, text);
  }
}

GridConfig GridFrom(const Globals& g, int max_steps) {
  if (g.grid.empty()) {
    GridConfig grid;
    grid.max_steps = max_steps;
    grid.Validate();
    return grid;
  }
  return ParseGridSize(g.grid, max_steps);
}

Language LoadLanguage(const std::string& path) {
  return LanguageFromJson(ReadFile(path));
}

// --- synth-lang -------------------------------------------------------------

struct SynthArgs {
  int max_steps = 150;
  std::string jitter;
  std::optional<double> rotation_deg;
  bool reflect = false;
  double perturb = 0.0;
};

void AddSynth(CLI::App& app, SynthArgs& a) {
  app.add_option("--max-steps", a.max_steps, "Episode step cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--jitter", a.jitter,
                 "Jitter radius; default 0.15 of the anchor radius");
  app.add_option("--rotation", a.rotation_deg,
                 "Orientation angle in degrees instead of the seeded one");
  app.add_flag("--reflect", a.reflect,
               "Reflect before rotating (only with --rotation)");
  app.add_option("--perturb-encoder", a.perturb,
                 "Fraction of entries moved to a wrong atom")
      ->check(CLI::Range(0.0, 1.0));
}

void RunSynth(const Globals& g, const SynthArgs& a, std::ostream& out) {
  if (a.reflect && !a.rotation_deg) {
    throw std::invalid_argument("--reflect requires --rotation");
  }
  const uint64_t seed = g.seed.value_or(1);
  SynthesisOptions opts;
  if (!a.jitter.empty()) opts.jitter_radius = ParseRealOrInf(a.jitter);
  if (a.rotation_deg) {
    opts.orientation =
        Orientation{*a.rotation_deg * std::numbers::pi / 180.0, a.reflect};
  }
  Language lang = Language::Synthesize(GridFrom(g, a.max_steps), seed, opts);
  if (a.perturb > 0.0) {
    lang = PerturbEncoder(lang, a.perturb, DeriveSeed(seed, {kPerturbTag}));
  }
  Emit(g, out, LanguageToJson(lang));
}

// --- codebook ---------------------------------------------------------------

struct CodebookArgs {
  std::string src;
  std::string tgt;
  FitOptions fit;
};

void AddCodebook(CLI::App& app, CodebookArgs& a) {
  app.add_option("--src", a.src, "Source language JSON")->required();
  app.add_option("--tgt", a.tgt, "Target language JSON")->required();
  app.add_option("--ridge", a.fit.ridge, "Ridge weight towards the identity")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--rounds", a.fit.rounds, "Alternating fit rounds")
      ->check(CLI::PositiveNumber);
  app.add_option("--epsilon", a.fit.epsilon,
                 "Relative entropic blur; 0 couples exactly")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--sinkhorn-max-iter", a.fit.sinkhorn_max_iter)
      ->check(CLI::PositiveNumber);
}

void RunCodebook(const Globals& g, const CodebookArgs& a, std::ostream& out) {
  const Language src = LoadLanguage(a.src);
  const Language tgt = LoadLanguage(a.tgt);
  Emit(g, out, CodebookToJson(BuildCodebook(src, tgt, {a.fit})));
}

// --- metrics ----------------------------------------------------------------

struct MetricsArgs {
  std::string src;
  std::string tgt;
  std::string codebook;
  std::string policy = "none";
  std::string q_source = "decoder";
  bool no_clip = false;
  std::string per_obs;
};

void AddMetrics(CLI::App& app, MetricsArgs& a) {
  app.add_option("--src", a.src, "Source language JSON")->required();
  app.add_option("--tgt", a.tgt, "Target language JSON")->required();
  app.add_option("--codebook", a.codebook,
                 "Codebook JSON; built on the fly when a policy needs one");
  app.add_option("--policy", a.policy, "none | sm | em | fixed:i,j");
  app.add_option("--q-source", a.q_source, "decoder | oracle");
  app.add_flag("--no-clip", a.no_clip, "Do not clip equalized symbols");
  app.add_option("--per-obs", a.per_obs,
                 "Write the per-observation breakdown CSV to this path");
}

void RunMetrics(const Globals& g, const MetricsArgs& a, std::ostream& out) {
  const Language src = LoadLanguage(a.src);
  const Language tgt = LoadLanguage(a.tgt);
  CodebookIndex fixed;
  const PolicyKind kind = ParsePolicyKind(a.policy, &fixed);
  const QSource q_source = ParseQSource(a.q_source);

  std::optional<TransformCodebook> codebook;
  if (kind != PolicyKind::kNone) {
    codebook = a.codebook.empty() ? BuildCodebook(src, tgt)
                                  : CodebookFromJson(ReadFile(a.codebook));
  }
  Policy policy = Policy::None();
  switch (kind) {
    case PolicyKind::kNone:
      break;
    case PolicyKind::kSemanticRisk:
      policy = Policy::SemanticRisk(*codebook, src);
      break;
    case PolicyKind::kEffectivenessRisk:
      policy = Policy::EffectivenessRisk(*codebook, src, tgt, q_source);
      break;
    case PolicyKind::kFixed:
      policy = Policy::Fixed(*codebook, fixed);
      break;
  }
  SymbolTransform transform;
  if (kind != PolicyKind::kNone || a.no_clip) {
    transform = EqualizedLanguage(src, policy, !a.no_clip).Transform();
  }
  const MismatchReport report =
      ComputeMismatch(src, tgt, transform, !a.per_obs.empty());
  if (!a.per_obs.empty()) WriteFile(a.per_obs, MismatchBreakdownToCsv(report));
  Emit(g, out, MismatchReportToJson(report));
}

// --- sweeps and episodes ----------------------------------------------------

struct ScenarioArgs {
  std::string config;
  std::string src;
  std::string tgt;
  std::string codebook;
  std::optional<uint64_t> source_seed;
  std::optional<uint64_t> target_seed;
  std::optional<int> max_steps;
  std::string q_source;
  bool no_clip = false;
  std::optional<double> jitter;
  std::optional<double> perturb;
  std::optional<double> target_rotation;
};

void AddScenario(CLI::App& app, ScenarioArgs& a) {
  app.add_option("--config", a.config, "Sweep config JSON; flags override it");
  app.add_option("--src", a.src, "Source language JSON instead of a seed");
  app.add_option("--tgt", a.tgt, "Target language JSON instead of a seed");
  app.add_option("--codebook", a.codebook, "Precomputed codebook JSON");
  app.add_option("--source-seed", a.source_seed);
  app.add_option("--target-seed", a.target_seed);
  app.add_option("--max-steps", a.max_steps)->check(CLI::PositiveNumber);
  app.add_option("--q-source", a.q_source, "decoder | oracle");
  app.add_flag("--no-clip", a.no_clip, "Do not clip equalized symbols");
  app.add_option("--jitter", a.jitter,
                 "Jitter radius of synthesized languages");
  app.add_option("--perturb-encoder", a.perturb)->check(CLI::Range(0.0, 1.0));
  app.add_option("--target-rotation", a.target_rotation,
                 "Target = source geometry rotated by this many degrees");
}

SweepConfig ConfigFrom(const Globals& g, const ScenarioArgs& a) {
  SweepConfig cfg;
  if (!a.config.empty()) cfg = SweepConfigFromJson(ReadFile(a.config), cfg);
  if (!g.grid.empty()) {
    cfg.grid = ParseGridSize(g.grid, cfg.grid.max_steps);
  }
  if (a.max_steps) cfg.grid.max_steps = *a.max_steps;
  if (g.seed) cfg.eval_seed = *g.seed;
  if (a.source_seed) cfg.source_seed = *a.source_seed;
  if (a.target_seed) cfg.target_seed = *a.target_seed;
  if (!a.q_source.empty()) cfg.q_source = ParseQSource(a.q_source);
  if (a.no_clip) cfg.clip = false;
  if (a.jitter) cfg.jitter_radius = *a.jitter;
  if (a.perturb) cfg.perturb_encoder = *a.perturb;
  if (a.target_rotation) cfg.target_rotation_deg = *a.target_rotation;
  if (!g.out.empty()) cfg.output_path = g.out;
  return cfg;
}

Scenario ScenarioFrom(const SweepConfig& cfg, const ScenarioArgs& a,
                      const std::vector<Strategy>& strategies) {
  if (a.src.empty() != a.tgt.empty()) {
    throw std::invalid_argument("--src and --tgt must be given together");
  }
  const Language src =
      a.src.empty() ? SourceLanguage(cfg) : LoadLanguage(a.src);
  const Language tgt =
      a.tgt.empty() ? TargetLanguage(cfg) : LoadLanguage(a.tgt);
  if (!a.codebook.empty()) {
    return Scenario::WithCodebook(src, tgt,
                                  CodebookFromJson(ReadFile(a.codebook)),
                                  cfg.q_source, cfg.clip);
  }
  return Scenario::Build(src, tgt, strategies, cfg.q_source, cfg.clip);
}

struct SweepArgs {
  ScenarioArgs scenario;
  std::string snr;
  std::string beta;
  std::optional<int> episodes;
  std::string strategies;
  std::optional<int> workers;
};

void AddSweep(CLI::App& app, SweepArgs& a, bool snr_sweep) {
  AddScenario(app, a.scenario);
  app.add_option("--snr", a.snr,
                 snr_sweep ? "Comma-separated SNR grid in dB (inf allowed)"
                           : "SNR in dB (inf allowed)");
  app.add_option("--beta", a.beta,
                 snr_sweep ? "Decoder inverse temperature (inf allowed)"
                           : "Comma-separated beta grid (inf allowed)");
  app.add_option("--episodes", a.episodes, "Episodes per point")
      ->check(CLI::PositiveNumber);
  app.add_option("--strategies", a.strategies, "Comma-separated strategies");
  app.add_option("--workers", a.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
}

void RunSweep(const Globals& g, const SweepArgs& a, bool snr_sweep,
              std::ostream& out) {
  SweepConfig cfg = ConfigFrom(g, a.scenario);
  if (snr_sweep) {
    if (!a.snr.empty()) cfg.snr_grid = ParseRealList(a.snr);
    if (!a.beta.empty()) cfg.beta = ParseRealOrInf(a.beta);
  } else {
    if (!a.snr.empty()) cfg.snr_db = ParseRealOrInf(a.snr);
    if (!a.beta.empty()) cfg.beta_grid = ParseRealList(a.beta);
  }
  if (a.episodes) cfg.episodes_per_point = *a.episodes;
  if (!a.strategies.empty()) cfg.strategies = ParseStrategyList(a.strategies);
  if (a.workers) cfg.workers = *a.workers;
  cfg.Validate();
  const Scenario scenario = ScenarioFrom(cfg, a.scenario, cfg.strategies);
  const auto rows =
      snr_sweep ? SweepSnr(scenario, cfg) : SweepBeta(scenario, cfg);
  Globals sink = g;
  sink.out = cfg.output_path;
  Emit(sink, out, ToCsv(rows));
}

struct EpisodeArgs {
  ScenarioArgs scenario;
  std::string strategy = "no_equalization";
  std::string snr = "inf";
  std::string beta = "inf";
};

void AddEpisode(CLI::App& app, EpisodeArgs& a) {
  AddScenario(app, a.scenario);
  app.add_option("--strategy", a.strategy, "Strategy to run");
  app.add_option("--snr", a.snr, "SNR in dB (inf allowed)");
  app.add_option("--beta", a.beta, "Decoder inverse temperature");
}

void RunEpisodeCommand(const Globals& g, const EpisodeArgs& a,
                       std::ostream& out) {
  const SweepConfig cfg = ConfigFrom(g, a.scenario);
  cfg.grid.Validate();
  const Strategy strategy = ParseStrategy(a.strategy);
  const Scenario scenario = ScenarioFrom(cfg, a.scenario, {strategy});
  const AwgnChannel channel(ParseRealOrInf(a.snr));
  const double beta = ParseRealOrInf(a.beta);
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");

  std::vector<StepTrace> trace;
  const EpisodeRecord record =
      RunEpisode(scenario, strategy, channel, beta, cfg.eval_seed, &trace);
  std::string text =
      "step,treasure_col,treasure_row,agent_col,agent_row,sent_x,sent_y,"
      "received_x,received_y,action\n";
  for (const StepTrace& s : trace) {
    text += std::to_string(s.step) + "," + std::to_string(s.obs.treasure.col) +
            "," + std::to_string(s.obs.treasure.row) + "," +
            std::to_string(s.obs.agent.col) + "," +
            std::to_string(s.obs.agent.row) + "," + FormatReal(s.sent.x()) +
            "," + FormatReal(s.sent.y()) + "," + FormatReal(s.received.x()) +
            "," + FormatReal(s.received.y()) + "," +
            std::string(ActionName(s.action)) + "\n";
  }
  Emit(g, out, text);
  if (!g.out.empty()) {
    out << "length=" << record.length
        << " success=" << (record.success ? "true" : "false") << "\n";
  }
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Semantic equalization experiments on a grid world", "semeq"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed");
  app.add_option("--grid", g.grid, "Grid size WxH");
  app.add_option("--out", g.out, "Output path; stdout when absent");

  SynthArgs synth;
  CodebookArgs codebook;
  MetricsArgs metrics;
  EpisodeArgs episode;
  SweepArgs sweep_snr;
  SweepArgs sweep_beta;
  CLI::App* synth_cmd =
      app.add_subcommand("synth-lang", "Synthesize a task-optimal language");
  CLI::App* metrics_cmd =
      app.add_subcommand("metrics", "Semantic and effectiveness mismatch");
  CLI::App* codebook_cmd =
      app.add_subcommand("codebook", "Fit the atom-pair transform codebook");
  CLI::App* episode_cmd =
      app.add_subcommand("episode", "Run one episode and print its trace");
  CLI::App* snr_cmd = app.add_subcommand("sweep-snr", "Sweep over SNR");
  CLI::App* beta_cmd = app.add_subcommand("sweep-beta", "Sweep over beta");
  AddSynth(*synth_cmd, synth);
  AddMetrics(*metrics_cmd, metrics);
  AddCodebook(*codebook_cmd, codebook);
  AddEpisode(*episode_cmd, episode);
  AddSweep(*snr_cmd, sweep_snr, true);
  AddSweep(*beta_cmd, sweep_beta, false);
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*synth_cmd) RunSynth(g, synth, out);
    if (*metrics_cmd) RunMetrics(g, metrics, out);
    if (*codebook_cmd) RunCodebook(g, codebook, out);
    if (*episode_cmd) RunEpisodeCommand(g, episode, out);
    if (*snr_cmd) RunSweep(g, sweep_snr, true, out);
    if (*beta_cmd) RunSweep(g, sweep_beta, false, out);
  } catch (const std::exception& e) {
    err << "semeq: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace semeq::cli
