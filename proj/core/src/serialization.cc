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

#include "semeq/serialization.h"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif
#include "semeq/channel.h"
#include "semeq/equalizer.h"

namespace semeq {
namespace {

using nlohmann::json;

json Pair(double a, double b) { return json::array({a, b}); }
json CellJson(Cell c) { return json::array({c.col, c.row}); }

json Parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

void CheckVersion(const json& doc) {
  const int version = doc.at("format_version").get<int>();
  if (version != kFormatVersion) {
    throw std::invalid_argument("unsupported format_version " +
                                std::to_string(version));
  }
}

Eigen::Vector2d VectorFrom(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("expected a 2-element array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Cell CellFrom(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("expected a [col, row] pair");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

double RealOrInf(const json& j) {
  if (j.is_string()) return ParseRealOrInf(j.get<std::string>());
  return j.get<double>();
}

// Rethrows nlohmann's type/key errors as schema violations.
template <typename F>
auto WithSchemaErrors(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid ") + what + ": " +
                                e.what());
  }
}

}  // namespace

std::string LanguageToJson(const Language& lang) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["grid"] = {{"width", lang.grid().width},
                 {"height", lang.grid().height},
                 {"max_steps", lang.grid().max_steps}};
  doc["seed"] = lang.seed();
  json anchors = json::array();
  for (const SemanticSymbol& a : lang.anchors())
    anchors.push_back(Pair(a[0], a[1]));
  doc["anchors"] = std::move(anchors);
  json encoder = json::array();
  for (const auto& [obs, x] : lang.Entries()) {
    encoder.push_back({{"agent", CellJson(obs.agent)},
                       {"treasure", CellJson(obs.treasure)},
                       {"symbol", Pair(x[0], x[1])}});
  }
  doc["encoder"] = std::move(encoder);
  return doc.dump(2) + "\n";
}

Language LanguageFromJson(std::string_view text) {
  const json doc = Parse(text);
  return WithSchemaErrors("language document", [&] {
    CheckVersion(doc);
    GridConfig grid;
    grid.width = doc.at("grid").at("width").get<int>();
    grid.height = doc.at("grid").at("height").get<int>();
    grid.max_steps = doc.at("grid").at("max_steps").get<int>();
    const json& anchors_json = doc.at("anchors");
    if (!anchors_json.is_array() || anchors_json.size() != kNumActions) {
      throw std::invalid_argument("language needs exactly 4 anchors");
    }
    PerAction<SemanticSymbol> anchors;
    for (int a = 0; a < kNumActions; ++a)
      anchors[a] = VectorFrom(anchors_json[a]);
    std::vector<std::pair<Observation, SemanticSymbol>> entries;
    for (const json& e : doc.at("encoder")) {
      entries.emplace_back(
          Observation{CellFrom(e.at("agent")), CellFrom(e.at("treasure"))},
          VectorFrom(e.at("symbol")));
    }
    return Language::FromEntries(grid, doc.at("seed").get<uint64_t>(), anchors,
                                 entries);
  });
}

std::string CodebookToJson(const TransformCodebook& codebook) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["source_seed"] = codebook.source_seed();
  doc["target_seed"] = codebook.target_seed();
  json entries = json::array();
  for (int i = 0; i < kNumActions; ++i) {
    for (int j = 0; j < kNumActions; ++j) {
      const AffineMap& m = codebook.map(i, j);
      json row = json::array();
      for (double v : codebook.transfer_row(i, j)) row.push_back(v);
      entries.push_back(
          {{"i", i},
           {"j", j},
           {"linear", json::array({Pair(m.linear(0, 0), m.linear(0, 1)),
                                   Pair(m.linear(1, 0), m.linear(1, 1))})},
           {"offset", Pair(m.offset[0], m.offset[1])},
           {"info_transfer_row_cached", std::move(row)}});
    }
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

TransformCodebook CodebookFromJson(std::string_view text) {
  const json doc = Parse(text);
  return WithSchemaErrors("codebook document", [&] {
    CheckVersion(doc);
    AtomPairTable<AffineMap> maps;
    AtomPairTable<PerAction<double>> transfer;
    AtomPairTable<bool> seen{};
    for (const json& e : doc.at("entries")) {
      const int i = e.at("i").get<int>();
      const int j = e.at("j").get<int>();
      if (i < 0 || i >= kNumActions || j < 0 || j >= kNumActions) {
        throw std::invalid_argument("codebook entry index out of range");
      }
      if (seen[i][j]) throw std::invalid_argument("duplicate codebook entry");
      seen[i][j] = true;
      const json& lin = e.at("linear");
      if (!lin.is_array() || lin.size() != 2) {
        throw std::invalid_argument("linear must be a 2x2 array");
      }
      maps[i][j].linear.row(0) = VectorFrom(lin[0]).transpose();
      maps[i][j].linear.row(1) = VectorFrom(lin[1]).transpose();
      maps[i][j].offset = VectorFrom(e.at("offset"));
      const json& row = e.at("info_transfer_row_cached");
      if (!row.is_array() || row.size() != kNumActions) {
        throw std::invalid_argument("info_transfer_row_cached needs 4 values");
      }
      for (int k = 0; k < kNumActions; ++k)
        transfer[i][j][k] = row[k].get<double>();
    }
    for (const auto& row : seen) {
      for (bool b : row) {
        if (!b) throw std::invalid_argument("codebook needs all 16 entries");
      }
    }
    return TransformCodebook(doc.at("source_seed").get<uint64_t>(),
                             doc.at("target_seed").get<uint64_t>(), maps,
                             transfer);
  });
}

std::string MismatchReportToJson(const MismatchReport& report) {
  json doc = {{"sm", report.sm}, {"em", report.em}};
  return doc.dump(2) + "\n";
}

std::string MismatchBreakdownToCsv(const MismatchReport& report) {
  std::ostringstream out;
  out << "agent_col,agent_row,treasure_col,treasure_row,source_atom,"
         "target_atom,interpreted_action,best_action,q_plus_ratio\n";
  for (const ObservationBreakdown& b : report.per_observation) {
    out << b.obs.agent.col << ',' << b.obs.agent.row << ','
        << b.obs.treasure.col << ',' << b.obs.treasure.row << ','
        << b.source_atom << ',' << b.target_atom << ','
        << ActionName(b.interpreted) << ',' << ActionName(b.best) << ','
        << FormatReal(b.q_plus_ratio) << '\n';
  }
  return out.str();
}

SweepConfig SweepConfigFromJson(std::string_view text, SweepConfig base) {
  const json doc = Parse(text);
  return WithSchemaErrors("sweep config", [&] {
    static const std::set<std::string> kKeys = {
        "format_version",  "grid",       "seeds",
        "snr_grid",        "beta_grid",  "beta",
        "snr_db",          "strategies", "episodes_per_point",
        "q_source",        "clip",       "jitter_radius",
        "perturb_encoder", "workers",    "target_rotation_deg",
        "output_path"};
    if (!doc.is_object()) throw std::invalid_argument("expected an object");
    for (const auto& [key, value] : doc.items()) {
      if (!kKeys.contains(key)) {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    }
    SweepConfig cfg = std::move(base);
    auto read = [](const json& obj, const char* key, auto& field) {
      if (obj.contains(key)) {
        field = obj.at(key).get<std::remove_reference_t<decltype(field)>>();
      }
    };
    auto read_grid = [](const json& list, std::vector<double>& field) {
      field.clear();
      for (const json& v : list) field.push_back(RealOrInf(v));
    };
    if (doc.contains("grid")) {
      const json& g = doc["grid"];
      read(g, "width", cfg.grid.width);
      read(g, "height", cfg.grid.height);
      read(g, "max_steps", cfg.grid.max_steps);
    }
    if (doc.contains("seeds")) {
      const json& s = doc["seeds"];
      read(s, "source_seed", cfg.source_seed);
      read(s, "target_seed", cfg.target_seed);
      read(s, "eval_seed", cfg.eval_seed);
    }
    if (doc.contains("snr_grid")) read_grid(doc["snr_grid"], cfg.snr_grid);
    if (doc.contains("beta_grid")) read_grid(doc["beta_grid"], cfg.beta_grid);
    if (doc.contains("beta")) cfg.beta = RealOrInf(doc["beta"]);
    if (doc.contains("snr_db")) cfg.snr_db = RealOrInf(doc["snr_db"]);
    read(doc, "episodes_per_point", cfg.episodes_per_point);
    if (doc.contains("strategies")) {
      cfg.strategies.clear();
      for (const json& v : doc["strategies"]) {
        cfg.strategies.push_back(ParseStrategy(v.get<std::string>()));
      }
    }
    if (doc.contains("q_source")) {
      cfg.q_source = ParseQSource(doc["q_source"].get<std::string>());
    }
    read(doc, "clip", cfg.clip);
    read(doc, "jitter_radius", cfg.jitter_radius);
    read(doc, "perturb_encoder", cfg.perturb_encoder);
    if (doc.contains("target_rotation_deg")) {
      cfg.target_rotation_deg = doc["target_rotation_deg"].get<double>();
    }
    read(doc, "workers", cfg.workers);
    read(doc, "output_path", cfg.output_path);
    return cfg;
  });
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading '" + path + "'");
  return buf.str();
}

void WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace semeq
