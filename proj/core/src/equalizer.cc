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

#include "semeq/equalizer.h"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <string>

namespace semeq {
namespace {

int Argmax(const PerAction<double>& scores) {
  return static_cast<int>(std::max_element(scores.begin(), scores.end()) -
                          scores.begin());
}

}  // namespace

PerAction<double> SemanticScores(const TransformCodebook& codebook,
                                 const Language& src, const Observation& obs) {
  // A deterministic encoder puts all of mu_s(.|o) on one atom.
  const int i = src.AtomOf(src.Encode(obs));
  PerAction<double> scores;
  for (int j = 0; j < kNumActions; ++j) {
    scores[j] = codebook.transfer_row(i, j)[codebook.correspondence(i)];
  }
  return scores;
}

PerAction<double> EffectivenessScores(const TransformCodebook& codebook,
                                      const Language& src, const Language& tgt,
                                      const Observation& obs,
                                      QSource q_source) {
  const int i = src.AtomOf(src.Encode(obs));
  PerAction<double> q = tgt.DecoderQTable(obs, q_source);
  const double lo = *std::min_element(q.begin(), q.end());
  for (double& v : q) v -= lo;
  const double hi = *std::max_element(q.begin(), q.end());
  if (hi > 0.0) {
    for (double& v : q) v /= hi;
  }
  PerAction<double> scores{};
  for (int j = 0; j < kNumActions; ++j) {
    const PerAction<double>& row = codebook.transfer_row(i, j);
    // Target atom j' decodes to action j'.
    for (int jp = 0; jp < kNumActions; ++jp) scores[j] += row[jp] * q[jp];
  }
  return scores;
}

double MixtureRisk(const PerAction<double>& scores,
                   const PerAction<double>& pi) {
  double expected = 0.0;
  for (int j = 0; j < kNumActions; ++j) expected += pi[j] * scores[j];
  return 1.0 - expected;
}

CodebookIndex SelectSm(const TransformCodebook& codebook, const Language& src,
                       const Observation& obs) {
  return {src.AtomOf(src.Encode(obs)),
          Argmax(SemanticScores(codebook, src, obs))};
}

CodebookIndex SelectEm(const TransformCodebook& codebook, const Language& src,
                       const Language& tgt, const Observation& obs,
                       QSource q_source) {
  return {src.AtomOf(src.Encode(obs)),
          Argmax(EffectivenessScores(codebook, src, tgt, obs, q_source))};
}

PolicyKind ParsePolicyKind(std::string_view text, CodebookIndex* fixed_index) {
  if (text == "sm") return PolicyKind::kSemanticRisk;
  if (text == "em") return PolicyKind::kEffectivenessRisk;
  if (text == "none") return PolicyKind::kNone;
  constexpr std::string_view kFixed = "fixed:";
  if (text.substr(0, kFixed.size()) == kFixed) {
    const std::string_view rest = text.substr(kFixed.size());
    const auto comma = rest.find(',');
    CodebookIndex index;
    auto parse = [](std::string_view part, int& out) {
      const char* end = part.data() + part.size();
      auto [ptr, ec] = std::from_chars(part.data(), end, out);
      return ec == std::errc() && ptr == end && out >= 0 && out < kNumActions;
    };
    if (comma != std::string_view::npos &&
        parse(rest.substr(0, comma), index.i) &&
        parse(rest.substr(comma + 1), index.j)) {
      if (fixed_index != nullptr) *fixed_index = index;
      return PolicyKind::kFixed;
    }
  }
  throw std::invalid_argument("unknown policy '" + std::string(text) +
                              "' (expected sm, em, none or fixed:i,j)");
}

std::string_view PolicyKindName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kNone:
      return "none";
    case PolicyKind::kSemanticRisk:
      return "sm";
    case PolicyKind::kEffectivenessRisk:
      return "em";
    case PolicyKind::kFixed:
      return "fixed";
  }
  return "?";
}

QSource ParseQSource(std::string_view text) {
  if (text == "decoder") return QSource::kDecoder;
  if (text == "oracle") return QSource::kOracle;
  throw std::invalid_argument("unknown q source '" + std::string(text) +
                              "' (expected decoder or oracle)");
}

std::string_view QSourceName(QSource source) {
  return source == QSource::kOracle ? "oracle" : "decoder";
}

Policy Policy::None() {
  Policy p;
  p.maps_.push_back(AffineMap::Identity());
  return p;
}

Policy Policy::Fixed(const AffineMap& map) {
  Policy p;
  p.kind_ = PolicyKind::kFixed;
  p.maps_.push_back(map);
  return p;
}

Policy Policy::Fixed(const TransformCodebook& codebook, CodebookIndex index) {
  Policy p = Fixed(codebook.map(index.i, index.j));
  p.indices_.push_back(index);
  return p;
}

Policy Policy::SemanticRisk(const TransformCodebook& codebook,
                            const Language& src) {
  Policy p;
  p.kind_ = PolicyKind::kSemanticRisk;
  p.grid_ = src.grid();
  p.choice_.assign(src.grid().NumObservationSlots(), -1);
  for (int i = 0; i < kNumActions; ++i) {
    for (int j = 0; j < kNumActions; ++j) {
      p.maps_.push_back(codebook.map(i, j));
      p.indices_.push_back({i, j});
    }
  }
  for (const Observation& obs : src.mu().support) {
    const CodebookIndex c = SelectSm(codebook, src, obs);
    p.choice_[src.grid().SlotOf(obs)] = c.i * kNumActions + c.j;
  }
  return p;
}

Policy Policy::EffectivenessRisk(const TransformCodebook& codebook,
                                 const Language& src, const Language& tgt,
                                 QSource q_source) {
  CheckCompatible(src, tgt);
  Policy p = SemanticRisk(codebook, src);
  p.kind_ = PolicyKind::kEffectivenessRisk;
  for (const Observation& obs : src.mu().support) {
    const CodebookIndex c = SelectEm(codebook, src, tgt, obs, q_source);
    p.choice_[src.grid().SlotOf(obs)] = c.i * kNumActions + c.j;
  }
  return p;
}

const AffineMap& Policy::Select(const Observation& obs) const {
  if (!grid_) return maps_.front();
  const int c = choice_[grid_->SlotOf(obs)];
  if (c < 0) {
    throw std::invalid_argument("policy has no selection for " + ToString(obs));
  }
  return maps_[c];
}

std::optional<CodebookIndex> Policy::SelectedIndex(
    const Observation& obs) const {
  if (indices_.empty()) return std::nullopt;
  if (!grid_) return indices_.front();
  const int c = choice_[grid_->SlotOf(obs)];
  if (c < 0) return std::nullopt;
  return indices_[c];
}

EqualizedLanguage::EqualizedLanguage(const Language& source, Policy policy,
                                     bool clip)
    : source_(std::make_shared<const Language>(source)),
      policy_(std::make_shared<const Policy>(std::move(policy))),
      clip_(clip) {}

SemanticSymbol EqualizedLanguage::Encode(const Observation& obs) const {
  const SemanticSymbol x = policy_->Select(obs)(source_->Encode(obs));
  return clip_ ? ClipToPeakBox(x) : x;
}

SymbolTransform EqualizedLanguage::Transform() const {
  return [policy = policy_, clip = clip_](const Observation& obs,
                                          const SemanticSymbol& x) {
    const SemanticSymbol y = policy->Select(obs)(x);
    return clip ? ClipToPeakBox(y) : y;
  };
}

}  // namespace semeq
