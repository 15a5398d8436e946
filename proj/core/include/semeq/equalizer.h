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

#ifndef SEMEQ_EQUALIZER_H_
#define SEMEQ_EQUALIZER_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semeq/affine_map.h"
#include "semeq/codebook.h"
#include "semeq/language.h"
#include "semeq/mismatch.h"

namespace semeq {

struct CodebookIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const CodebookIndex&, const CodebookIndex&) = default;
};

// Candidate scores for an observation whose source symbol lies in atom i:
// entry j scores T_{i,j}. Selecting the highest score (lowest j on ties) is
// the deterministic minimiser of the corresponding risk.
//
// Semantic score:      sum_{j' in kappa(i)} I_{i->j'}(T_{i,j}).
// Effectiveness score: sum_{j'} I_{i->j'}(T_{i,j}) * q~(a_j', o), where q~ is
// the target value table shifted to a zero minimum and scaled to a unit
// maximum.
PerAction<double> SemanticScores(const TransformCodebook& codebook,
                                 const Language& src, const Observation& obs);
PerAction<double> EffectivenessScores(const TransformCodebook& codebook,
                                      const Language& src, const Language& tgt,
                                      const Observation& obs,
                                      QSource q_source = QSource::kDecoder);

// Expected risk 1 - sum_j pi_j * score_j of a stochastic selection pi.
double MixtureRisk(const PerAction<double>& scores,
                   const PerAction<double>& pi);

CodebookIndex SelectSm(const TransformCodebook& codebook, const Language& src,
                       const Observation& obs);
CodebookIndex SelectEm(const TransformCodebook& codebook, const Language& src,
                       const Language& tgt, const Observation& obs,
                       QSource q_source = QSource::kDecoder);

enum class PolicyKind { kNone, kSemanticRisk, kEffectivenessRisk, kFixed };

// Parses "sm", "em", "none" or "fixed:i,j". For "fixed" the pair is written
// to `fixed_index`.
PolicyKind ParsePolicyKind(std::string_view text, CodebookIndex* fixed_index);
std::string_view PolicyKindName(PolicyKind kind);
QSource ParseQSource(std::string_view text);
std::string_view QSourceName(QSource source);

// Deterministic selection of one equalizer map per observation. Selections
// are tabulated at construction, so Select is a lookup.
class Policy {
 public:
  static Policy None();
  static Policy SemanticRisk(const TransformCodebook& codebook,
                             const Language& src);
  static Policy EffectivenessRisk(const TransformCodebook& codebook,
                                  const Language& src, const Language& tgt,
                                  QSource q_source = QSource::kDecoder);
  static Policy Fixed(const TransformCodebook& codebook, CodebookIndex index);
  static Policy Fixed(const AffineMap& map);

  PolicyKind kind() const { return kind_; }
  const AffineMap& Select(const Observation& obs) const;
  // Codebook entry chosen for `obs`; empty for None and map-fixed policies.
  std::optional<CodebookIndex> SelectedIndex(const Observation& obs) const;

 private:
  Policy() = default;

  PolicyKind kind_ = PolicyKind::kNone;
  std::optional<GridConfig> grid_;
  std::vector<AffineMap> maps_;
  std::vector<CodebookIndex> indices_;
  // Per observation slot: position in maps_; -1 means "use maps_[0]".
  std::vector<int> choice_;
};

// The equalized source language T.lambda_s. Symbols are clipped to the peak
// box after the map unless clipping is disabled.
class EqualizedLanguage {
 public:
  EqualizedLanguage(const Language& source, Policy policy, bool clip = true);

  const Language& source() const { return *source_; }
  const Policy& policy() const { return *policy_; }
  bool clip() const { return clip_; }

  SemanticSymbol Encode(const Observation& obs) const;
  // The equalizer as a transform for the mismatch metrics. Shares ownership,
  // so it stays valid after this object is destroyed.
  SymbolTransform Transform() const;

 private:
  std::shared_ptr<const Language> source_;
  std::shared_ptr<const Policy> policy_;
  bool clip_;
};

}  // namespace semeq

#endif  // SEMEQ_EQUALIZER_H_
