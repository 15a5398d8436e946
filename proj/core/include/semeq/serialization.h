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

#ifndef SEMEQ_SERIALIZATION_H_
#define SEMEQ_SERIALIZATION_H_

#include <string>
#include <string_view>

#include "semeq/codebook.h"
#include "semeq/harness.h"
#include "semeq/language.h"
#include "semeq/mismatch.h"

namespace semeq {

inline constexpr int kFormatVersion = 1;

// JSON documents. Reals are written in shortest round-trip form, so
// Load(Save(x)) reproduces every coordinate bit for bit. Parse failures and
// schema violations throw std::invalid_argument.
std::string LanguageToJson(const Language& lang);
Language LanguageFromJson(std::string_view text);

std::string CodebookToJson(const TransformCodebook& codebook);
TransformCodebook CodebookFromJson(std::string_view text);

std::string MismatchReportToJson(const MismatchReport& report);
std::string MismatchBreakdownToCsv(const MismatchReport& report);

// Overlays the fields present in a JSON document onto `base`. Reals that may
// be infinite accept the string "inf".
SweepConfig SweepConfigFromJson(std::string_view text, SweepConfig base = {});

// Whole-file I/O; failures throw std::runtime_error naming the path.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view content);

}  // namespace semeq

#endif  // SEMEQ_SERIALIZATION_H_
