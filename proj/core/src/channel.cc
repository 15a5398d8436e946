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

#include "semeq/channel.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace semeq {

double NoiseVarianceForSnrDb(double snr_db) {
  if (std::isnan(snr_db)) throw std::invalid_argument("snr_db is NaN");
  if (std::isinf(snr_db)) {
    if (snr_db < 0) throw std::invalid_argument("snr_db must not be -inf");
    return 0.0;
  }
  return std::pow(10.0, -snr_db / 10.0);
}

double ParseRealOrInf(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity") {
    return kInfinity;
  }
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || std::isnan(value)) {
    throw std::invalid_argument("not a number or 'inf': '" + std::string(text) +
                                "'");
  }
  return value;
}

AwgnChannel::AwgnChannel(double snr_db)
    : snr_db_(snr_db),
      variance_(NoiseVarianceForSnrDb(snr_db)),
      stddev_(std::sqrt(variance_)) {}

SemanticSymbol AwgnChannel::Transmit(const SemanticSymbol& x, Rng& rng) const {
  if (noiseless()) return x;
  const auto [n1, n2] = StandardNormalPair(rng);
  return {x[0] + stddev_ * n1, x[1] + stddev_ * n2};
}

}  // namespace semeq
