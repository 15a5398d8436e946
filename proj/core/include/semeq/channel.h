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

#ifndef SEMEQ_CHANNEL_H_
#define SEMEQ_CHANNEL_H_

#include <string_view>

#include "semeq/language.h"
#include "semeq/random.h"

namespace semeq {

// Per-component noise variance for a peak SNR in dB. The peak amplitude of
// each component is 1, so sigma^2 = 10^(-snr_db / 10); +inf maps to 0.
double NoiseVarianceForSnrDb(double snr_db);

// Parses a decimal or the literal "inf" (also "+inf", "infinity").
double ParseRealOrInf(std::string_view text);

// Additive white Gaussian noise on both symbol components. No clipping is
// applied to the received symbol.
class AwgnChannel {
 public:
  explicit AwgnChannel(double snr_db);

  double snr_db() const { return snr_db_; }
  double noise_variance() const { return variance_; }
  double noise_stddev() const { return stddev_; }
  bool noiseless() const { return variance_ == 0.0; }

  // A noiseless channel returns `x` unchanged and draws nothing from `rng`.
  SemanticSymbol Transmit(const SemanticSymbol& x, Rng& rng) const;

 private:
  double snr_db_;
  double variance_;
  double stddev_;
};

}  // namespace semeq

#endif  // SEMEQ_CHANNEL_H_
