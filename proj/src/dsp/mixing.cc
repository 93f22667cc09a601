// dsp/mixing.cc

// Copyright 2026  AVSQA Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "dsp/mixing.h"

#include <cmath>

#include "common/error.h"

namespace avsqa {
namespace dsp {

namespace {
constexpr double kSilenceRms = 1e-8;
}

MixResult mix_at_snr(const Waveform& clean, const NoiseClip& noise,
                     double snr_db) {
  require(clean.sample_rate == noise.waveform.sample_rate,
          "mix: sample rate mismatch (", clean.sample_rate, " vs ",
          noise.waveform.sample_rate, ")");
  require(!clean.samples.empty() && !noise.waveform.samples.empty(),
          "mix: empty input");

  const size_t n = clean.samples.size();
  std::vector<double> looped(n);
  const std::vector<double>& src = noise.waveform.samples;
  for (size_t i = 0; i < n; ++i) looped[i] = src[i % src.size()];

  const double p_clean = mean_power(clean.samples);
  const double p_noise = mean_power(looped);
  require(std::sqrt(p_clean) > kSilenceRms,
          "mix: degenerate power (silent clean signal)");
  require(std::sqrt(p_noise) > kSilenceRms,
          "mix: degenerate power (silent noise '", noise.noise_id, "')");

  const double scale =
      std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));

  MixResult out;
  out.noise_scale = scale;
  out.mix.sample_rate = clean.sample_rate;
  out.mix.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double v = clean.samples[i] + scale * looped[i];
    if (v > 1.0 || v < -1.0) out.clipped = true;
    out.mix.samples[i] = v;
  }
  return out;
}

double measure_snr_db(const std::vector<double>& clean,
                      const std::vector<double>& noise) {
  double pc = mean_power(clean);
  double pn = mean_power(noise);
  require(pn > 0.0 && pc > 0.0, "measure_snr: zero power");
  return 10.0 * std::log10(pc / pn);
}

}  // namespace dsp
}  // namespace avsqa
