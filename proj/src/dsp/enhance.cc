// dsp/enhance.cc

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

#include "dsp/enhance.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "common/error.h"
#include "dsp/stft.h"

namespace avsqa {
namespace dsp {

namespace {
constexpr double kOverSubtract = 1.0;
constexpr double kSpectralFloor = 0.02;
}  // namespace

Waveform spectral_subtraction_enhance(const Waveform& noisy,
                                      double noise_profile_ms) {
  require(noisy.sample_rate == kPipelineRate, "enhance: expected ",
          kPipelineRate, " Hz input, got ", noisy.sample_rate);
  require(noise_profile_ms > 0.0, "enhance: non-positive noise profile");
  const size_t n = noisy.samples.size();
  const size_t profile_samples = static_cast<size_t>(
      std::llround(noise_profile_ms * 1e-3 * noisy.sample_rate));
  require(n >= profile_samples + kWinLen, "enhance: utterance too short (", n,
          " samples, need ", profile_samples + kWinLen, ")");

  ComplexStft spec =
      stft_complex(noisy.samples, kWinLen, kHop, kFftSize, /*pad_to_cover=*/true);

  // Noise magnitude profile from frames whose window fits in the lead-in.
  const int n_prof =
      1 + static_cast<int>(std::max<long long>(
              0, (static_cast<long long>(profile_samples) - kWinLen) / kHop));
  std::vector<double> mu(spec.bins, 0.0);
  for (int t = 0; t < n_prof; ++t)
    for (int f = 0; f < spec.bins; ++f) mu[f] += std::abs(spec.at(t, f));
  for (int f = 0; f < spec.bins; ++f) mu[f] /= n_prof;

  for (int t = 0; t < spec.frames; ++t) {
    for (int f = 0; f < spec.bins; ++f) {
      std::complex<double>& v = spec.coef[static_cast<size_t>(t) * spec.bins + f];
      const double mag = std::abs(v);
      const double out =
          std::max(mag - kOverSubtract * mu[f], kSpectralFloor * mu[f]);
      if (mag > 0.0) {
        v *= out / mag;
      } else {
        v = std::complex<double>(out, 0.0);
      }
    }
  }

  Waveform result;
  result.sample_rate = noisy.sample_rate;
  result.samples = istft_overlap_add(spec, n);
  return result;
}

}  // namespace dsp
}  // namespace avsqa
