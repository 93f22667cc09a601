// dsp/mel.cc

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

#include "dsp/mel.h"

#include <cmath>

#include "common/error.h"

namespace avsqa {
namespace dsp {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> mel_filterbank(int n_bands, int n_bins, int fft_size,
                                   double sample_rate, double f_lo,
                                   double f_hi) {
  require(n_bands >= 1 && n_bins >= 2, "mel_filterbank: bad dimensions");
  require(f_lo >= 0.0 && f_hi > f_lo && f_hi <= sample_rate / 2.0,
          "mel_filterbank: bad frequency range");

  const double m_lo = hz_to_mel(f_lo);
  const double m_hi = hz_to_mel(f_hi);
  std::vector<double> edges(n_bands + 2);
  for (int i = 0; i < n_bands + 2; ++i) {
    edges[i] = mel_to_hz(m_lo + (m_hi - m_lo) * i / (n_bands + 1));
  }

  std::vector<double> fb(static_cast<size_t>(n_bands) * n_bins, 0.0);
  for (int b = 0; b < n_bands; ++b) {
    const double left = edges[b], center = edges[b + 1], right = edges[b + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = sample_rate * k / fft_size;
      double w = 0.0;
      if (f >= left && f <= center && center > left) {
        w = (f - left) / (center - left);
      } else if (f > center && f <= right && right > center) {
        w = (right - f) / (right - center);
      }
      fb[static_cast<size_t>(b) * n_bins + k] = w;
    }
  }
  return fb;
}

}  // namespace dsp
}  // namespace avsqa
