// dsp/fw_seg_snr.cc

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

#include "dsp/fw_seg_snr.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "common/error.h"
#include "dsp/mel.h"
#include "dsp/stft.h"

namespace avsqa {
namespace dsp {

namespace {
constexpr double kActiveRangeDb = 40.0;
constexpr double kEps = 1e-14;
// Bands carrying less than this fraction of the frame's clean band energy
// hold nothing but window leakage; their SNR estimates are numerical noise.
constexpr double kBandGate = 1e-8;
}  // namespace

double fw_seg_snr(const Waveform& clean, const Waveform& processed) {
  require(clean.samples.size() == processed.samples.size(),
          "fw_seg_snr: length mismatch (", clean.samples.size(), " vs ",
          processed.samples.size(), ")");
  require(clean.sample_rate == processed.sample_rate,
          "fw_seg_snr: sample rate mismatch");
  require(rms(clean) > 1e-8, "fw_seg_snr: silent clean signal");

  const ComplexStft c = stft_complex(clean.samples, kWinLen, kHop, kFftSize, false);
  const ComplexStft p =
      stft_complex(processed.samples, kWinLen, kHop, kFftSize, false);
  const int frames = c.frames;
  const int bins = c.bins;
  const std::vector<double> fb =
      mel_filterbank(kFwSegSnrBands, bins, kFftSize, clean.sample_rate, 0.0,
                     clean.sample_rate / 2.0);

  // Clean per-frame power for the 40 dB activity gate.
  std::vector<double> frame_pow(frames, 0.0);
  double max_pow = 0.0;
  for (int t = 0; t < frames; ++t) {
    double acc = 0.0;
    for (int f = 0; f < bins; ++f) acc += std::norm(c.at(t, f));
    frame_pow[t] = acc;
    max_pow = std::max(max_pow, acc);
  }
  const double gate = max_pow * std::pow(10.0, -kActiveRangeDb / 10.0);

  double total = 0.0;
  int active = 0;
  std::vector<double> cb(kFwSegSnrBands), pb(kFwSegSnrBands), xb(kFwSegSnrBands);
  for (int t = 0; t < frames; ++t) {
    if (frame_pow[t] <= gate || frame_pow[t] <= 0.0) continue;

    for (int b = 0; b < kFwSegSnrBands; ++b) {
      double sc = 0.0, sp = 0.0, sx = 0.0;
      const double* w = fb.data() + static_cast<size_t>(b) * bins;
      for (int f = 0; f < bins; ++f) {
        if (w[f] == 0.0) continue;
        const std::complex<double> cc = c.at(t, f);
        const std::complex<double> pp = p.at(t, f);
        sc += w[f] * std::norm(cc);
        sp += w[f] * std::norm(pp);
        sx += w[f] * (cc.real() * pp.real() + cc.imag() * pp.imag());
      }
      cb[b] = sc;
      pb[b] = sp;
      xb[b] = sx;
    }

    double band_total = 0.0;
    for (int b = 0; b < kFwSegSnrBands; ++b) band_total += cb[b];

    double num = 0.0, den = 0.0;
    for (int b = 0; b < kFwSegSnrBands; ++b) {
      if (cb[b] <= band_total * kBandGate) continue;
      const double gain = std::max(0.0, xb[b] / cb[b]);
      const double sig = gain * gain * cb[b];
      const double res = std::max(0.0, pb[b] - 2.0 * gain * xb[b] + sig);
      const double snr_db =
          std::clamp(10.0 * std::log10((sig + kEps) / (res + kEps)),
                     kFwSegSnrFloorDb, kFwSegSnrCeilDb);
      const double weight = std::pow(cb[b], 0.1);  // clean magnitude ^ 0.2
      num += weight * snr_db;
      den += weight;
    }
    if (den <= 0.0) continue;
    total += std::clamp(num / den, kFwSegSnrFloorDb, kFwSegSnrCeilDb);
    ++active;
  }

  require(active > 0, "fw_seg_snr: no speech-active frames");
  return total / active;
}

}  // namespace dsp
}  // namespace avsqa
