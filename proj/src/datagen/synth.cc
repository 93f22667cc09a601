// datagen/synth.cc

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

#include "datagen/synth.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "common/error.h"
#include "common/rng.h"

namespace avsqa {
namespace datagen {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Two-pole resonator y[n] = x[n] + 2 r cos(theta) y[n-1] - r^2 y[n-2],
// applied in place. Gain at the center frequency is left as-is; the final
// peak normalization absorbs it.
void resonate(std::vector<double>* x, double fc_hz, double bw_hz, int sr) {
  const double r = std::exp(-kPi * bw_hz / sr);
  const double c = 2.0 * r * std::cos(2.0 * kPi * fc_hz / sr);
  const double r2 = r * r;
  double y1 = 0.0, y2 = 0.0;
  for (double& v : *x) {
    const double y = v + c * y1 - r2 * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

}  // namespace

dsp::Waveform synth_clean(uint64_t speaker_seed, uint64_t utterance_seed,
                          double duration_s) {
  require(duration_s >= 1.0 && duration_s <= 6.0,
          "synth_clean: duration must be in [1, 6] s, got ", duration_s);
  const int sr = dsp::kPipelineRate;
  const int n = static_cast<int>(std::lround(duration_s * sr));

  // Speaker traits: fundamental and three formant resonators.
  Rng spk(speaker_seed);
  const double f0_base = spk.uniform(90.0, 220.0);
  const double f1 = spk.uniform(300.0, 900.0), b1 = spk.uniform(80.0, 160.0);
  const double f2 = spk.uniform(900.0, 2200.0), b2 = spk.uniform(100.0, 200.0);
  const double f3 = spk.uniform(2200.0, 3400.0), b3 = spk.uniform(120.0, 240.0);

  // Utterance traits: F0 contour knots, AM envelope, burst placement.
  Rng utt(utterance_seed);
  const int knots = utt.uniform_int(4, 8);
  std::vector<double> knot_mul(static_cast<size_t>(knots));
  for (double& m : knot_mul) m = utt.uniform(0.85, 1.2);
  const double am_rate = utt.uniform(2.0, 6.0);
  const double am_phase = utt.uniform(0.0, 2.0 * kPi);

  // Voiced source: sawtooth with the piecewise-linear contour.
  std::vector<double> x(static_cast<size_t>(n));
  double phase = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pos = static_cast<double>(i) / (n - 1) * (knots - 1);
    const int k0 = std::min(knots - 2, static_cast<int>(pos));
    const double fr = pos - k0;
    const double mul = knot_mul[static_cast<size_t>(k0)] * (1.0 - fr) +
                       knot_mul[static_cast<size_t>(k0) + 1] * fr;
    phase += f0_base * mul / sr;
    phase -= std::floor(phase);
    x[static_cast<size_t>(i)] = 2.0 * phase - 1.0;
  }
  resonate(&x, f1, b1, sr);
  resonate(&x, f2, b2, sr);
  resonate(&x, f3, b3, sr);

  // Amplitude modulation; the floor keeps the utterance audibly continuous.
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    const double env =
        0.1 + 0.9 * 0.5 * (1.0 - std::cos(2.0 * kPi * am_rate * t + am_phase));
    x[static_cast<size_t>(i)] *= env;
  }

  // Sparse unvoiced bursts: band-passed noise packets on top of the voiced
  // stream, one to three per second.
  double voiced_rms = std::sqrt(dsp::mean_power(x));
  const int bursts = utt.uniform_int(1, 3 * std::max(1, n / sr));
  for (int bi = 0; bi < bursts; ++bi) {
    const int len = utt.uniform_int(sr * 30 / 1000, sr * 80 / 1000);
    const int start = utt.uniform_int(0, std::max(0, n - len - 1));
    const double gain = utt.uniform(0.3, 0.8) * voiced_rms;
    std::vector<double> burst(static_cast<size_t>(len));
    for (double& v : burst) v = utt.uniform(-1.0, 1.0);
    resonate(&burst, utt.uniform(2000.0, 6000.0), utt.uniform(500.0, 1500.0),
             sr);
    const double brms = std::sqrt(dsp::mean_power(burst));
    for (int i = 0; i < len; ++i) {
      // Hann window so the packet fades in and out.
      const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (len - 1)));
      x[static_cast<size_t>(start + i)] +=
          burst[static_cast<size_t>(i)] / brms * gain * w;
    }
  }

  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  const double scale = 0.5 / peak;
  for (double& v : x) v *= scale;

  dsp::Waveform w;
  w.samples = std::move(x);
  w.sample_rate = sr;
  return w;
}

}  // namespace datagen
}  // namespace avsqa
