// oracle/stoi.cc

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

#include "oracle/stoi.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "common/error.h"
#include "oracle/resample.h"

namespace avsqa {
namespace oracle {

namespace {

constexpr double kEps = 2.220446049250313e-16;  // double machine epsilon
const double kPi = 3.14159265358979323846;

// Symmetric Hann without the zero endpoints (MATLAB hanning).
std::vector<double> hanning(int n) {
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(kPi * (k + 1) / (n + 1));
    w[k] = s * s;
  }
  return w;
}

// Drops frames whose clean-signal energy is more than dyn_range below the
// loudest frame, then rebuilds both signals by overlap-adding the kept
// windowed frames at consecutive hop positions.
void remove_silent_frames(std::vector<double>& x, std::vector<double>& y,
                          double dyn_range, int frame_len, int hop) {
  const std::vector<double> w = hanning(frame_len);
  std::vector<size_t> starts;
  for (size_t s = 0; s + frame_len <= x.size(); s += hop) starts.push_back(s);
  std::vector<double> energy(starts.size());
  double max_energy = -1e300;
  for (size_t i = 0; i < starts.size(); ++i) {
    double e = 0.0;
    for (int k = 0; k < frame_len; ++k) {
      const double v = w[k] * x[starts[i] + k];
      e += v * v;
    }
    energy[i] = 20.0 * std::log10(std::sqrt(e) + kEps);
    max_energy = std::max(max_energy, energy[i]);
  }
  std::vector<size_t> kept;
  for (size_t i = 0; i < starts.size(); ++i)
    if (energy[i] > max_energy - dyn_range) kept.push_back(starts[i]);
  require(!kept.empty(), "stoi: too short for STOI (no frames survive)");

  const size_t out_len = (kept.size() - 1) * hop + frame_len;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (size_t i = 0; i < kept.size(); ++i) {
    for (int k = 0; k < frame_len; ++k) {
      xs[i * hop + k] += w[k] * x[kept[i] + k];
      ys[i * hop + k] += w[k] * y[kept[i] + k];
    }
  }
  x = std::move(xs);
  y = std::move(ys);
}

// Windowed, zero-padded magnitude-preserving complex STFT; row-major T x F.
std::vector<std::complex<double>> short_time_dft(const std::vector<double>& x,
                                                 int frame_len, int hop,
                                                 int fft_size, int* out_frames) {
  const std::vector<double> w = hanning(frame_len);
  const int bins = fft_size / 2 + 1;
  int frames = 0;
  for (size_t s = 0; s + frame_len <= x.size(); s += hop) ++frames;
  std::vector<std::complex<double>> out(static_cast<size_t>(frames) * bins);
  Eigen::FFT<double> fft;
  std::vector<double> buf(fft_size);
  std::vector<std::complex<double>> spec(fft_size);
  for (int t = 0; t < frames; ++t) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int k = 0; k < frame_len; ++k)
      buf[k] = w[k] * x[static_cast<size_t>(t) * hop + k];
    fft.fwd(spec, buf);
    std::copy(spec.begin(), spec.begin() + bins,
              out.begin() + static_cast<size_t>(t) * bins);
  }
  *out_frames = frames;
  return out;
}

// One-third-octave bands as [lo_bin, hi_bin) ranges over DFT bins, edges
// snapped to the nearest bin frequency.
std::vector<std::pair<int, int>> third_octave_bands(const StoiConfig& c) {
  const int bins = c.fft_size / 2 + 1;
  auto nearest_bin = [&](double hz) {
    int best = 0;
    double best_d = 1e300;
    for (int i = 0; i < bins; ++i) {
      const double f = static_cast<double>(i) * c.sample_rate / c.fft_size;
      const double d = (f - hz) * (f - hz);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };
  std::vector<std::pair<int, int>> bands(c.n_bands);
  for (int k = 0; k < c.n_bands; ++k) {
    const double lo = c.lowest_center_hz * std::pow(2.0, (2.0 * k - 1.0) / 6.0);
    const double hi = c.lowest_center_hz * std::pow(2.0, (2.0 * k + 1.0) / 6.0);
    bands[k] = {nearest_bin(lo), nearest_bin(hi)};
    require(bands[k].second > bands[k].first,
            "stoi: empty one-third-octave band ", k);
  }
  return bands;
}

}  // namespace

double stoi(const dsp::Waveform& clean, const dsp::Waveform& degraded,
            const StoiConfig& c) {
  require(clean.samples.size() == degraded.samples.size(),
          "stoi: length mismatch (", clean.samples.size(), " vs ",
          degraded.samples.size(), ")");
  require(clean.sample_rate == 16000 && degraded.sample_rate == 16000,
          "stoi: expected 16000 Hz inputs");

  std::vector<double> x = resample_16k_to_10k(clean.samples);
  std::vector<double> y = resample_16k_to_10k(degraded.samples);
  require(x.size() >= static_cast<size_t>(c.frame_len),
          "stoi: too short for STOI (", x.size(), " samples at 10 kHz)");

  remove_silent_frames(x, y, c.dyn_range_db, c.frame_len, c.hop);

  int frames = 0;
  const std::vector<std::complex<double>> cx =
      short_time_dft(x, c.frame_len, c.hop, c.fft_size, &frames);
  int frames_y = 0;
  const std::vector<std::complex<double>> cy =
      short_time_dft(y, c.frame_len, c.hop, c.fft_size, &frames_y);
  require(frames >= c.segment_frames, "stoi: too short for STOI (", frames,
          " frames after silence removal, need ", c.segment_frames, ")");

  const std::vector<std::pair<int, int>> bands = third_octave_bands(c);
  const int bins = c.fft_size / 2 + 1;
  const int nb = c.n_bands;

  // Band envelopes: root of band energy per frame, row-major bands x frames.
  std::vector<double> xb(static_cast<size_t>(nb) * frames);
  std::vector<double> yb(static_cast<size_t>(nb) * frames);
  for (int t = 0; t < frames; ++t) {
    for (int b = 0; b < nb; ++b) {
      double ex = 0.0, ey = 0.0;
      for (int f = bands[b].first; f < bands[b].second; ++f) {
        ex += std::norm(cx[static_cast<size_t>(t) * bins + f]);
        ey += std::norm(cy[static_cast<size_t>(t) * bins + f]);
      }
      xb[static_cast<size_t>(b) * frames + t] = std::sqrt(ex);
      yb[static_cast<size_t>(b) * frames + t] = std::sqrt(ey);
    }
  }

  const int seg = c.segment_frames;
  const double clip = 1.0 + std::pow(10.0, -c.beta_db / 20.0);
  double total = 0.0;
  long long count = 0;
  std::vector<double> xs(seg), ys(seg);
  for (int m = 0; m + seg <= frames; ++m) {
    for (int b = 0; b < nb; ++b) {
      const double* xr = xb.data() + static_cast<size_t>(b) * frames + m;
      const double* yr = yb.data() + static_cast<size_t>(b) * frames + m;
      double nx = 0.0, ny = 0.0;
      for (int i = 0; i < seg; ++i) {
        nx += xr[i] * xr[i];
        ny += yr[i] * yr[i];
      }
      const double alpha = std::sqrt(nx) / (std::sqrt(ny) + kEps);
      double mx = 0.0, my = 0.0;
      for (int i = 0; i < seg; ++i) {
        xs[i] = xr[i];
        ys[i] = std::min(alpha * yr[i], xr[i] * clip);
        mx += xs[i];
        my += ys[i];
      }
      mx /= seg;
      my /= seg;
      double dot = 0.0, sx = 0.0, sy = 0.0;
      for (int i = 0; i < seg; ++i) {
        const double a = xs[i] - mx;
        const double bb = ys[i] - my;
        dot += a * bb;
        sx += a * a;
        sy += bb * bb;
      }
      total += dot / (std::sqrt(sx) * std::sqrt(sy) + kEps);
      ++count;
    }
  }
  return std::clamp(total / static_cast<double>(count), 0.0, 1.0);
}

}  // namespace oracle
}  // namespace avsqa
