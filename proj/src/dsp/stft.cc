// dsp/stft.cc

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

#include "dsp/stft.h"

#include <unsupported/Eigen/FFT>

#include "common/error.h"

namespace avsqa {
namespace dsp {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<double> hann_periodic(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / n);
  }
  return w;
}

int frame_count(size_t n, int win_len, int hop) {
  if (n < static_cast<size_t>(win_len)) return 0;
  return static_cast<int>((n - win_len) / hop) + 1;
}

Spectrogram stft_magnitude(const Waveform& wave, int win_len, int hop,
                           int fft_size) {
  require(win_len <= fft_size, "stft: win_len ", win_len, " exceeds fft_size ",
          fft_size);
  require(wave.size() >= static_cast<size_t>(win_len),
          "stft: utterance too short (", wave.size(), " samples, window ",
          win_len, ")");

  ComplexStft c = stft_complex(wave.samples, win_len, hop, fft_size, false);
  Spectrogram out;
  out.frames = c.frames;
  out.bins = c.bins;
  out.win_len = win_len;
  out.hop = hop;
  out.fft_size = fft_size;
  out.mags.resize(c.coef.size());
  for (size_t i = 0; i < c.coef.size(); ++i) out.mags[i] = std::abs(c.coef[i]);
  return out;
}

ComplexStft stft_complex(const std::vector<double>& x, int win_len, int hop,
                         int fft_size, bool pad_to_cover) {
  require(win_len <= fft_size, "stft: win_len exceeds fft_size");
  require(x.size() >= static_cast<size_t>(win_len),
          "stft: utterance too short (", x.size(), " samples, window ", win_len,
          ")");

  int frames;
  if (pad_to_cover) {
    size_t n = x.size();
    frames = 1 + static_cast<int>((n - win_len + hop - 1) / hop);
  } else {
    frames = frame_count(x.size(), win_len, hop);
  }

  const std::vector<double> window = hann_periodic(win_len);
  const int bins = fft_size / 2 + 1;

  ComplexStft out;
  out.frames = frames;
  out.bins = bins;
  out.win_len = win_len;
  out.hop = hop;
  out.fft_size = fft_size;
  out.coef.resize(static_cast<size_t>(frames) * bins);

  Eigen::FFT<double> fft;
  std::vector<double> buf(fft_size, 0.0);
  std::vector<std::complex<double>> spec(fft_size);
  for (int t = 0; t < frames; ++t) {
    const size_t start = static_cast<size_t>(t) * hop;
    for (int i = 0; i < win_len; ++i) {
      size_t idx = start + i;
      buf[i] = idx < x.size() ? window[i] * x[idx] : 0.0;
    }
    for (int i = win_len; i < fft_size; ++i) buf[i] = 0.0;
    fft.fwd(spec, buf);
    std::copy(spec.begin(), spec.begin() + bins,
              out.coef.begin() + static_cast<size_t>(t) * bins);
  }
  return out;
}

std::vector<double> istft_overlap_add(const ComplexStft& spec, size_t out_len) {
  const int win_len = spec.win_len;
  const int hop = spec.hop;
  const int fft_size = spec.fft_size;
  const int bins = spec.bins;
  const std::vector<double> window = hann_periodic(win_len);

  const size_t covered =
      spec.frames > 0 ? static_cast<size_t>(spec.frames - 1) * hop + win_len : 0;
  std::vector<double> acc(covered, 0.0);
  std::vector<double> wsum(covered, 0.0);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> full(fft_size);
  std::vector<double> frame(fft_size);
  for (int t = 0; t < spec.frames; ++t) {
    const std::complex<double>* row = spec.coef.data() + static_cast<size_t>(t) * bins;
    for (int f = 0; f < bins; ++f) full[f] = row[f];
    for (int f = bins; f < fft_size; ++f) full[f] = std::conj(row[fft_size - f]);
    fft.inv(frame, full);
    const size_t start = static_cast<size_t>(t) * hop;
    for (int i = 0; i < win_len; ++i) {
      acc[start + i] += window[i] * frame[i];
      wsum[start + i] += window[i] * window[i];
    }
  }

  std::vector<double> out(out_len, 0.0);
  const size_t n = std::min(out_len, covered);
  for (size_t i = 0; i < n; ++i) {
    out[i] = wsum[i] > 1e-12 ? acc[i] / wsum[i] : 0.0;
  }
  return out;
}

}  // namespace dsp
}  // namespace avsqa
