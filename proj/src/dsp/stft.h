// dsp/stft.h

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

#ifndef AVSQA_DSP_STFT_H_
#define AVSQA_DSP_STFT_H_

#include <complex>
#include <vector>

#include "dsp/waveform.h"

namespace avsqa {
namespace dsp {

constexpr int kWinLen = 512;
constexpr int kHop = 256;
constexpr int kFftSize = 512;

// T x F magnitude matrix, row-major, with framing metadata.
struct Spectrogram {
  int frames = 0;   // T
  int bins = 0;     // F = fft_size / 2 + 1
  int win_len = kWinLen;
  int hop = kHop;
  int fft_size = kFftSize;
  std::vector<double> mags;  // frames * bins

  double at(int t, int f) const { return mags[static_cast<size_t>(t) * bins + f]; }
};

// Complex counterpart used by the enhancer and fwSegSNR internals.
struct ComplexStft {
  int frames = 0;
  int bins = 0;
  int win_len = kWinLen;
  int hop = kHop;
  int fft_size = kFftSize;
  std::vector<std::complex<double>> coef;  // frames * bins

  std::complex<double> at(int t, int f) const {
    return coef[static_cast<size_t>(t) * bins + f];
  }
};

// Periodic Hann window of length n.
std::vector<double> hann_periodic(int n);

// Frame count for no-padding framing: floor((n - win_len) / hop) + 1.
int frame_count(size_t n, int win_len, int hop);

// Hann-windowed magnitude STFT with no padding; the last partial frame is
// dropped. Throws "utterance too short" when the signal does not cover one
// window.
Spectrogram stft_magnitude(const Waveform& wave, int win_len = kWinLen,
                           int hop = kHop, int fft_size = kFftSize);

// Same framing and window, complex coefficients. When pad_to_cover is set the
// input is zero-extended so every sample falls inside some frame (used by the
// enhancer whose output must match the input length).
ComplexStft stft_complex(const std::vector<double>& x, int win_len, int hop,
                         int fft_size, bool pad_to_cover);

// Weighted overlap-add inverse of stft_complex (Hann analysis + Hann
// synthesis, normalized by the accumulated squared window). Returns
// out_len samples.
std::vector<double> istft_overlap_add(const ComplexStft& spec, size_t out_len);

}  // namespace dsp
}  // namespace avsqa

#endif  // AVSQA_DSP_STFT_H_
