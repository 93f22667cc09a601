// dsp/mel.h

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

#ifndef AVSQA_DSP_MEL_H_
#define AVSQA_DSP_MEL_H_

#include <vector>

namespace avsqa {
namespace dsp {

// Triangular mel filterbank (HTK mel scale) over FFT bins, row-major
// n_bands x n_bins. Band centers are spaced evenly on the mel axis between
// f_lo and f_hi.
std::vector<double> mel_filterbank(int n_bands, int n_bins, int fft_size,
                                   double sample_rate, double f_lo,
                                   double f_hi);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

}  // namespace dsp
}  // namespace avsqa

#endif  // AVSQA_DSP_MEL_H_
