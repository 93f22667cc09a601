// oracle/resample.h

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

#ifndef AVSQA_ORACLE_RESAMPLE_H_
#define AVSQA_ORACLE_RESAMPLE_H_

#include <vector>

namespace avsqa {
namespace oracle {

// Windowed-sinc polyphase filter geometry: half-length 10*max(up, down)
// around the center tap (~32 taps per phase for 5/8 conversion) and a
// Kaiser window with beta 5.0, unity DC gain.
constexpr int kResampleHalfLenFactor = 10;
constexpr double kResampleKaiserBeta = 5.0;

// Rational polyphase resampling by up/down with zero-padding at the edges.
// Output length = ceil(n * up / down); y[j] tracks x at time j*down/up.
std::vector<double> resample_poly(const std::vector<double>& x, int up,
                                  int down);

// 16 kHz -> 10 kHz (up 5, down 8), the conversion the intelligibility
// oracle needs.
std::vector<double> resample_16k_to_10k(const std::vector<double>& x);

}  // namespace oracle
}  // namespace avsqa

#endif  // AVSQA_ORACLE_RESAMPLE_H_
