// dsp/waveform.h

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

#ifndef AVSQA_DSP_WAVEFORM_H_
#define AVSQA_DSP_WAVEFORM_H_

#include <cmath>
#include <cstddef>
#include <vector>

namespace avsqa {
namespace dsp {

constexpr int kPipelineRate = 16000;

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kPipelineRate;

  size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

inline double mean_power(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

inline double rms(const Waveform& w) { return std::sqrt(mean_power(w.samples)); }

}  // namespace dsp
}  // namespace avsqa

#endif  // AVSQA_DSP_WAVEFORM_H_
