// dsp/mixing.h

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

#ifndef AVSQA_DSP_MIXING_H_
#define AVSQA_DSP_MIXING_H_

#include <string>

#include "dsp/waveform.h"

namespace avsqa {
namespace dsp {

enum class NoisePartition { kSeen, kUnseen };

struct NoiseClip {
  Waveform waveform;
  std::string noise_id;
  NoisePartition partition = NoisePartition::kSeen;
};

struct MixResult {
  Waveform mix;
  double noise_scale = 0.0;
  bool clipped = false;  // any |sample| > 1; the mix is never renormalized
};

// Loops or truncates the noise to the clean length, scales it so the
// full-utterance power ratio equals snr_db exactly, and adds. Silent clean or
// silent noise raises a "degenerate power" Error.
MixResult mix_at_snr(const Waveform& clean, const NoiseClip& noise,
                     double snr_db);

// Power-convention SNR of two addends (clean vs scaled noise), used by tests.
double measure_snr_db(const std::vector<double>& clean,
                      const std::vector<double>& noise);

}  // namespace dsp
}  // namespace avsqa

#endif  // AVSQA_DSP_MIXING_H_
