// dsp/enhance.h

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

#ifndef AVSQA_DSP_ENHANCE_H_
#define AVSQA_DSP_ENHANCE_H_

#include "dsp/waveform.h"

namespace avsqa {
namespace dsp {

// Magnitude spectral subtraction with a noise profile estimated from the
// leading portion of the utterance.  The per-bin noise magnitude mu_f is the
// mean STFT magnitude over the profile frames; enhanced magnitudes are
// max(|X| - mu_f, 0.02 * mu_f) with the noisy phase kept.  Resynthesis is
// weighted overlap-add with Hann-squared normalization; the output has
// exactly the input length.  No gain normalization is applied afterwards.
Waveform spectral_subtraction_enhance(const Waveform& noisy,
                                      double noise_profile_ms = 120.0);

}  // namespace dsp
}  // namespace avsqa

#endif  // AVSQA_DSP_ENHANCE_H_
