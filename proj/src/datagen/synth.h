// datagen/synth.h

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

#ifndef AVSQA_DATAGEN_SYNTH_H_
#define AVSQA_DATAGEN_SYNTH_H_

#include <cstdint>

#include "dsp/waveform.h"

namespace avsqa {
namespace datagen {

// Deterministic pseudo-speech at the pipeline rate: a sawtooth source with a
// per-speaker fundamental in [90, 220] Hz and a per-utterance piecewise-
// linear F0 contour, shaped by three per-speaker formant resonators, under a
// 2-6 Hz amplitude-modulation envelope, with sparse unvoiced band-noise
// bursts mixed in. The result is peak-normalized to 0.5 and never silent
// (RMS >= 0.02). Speaker-level traits depend only on speaker_seed,
// utterance-level ones only on utterance_seed.
//
// duration_s must lie in [1, 6].
dsp::Waveform synth_clean(uint64_t speaker_seed, uint64_t utterance_seed,
                          double duration_s);

}  // namespace datagen
}  // namespace avsqa

#endif  // AVSQA_DATAGEN_SYNTH_H_
