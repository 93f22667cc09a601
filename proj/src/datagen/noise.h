// datagen/noise.h

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

#ifndef AVSQA_DATAGEN_NOISE_H_
#define AVSQA_DATAGEN_NOISE_H_

#include <cstdint>
#include <vector>

#include "dsp/mixing.h"

namespace avsqa {
namespace datagen {

// Five generator families: white, pink (-3 dB/oct), babble (summed
// synth_clean streams), periodic machine hum, and impulsive clatter. Each
// family contributes instances_per_family clips of 3 s at RMS 0.1, with ids
// like "hum01". A seeded shuffle assigns floor(seen_fraction * N) instances
// to the seen partition and the rest to unseen; any instance of any family
// may land in either. Fewer than 2 instances in a partition is a
// configuration error.
std::vector<dsp::NoiseClip> build_noise_catalog(uint64_t master_seed,
                                                int instances_per_family,
                                                double seen_fraction);

}  // namespace datagen
}  // namespace avsqa

#endif  // AVSQA_DATAGEN_NOISE_H_
