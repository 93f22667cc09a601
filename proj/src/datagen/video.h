// datagen/video.h

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

#ifndef AVSQA_DATAGEN_VIDEO_H_
#define AVSQA_DATAGEN_VIDEO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dsp/waveform.h"

namespace avsqa {
namespace datagen {

constexpr int kLipSize = 88;

struct VideoClip {
  // M frames of kLipSize x kLipSize 8-bit grayscale, row-major.
  std::vector<uint8_t> frames;
  double frame_rate = 25.0;

  int frame_count() const {
    return static_cast<int>(frames.size() /
                            (static_cast<size_t>(kLipSize) * kLipSize));
  }
  const uint8_t* frame(int m) const {
    return frames.data() + static_cast<size_t>(m) * kLipSize * kLipSize;
  }
};

// Renders an anti-aliased mouth ellipse on a fixed background texture whose
// vertical aperture follows the 8 Hz low-passed amplitude envelope of the
// clean waveform, so the video carries intelligibility information no matter
// what is later mixed into the audio. jitter_seed drives a small positional
// wobble that is scaled by the envelope itself: silence renders identical
// minimal-aperture frames.
//
// fps must lie in [10, 60]; clips shorter than 5 frames are an error.
VideoClip synth_lip_video(const dsp::Waveform& clean, double fps,
                          uint64_t jitter_seed);

// Writes frames as zero-padded "frame_00000.pgm" (binary P5) files plus a
// "meta.json" sidecar with frame_count and frame_rate into dir (created if
// missing). Reads back the same layout.
void write_video(const std::string& dir, const VideoClip& clip);
VideoClip read_video(const std::string& dir);

}  // namespace datagen
}  // namespace avsqa

#endif  // AVSQA_DATAGEN_VIDEO_H_
