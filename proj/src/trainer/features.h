// trainer/features.h

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

#ifndef AVSQA_TRAINER_FEATURES_H_
#define AVSQA_TRAINER_FEATURES_H_

#include <map>
#include <string>
#include <vector>

#include "datagen/corpus.h"
#include "datagen/video.h"
#include "dsp/waveform.h"
#include "model/config.h"
#include "model/network.h"
#include "nn/tensor.h"

namespace avsqa {
namespace trainer {

// [T, 257] log-compressed STFT magnitudes: log1p keeps the map monotone and
// finite at exact-zero bins.
nn::Tensor featurize(const dsp::Waveform& w);

// [M, 88, 88] grayscale scaled to [0, 1].
nn::Tensor video_to_tensor(const datagen::VideoClip& clip);

// Decoded model inputs for one manifest record. The video tensor is shared
// between the records of one utterance's SNR ladder.
struct CachedSample {
  const nn::Tensor* features = nullptr;  // [T, 257]
  const nn::Tensor* video = nullptr;     // [M, 88, 88]; null in audio-only
};

// Loads and memoizes decoded samples; audio is keyed per record, video per
// utterance.
class SampleCache {
 public:
  SampleCache(std::string corpus_dir, model::Modality modality)
      : dir_(std::move(corpus_dir)), modality_(modality) {}

  CachedSample get(const datagen::UtteranceRecord& record);

 private:
  std::string dir_;
  model::Modality modality_;
  std::map<std::string, nn::Tensor> features_;  // by degraded_path
  std::map<std::string, nn::Tensor> videos_;    // by video_path
};

// Copies one sample into suffix-zero-padded buffers of the batch-wide
// lengths. `video` may be null (audio-only).
model::SampleInput assemble_input(const nn::Tensor& features,
                                  const nn::Tensor* video, int t_pad,
                                  int m_pad);

}  // namespace trainer
}  // namespace avsqa

#endif  // AVSQA_TRAINER_FEATURES_H_
