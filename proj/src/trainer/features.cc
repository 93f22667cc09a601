// trainer/features.cc

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

#include "trainer/features.h"

#include <cmath>
#include <filesystem>

#include "common/error.h"
#include "common/wav_io.h"
#include "dsp/stft.h"

namespace avsqa {
namespace trainer {

namespace fs = std::filesystem;

nn::Tensor featurize(const dsp::Waveform& w) {
  const dsp::Spectrogram s = dsp::stft_magnitude(w);
  require(s.bins == model::ModelConfig::kFreqBins,
          "featurize: got ", s.bins, " bins, the network expects ",
          model::ModelConfig::kFreqBins);
  nn::Tensor t({s.frames, s.bins});
  for (size_t i = 0; i < t.data.size(); ++i) t[i] = std::log1p(s.mags[i]);
  return t;
}

nn::Tensor video_to_tensor(const datagen::VideoClip& clip) {
  const int m = clip.frame_count();
  nn::Tensor t({m, datagen::kLipSize, datagen::kLipSize});
  for (size_t i = 0; i < t.data.size(); ++i)
    t[i] = clip.frames[i] / 255.0;
  return t;
}

CachedSample SampleCache::get(const datagen::UtteranceRecord& record) {
  CachedSample out;
  auto fit = features_.find(record.degraded_path);
  if (fit == features_.end()) {
    const WavData w = read_wav((fs::path(dir_) / record.degraded_path).string());
    fit = features_
              .emplace(record.degraded_path,
                       featurize(dsp::Waveform{w.samples, w.sample_rate}))
              .first;
  }
  out.features = &fit->second;

  if (modality_ == model::Modality::kMultimodal) {
    auto vit = videos_.find(record.video_path);
    if (vit == videos_.end()) {
      const datagen::VideoClip clip =
          datagen::read_video((fs::path(dir_) / record.video_path).string());
      vit = videos_.emplace(record.video_path, video_to_tensor(clip)).first;
    }
    out.video = &vit->second;
  }
  return out;
}

model::SampleInput assemble_input(const nn::Tensor& features,
                                  const nn::Tensor* video, int t_pad,
                                  int m_pad) {
  const int t = features.dim(0);
  const int f = features.dim(1);
  require(t_pad >= t, "assemble_input: t_pad ", t_pad, " < sample length ", t);
  model::SampleInput in;
  in.valid_t = t;
  in.features = nn::Tensor({t_pad, f});
  std::copy(features.data.begin(), features.data.end(),
            in.features.data.begin());
  if (video != nullptr) {
    const int m = video->dim(0);
    require(m_pad >= m, "assemble_input: m_pad ", m_pad, " < video length ", m);
    in.valid_m = m;
    in.video = nn::Tensor({m_pad, video->dim(1), video->dim(2)});
    std::copy(video->data.begin(), video->data.end(), in.video.data.begin());
  }
  return in;
}

}  // namespace trainer
}  // namespace avsqa
