// model/config.h

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

#ifndef AVSQA_MODEL_CONFIG_H_
#define AVSQA_MODEL_CONFIG_H_

#include <array>
#include <cmath>
#include <string>

namespace avsqa {
namespace model {

enum class Modality { kMultimodal, kAudioOnly };
enum class Tasks { kQualityOnly, kIntelligibilityOnly, kMultiTask };

// Architecture and loss configuration. Channel counts are the full-scale
// values; width_multiplier scales every one of them for desk-scale runs.
struct ModelConfig {
  static constexpr int kFreqBins = 257;  // fixed by the 512-point STFT
  static constexpr int kLipSize = 88;    // lip ROI is kLipSize x kLipSize

  double width_multiplier = 1.0;  // in (0,1]
  Modality modality = Modality::kMultimodal;
  Tasks tasks = Tasks::kMultiTask;
  double alpha_q = 1.0;  // frame-loss weight inside the quality loss
  double alpha_i = 1.0;  // frame-loss weight inside the intelligibility loss
  double beta = 1.0;     // quality term weight in the total loss
  double gamma = 1.0;    // intelligibility term weight in the total loss
  double dropout = 0.3;
  int attention_heads = 1;

  // Full-scale widths (scaled by width_multiplier below).
  static constexpr int kVisualFrontChannels = 64;
  static constexpr std::array<int, 4> kResnetChannels = {64, 128, 256, 512};
  static constexpr std::array<int, 4> kConvChannels = {16, 32, 64, 128};
  static constexpr int kConvLayersPerBlock = 3;
  static constexpr int kBlstmWidth = 128;  // per direction
  static constexpr int kDenseWidth = 128;  // d_h

  int scaled(int base) const {
    const int w = static_cast<int>(std::lround(base * width_multiplier));
    return w < 1 ? 1 : w;
  }
  int d_v() const { return scaled(kResnetChannels[3]); }
  int d_h() const { return scaled(kDenseWidth); }
  int lstm_hidden() const { return scaled(kBlstmWidth); }
  int fused_width() const { return kFreqBins + d_v(); }
  bool quality_active() const { return tasks != Tasks::kIntelligibilityOnly; }
  bool intel_active() const { return tasks != Tasks::kQualityOnly; }

  // Throws avsqa::Error on an invalid configuration.
  void validate() const;
};

std::string modality_name(Modality m);
std::string tasks_name(Tasks t);
Modality modality_from_name(const std::string& s);
Tasks tasks_from_name(const std::string& s);

}  // namespace model
}  // namespace avsqa

#endif  // AVSQA_MODEL_CONFIG_H_
