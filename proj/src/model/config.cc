// model/config.cc

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

#include "model/config.h"

#include "common/error.h"

namespace avsqa {
namespace model {

void ModelConfig::validate() const {
  require(width_multiplier > 0.0 && width_multiplier <= 1.0,
          "model config: width_multiplier must be in (0,1], got ",
          width_multiplier);
  require(dropout >= 0.0 && dropout < 1.0,
          "model config: dropout must be in [0,1), got ", dropout);
  require(alpha_q >= 0.0 && alpha_i >= 0.0,
          "model config: frame-loss weights must be non-negative");
  require(beta >= 0.0 && gamma >= 0.0,
          "model config: task weights must be non-negative");
  const double eff_beta = quality_active() ? beta : 0.0;
  const double eff_gamma = intel_active() ? gamma : 0.0;
  require(eff_beta > 0.0 || eff_gamma > 0.0,
          "model config: loss weights beta and gamma are both zero");
  require(attention_heads == 1, "model config: only one attention head is ",
          "supported, got ", attention_heads);
}

std::string modality_name(Modality m) {
  return m == Modality::kMultimodal ? "multimodal" : "audio_only";
}

std::string tasks_name(Tasks t) {
  switch (t) {
    case Tasks::kQualityOnly: return "quality_only";
    case Tasks::kIntelligibilityOnly: return "intelligibility_only";
    case Tasks::kMultiTask: return "multi_task";
  }
  return "multi_task";
}

Modality modality_from_name(const std::string& s) {
  if (s == "multimodal") return Modality::kMultimodal;
  if (s == "audio_only") return Modality::kAudioOnly;
  fail("model config: unknown modality '", s, "'");
}

Tasks tasks_from_name(const std::string& s) {
  if (s == "quality_only") return Tasks::kQualityOnly;
  if (s == "intelligibility_only") return Tasks::kIntelligibilityOnly;
  if (s == "multi_task") return Tasks::kMultiTask;
  fail("model config: unknown tasks mode '", s, "'");
}

}  // namespace model
}  // namespace avsqa
