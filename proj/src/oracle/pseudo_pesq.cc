// oracle/pseudo_pesq.cc

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

#include "oracle/pseudo_pesq.h"

#include <algorithm>

#include "dsp/fw_seg_snr.h"

namespace avsqa {
namespace oracle {

double pseudo_pesq_from_snr(double fw_seg_snr_db) {
  const double span = kPesqMax - kPesqMin;
  const double range = dsp::kFwSegSnrCeilDb - dsp::kFwSegSnrFloorDb;
  const double q =
      kPesqMin + (fw_seg_snr_db - dsp::kFwSegSnrFloorDb) * span / range;
  return std::clamp(q, kPesqMin, kPesqMax);
}

double pseudo_pesq(const dsp::Waveform& clean, const dsp::Waveform& degraded) {
  return pseudo_pesq_from_snr(dsp::fw_seg_snr(clean, degraded));
}

}  // namespace oracle
}  // namespace avsqa
