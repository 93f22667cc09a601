// oracle/pseudo_pesq.h

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

#ifndef AVSQA_ORACLE_PSEUDO_PESQ_H_
#define AVSQA_ORACLE_PSEUDO_PESQ_H_

#include "dsp/waveform.h"

namespace avsqa {
namespace oracle {

constexpr double kPesqMin = 1.0;
constexpr double kPesqMax = 4.5;

// Affine map of a frequency-weighted segmental SNR in [-10, 35] dB onto the
// PESQ scale [1.0, 4.5], clamped at the ends.
double pseudo_pesq_from_snr(double fw_seg_snr_db);

// Stand-in quality label when external PESQ scores are absent:
// pseudo_pesq_from_snr(fw_seg_snr(clean, degraded)).
double pseudo_pesq(const dsp::Waveform& clean, const dsp::Waveform& degraded);

}  // namespace oracle
}  // namespace avsqa

#endif  // AVSQA_ORACLE_PSEUDO_PESQ_H_
