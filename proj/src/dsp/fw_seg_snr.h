// dsp/fw_seg_snr.h

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

#ifndef AVSQA_DSP_FW_SEG_SNR_H_
#define AVSQA_DSP_FW_SEG_SNR_H_

#include "dsp/waveform.h"

namespace avsqa {
namespace dsp {

constexpr double kFwSegSnrFloorDb = -10.0;
constexpr double kFwSegSnrCeilDb = 35.0;
constexpr int kFwSegSnrBands = 25;

// Frequency-weighted segmental SNR over 25 mel-spaced bands.
//
// Per active frame and band, the processed signal is decomposed into a
// non-negative matched multiple of the clean band content plus a residual;
// band SNR is matched power over residual power. An anti-correlated frame
// therefore carries zero matched signal and lands on the floor. Each band
// SNR is clamped to [-10, 35] dB (unbounded negative off-band values would
// swamp the weighted mean), band SNRs are averaged with
// clean-magnitude^0.2 weights, the per-frame value is clamped to the same
// range, and frames within 40 dB of the loudest clean frame are averaged
// into the final score.
double fw_seg_snr(const Waveform& clean, const Waveform& processed);

}  // namespace dsp
}  // namespace avsqa

#endif  // AVSQA_DSP_FW_SEG_SNR_H_
