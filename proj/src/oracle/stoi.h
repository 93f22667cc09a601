// oracle/stoi.h

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

#ifndef AVSQA_ORACLE_STOI_H_
#define AVSQA_ORACLE_STOI_H_

#include "dsp/waveform.h"

namespace avsqa {
namespace oracle {

// Short-time objective intelligibility (Taal et al. 2011). Every constant of
// the published algorithm is named here with its standard default.
struct StoiConfig {
  int sample_rate = 10000;      // internal analysis rate
  int frame_len = 256;          // analysis frame, samples at 10 kHz
  int hop = 128;                // 50% overlap
  int fft_size = 512;           // zero-padded DFT length
  int n_bands = 15;             // one-third-octave bands
  double lowest_center_hz = 150.0;
  int segment_frames = 30;      // 384 ms comparison segments
  double beta_db = -15.0;       // lower SDR bound for clipping
  double dyn_range_db = 40.0;   // silence-removal dynamic range
};

// Inputs must be equal-length 16 kHz waveforms; both are resampled to
// 10 kHz internally. Frames more than dyn_range_db below the loudest clean
// frame are removed from both signals before comparison. Returns the mean
// of clipped, normalized band-envelope correlations, clamped to [0, 1].
// Throws "too short for STOI" when fewer than segment_frames frames remain.
double stoi(const dsp::Waveform& clean, const dsp::Waveform& degraded,
            const StoiConfig& config = {});

}  // namespace oracle
}  // namespace avsqa

#endif  // AVSQA_ORACLE_STOI_H_
