// common/wav_io.h

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

#ifndef AVSQA_COMMON_WAV_IO_H_
#define AVSQA_COMMON_WAV_IO_H_

#include <string>
#include <vector>

namespace avsqa {

struct WavData {
  std::vector<double> samples;
  int sample_rate = 0;
};

// Reads a mono WAV file. Accepted encodings: 16-bit PCM and 32-bit IEEE
// float. Anything else (multi-channel, other bit depths, compressed) is
// rejected with an Error naming the offending property.
WavData read_wav(const std::string& path);

// Writes mono 32-bit IEEE float WAV.
void write_wav(const std::string& path, const std::vector<double>& samples,
               int sample_rate);

}  // namespace avsqa

#endif  // AVSQA_COMMON_WAV_IO_H_
