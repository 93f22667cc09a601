// common/wav_io.cc

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

#include "common/wav_io.h"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "common/error.h"

namespace avsqa {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatIeeeFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "wav read: cannot open ", path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  require(bytes.size() >= 44, "wav read: file too small: ", path);
  const unsigned char* b = reinterpret_cast<const unsigned char*>(bytes.data());
  require(std::memcmp(b, "RIFF", 4) == 0 && std::memcmp(b + 8, "WAVE", 4) == 0,
          "wav read: not a RIFF/WAVE file: ", path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;
  bool have_fmt = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = b + pos;
    uint32_t chunk_len = read_u32(hdr + 4);
    size_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      require(chunk_len >= 16 && body + 16 <= bytes.size(),
              "wav read: malformed fmt chunk: ", path);
      format = read_u16(b + body);
      channels = read_u16(b + body + 2);
      rate = read_u32(b + body + 4);
      bits = read_u16(b + body + 14);
      if (format == kFormatExtensible && chunk_len >= 40) {
        format = read_u16(b + body + 24);  // sub-format GUID leads with the tag
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_off = body;
      data_len = std::min<size_t>(chunk_len, bytes.size() - body);
    }
    pos = body + chunk_len + (chunk_len & 1);
  }

  require(have_fmt && data_off > 0, "wav read: missing fmt or data chunk: ", path);
  require(channels == 1, "wav read: expected mono, got ", channels,
          " channels: ", path);
  require(format == kFormatPcm || format == kFormatIeeeFloat,
          "wav read: unsupported encoding (format tag ", format,
          "), need 16-bit PCM or 32-bit float: ", path);

  WavData out;
  out.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm) {
    require(bits == 16, "wav read: PCM must be 16-bit, got ", bits, ": ", path);
    size_t n = data_len / 2;
    out.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      int16_t s = static_cast<int16_t>(read_u16(b + data_off + 2 * i));
      out.samples[i] = static_cast<double>(s) / 32768.0;
    }
  } else {
    require(bits == 32, "wav read: float must be 32-bit, got ", bits, ": ", path);
    size_t n = data_len / 4;
    out.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      uint32_t u = read_u32(b + data_off + 4 * i);
      float f;
      std::memcpy(&f, &u, 4);
      out.samples[i] = static_cast<double>(f);
    }
  }
  return out;
}

void write_wav(const std::string& path, const std::vector<double>& samples,
               int sample_rate) {
  require(sample_rate > 0, "wav write: bad sample rate ", sample_rate);
  const uint32_t data_len = static_cast<uint32_t>(samples.size() * 4);
  std::string out;
  out.reserve(58 + data_len);
  out.append("RIFF");
  put_u32(out, 50 + data_len);
  out.append("WAVE");
  out.append("fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatIeeeFloat);
  put_u16(out, 1);
  put_u32(out, static_cast<uint32_t>(sample_rate));
  put_u32(out, static_cast<uint32_t>(sample_rate) * 4);
  put_u16(out, 4);
  put_u16(out, 32);
  out.append("fact");
  put_u32(out, 4);
  put_u32(out, static_cast<uint32_t>(samples.size()));
  out.append("data");
  put_u32(out, data_len);
  for (double s : samples) {
    float f = static_cast<float>(s);
    uint32_t u;
    std::memcpy(&u, &f, 4);
    put_u32(out, u);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), "wav write: cannot open ", path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  require(os.good(), "wav write: short write: ", path);
}

}  // namespace avsqa
