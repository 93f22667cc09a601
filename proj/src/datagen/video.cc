// datagen/video.cc

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

#include "datagen/video.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "common/error.h"
#include "common/rng.h"
#include "json.hpp"

namespace avsqa {
namespace datagen {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Fixed background texture; a cheap hash pattern so frames are not flat.
uint8_t background(int px, int py) {
  return static_cast<uint8_t>(70 + (px * 7 + py * 13 + (px * py) % 5) % 23);
}

// One frame: dark mouth ellipse of half-height ry at (cx, cy), half-width rx,
// alpha-blended over ~1.5 px at the rim.
void render_frame(double cx, double cy, double rx, double ry, uint8_t* out) {
  for (int py = 0; py < kLipSize; ++py)
    for (int px = 0; px < kLipSize; ++px) {
      const double dx = (px - cx) / rx;
      const double dy = (py - cy) / ry;
      const double d = std::sqrt(dx * dx + dy * dy);
      // Signed distance to the rim in pixels, approximated with the smaller
      // radius so the blend width stays near-constant around the ellipse.
      const double rim = (d - 1.0) * std::min(rx, ry);
      const double a = std::clamp(0.5 - rim / 1.5, 0.0, 1.0);
      const double bg = background(px, py);
      out[py * kLipSize + px] =
          static_cast<uint8_t>(std::lround(bg + a * (18.0 - bg)));
    }
}

}  // namespace

VideoClip synth_lip_video(const dsp::Waveform& clean, double fps,
                          uint64_t jitter_seed) {
  require(fps >= 10.0 && fps <= 60.0, "lip video: fps must be in [10, 60], ",
          "got ", fps);
  const int sr = clean.sample_rate;
  const int m = static_cast<int>(std::lround(clean.duration_s() * fps));
  require(m >= 5, "lip video: too-short clip, ", m, " frames at ", fps,
          " fps");

  // 8 Hz one-pole low-pass of the rectified waveform.
  std::vector<double> env(clean.size());
  const double a = 1.0 - std::exp(-2.0 * kPi * 8.0 / sr);
  double y = 0.0;
  for (size_t i = 0; i < clean.size(); ++i) {
    y += a * (std::fabs(clean.samples[i]) - y);
    env[i] = y;
  }

  double env_max = 0.0;
  for (double v : env) env_max = std::max(env_max, v);

  VideoClip clip;
  clip.frame_rate = fps;
  clip.frames.resize(static_cast<size_t>(m) * kLipSize * kLipSize);
  Rng jit(jitter_seed);
  for (int f = 0; f < m; ++f) {
    const size_t si = std::min(
        clean.size() - 1,
        static_cast<size_t>(std::lround((f + 0.5) / fps * sr)));
    const double e = env_max > 0.0 ? env[si] / env_max : 0.0;
    // Aperture 3..27 px; jitter is scaled by the envelope so silent clips
    // render identical frames.
    const double ry = 0.5 * (3.0 + 24.0 * e) + 0.4 * e * jit.uniform(-1.0, 1.0);
    const double cx = 44.0 + 0.6 * e * jit.uniform(-1.0, 1.0);
    const double cy = 52.0 + 0.6 * e * jit.uniform(-1.0, 1.0);
    render_frame(cx, cy, 22.0, std::max(ry, 1.0),
                 clip.frames.data() + static_cast<size_t>(f) * kLipSize * kLipSize);
  }
  return clip;
}

void write_video(const std::string& dir, const VideoClip& clip) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, "lip video: cannot create directory ", dir);
  const int m = clip.frame_count();
  for (int f = 0; f < m; ++f) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05d.pgm", f);
    std::ofstream os(fs::path(dir) / name, std::ios::binary);
    require(os.good(), "lip video: cannot write frame in ", dir);
    os << "P5\n" << kLipSize << " " << kLipSize << "\n255\n";
    os.write(reinterpret_cast<const char*>(clip.frame(f)),
             static_cast<std::streamsize>(kLipSize) * kLipSize);
    require(os.good(), "lip video: short write in ", dir);
  }
  nlohmann::json meta;
  meta["frame_count"] = m;
  meta["frame_rate"] = clip.frame_rate;
  std::ofstream os(fs::path(dir) / "meta.json", std::ios::binary);
  os << meta.dump() << "\n";
  require(os.good(), "lip video: cannot write meta.json in ", dir);
}

VideoClip read_video(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream ms(fs::path(dir) / "meta.json");
  require(ms.good(), "lip video: cannot open ", dir, "/meta.json");
  nlohmann::json meta;
  try {
    ms >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("lip video: bad meta.json: ") + e.what());
  }
  require(meta.contains("frame_count") && meta.contains("frame_rate"),
          "lip video: meta.json missing frame_count/frame_rate in ", dir);
  const int m = meta["frame_count"].get<int>();
  require(m >= 1, "lip video: bad frame_count ", m);

  VideoClip clip;
  clip.frame_rate = meta["frame_rate"].get<double>();
  clip.frames.resize(static_cast<size_t>(m) * kLipSize * kLipSize);
  for (int f = 0; f < m; ++f) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05d.pgm", f);
    std::ifstream is(fs::path(dir) / name, std::ios::binary);
    require(is.good(), "lip video: missing frame ", name, " in ", dir);
    std::string magic;
    int w = 0, h = 0, maxv = 0;
    is >> magic >> w >> h >> maxv;
    require(magic == "P5" && w == kLipSize && h == kLipSize && maxv == 255,
            "lip video: ", name, " is not an 88x88 8-bit P5 file");
    is.get();  // single whitespace after the header
    is.read(reinterpret_cast<char*>(clip.frames.data() +
                                    static_cast<size_t>(f) * kLipSize * kLipSize),
            static_cast<std::streamsize>(kLipSize) * kLipSize);
    require(is.gcount() == static_cast<std::streamsize>(kLipSize) * kLipSize,
            "lip video: truncated frame ", name, " in ", dir);
  }
  return clip;
}

}  // namespace datagen
}  // namespace avsqa
