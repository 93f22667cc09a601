// datagen/noise.cc

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

#include "datagen/noise.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "common/error.h"
#include "common/rng.h"
#include "datagen/synth.h"

namespace avsqa {
namespace datagen {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kClipSeconds = 3.0;
constexpr double kTargetRms = 0.1;

void normalize_rms(std::vector<double>* x) {
  const double r = std::sqrt(dsp::mean_power(*x));
  require(r > 0.0, "noise catalog: degenerate all-zero clip");
  const double s = kTargetRms / r;
  for (double& v : *x) v *= s;
}

std::vector<double> white(Rng& rng, int n) {
  std::vector<double> x(static_cast<size_t>(n));
  for (double& v : x) v = rng.normal();
  return x;
}

// Paul Kellet's three-pole 1/f approximation over white input.
std::vector<double> pink(Rng& rng, int n) {
  std::vector<double> x(static_cast<size_t>(n));
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (double& v : x) {
    const double w = rng.normal();
    b0 = 0.99765 * b0 + w * 0.0990460;
    b1 = 0.96300 * b1 + w * 0.2965164;
    b2 = 0.57000 * b2 + w * 1.0526913;
    v = b0 + b1 + b2 + w * 0.1848;
  }
  return x;
}

// Speech-shaped babble: six summed pseudo-speakers talking over each other.
std::vector<double> babble(Rng& rng, int n, double dur) {
  std::vector<double> x(static_cast<size_t>(n), 0.0);
  for (int s = 0; s < 6; ++s) {
    const dsp::Waveform w = synth_clean(rng.next_u64(), rng.next_u64(), dur);
    for (int i = 0; i < n && i < static_cast<int>(w.size()); ++i)
      x[static_cast<size_t>(i)] += w.samples[static_cast<size_t>(i)];
  }
  return x;
}

// Machine hum: harmonic stack on a low fundamental with slow amplitude
// wobble and a faint broadband floor.
std::vector<double> hum(Rng& rng, int n, int sr) {
  const double f0 = rng.uniform(45.0, 180.0);
  const double wobble_rate = rng.uniform(0.3, 1.5);
  const double wobble_depth = rng.uniform(0.05, 0.25);
  double amp[8];
  for (int k = 0; k < 8; ++k) amp[k] = 1.0 / (k + 1) * rng.uniform(0.6, 1.0);
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr;
    double v = 0.0;
    for (int k = 0; k < 8; ++k)
      v += amp[k] * std::sin(2.0 * kPi * f0 * (k + 1) * t);
    const double wob =
        1.0 + wobble_depth * std::sin(2.0 * kPi * wobble_rate * t);
    x[static_cast<size_t>(i)] = v * wob + 0.01 * rng.normal();
  }
  return x;
}

// Impulsive clatter: sparse excitations ringing through short random
// resonances, over a faint floor.
std::vector<double> clatter(Rng& rng, int n, int sr) {
  std::vector<double> x(static_cast<size_t>(n));
  for (double& v : x) v = 0.01 * rng.normal();
  const int hits = static_cast<int>(rng.uniform(4.0, 12.0) * n / sr);
  for (int h = 0; h < hits; ++h) {
    const int at = rng.uniform_int(0, n - 1);
    const double fc = rng.uniform(800.0, 4000.0);
    const double decay_s = rng.uniform(0.005, 0.030);
    const double gain = rng.uniform(0.5, 1.5);
    const int len = std::min(n - at, static_cast<int>(sr * decay_s * 6));
    for (int i = 0; i < len; ++i) {
      const double t = static_cast<double>(i) / sr;
      x[static_cast<size_t>(at + i)] +=
          gain * std::exp(-t / decay_s) * std::sin(2.0 * kPi * fc * t);
    }
  }
  return x;
}

}  // namespace

std::vector<dsp::NoiseClip> build_noise_catalog(uint64_t master_seed,
                                                int instances_per_family,
                                                double seen_fraction) {
  require(instances_per_family >= 1,
          "noise catalog: instances_per_family must be >= 1");
  require(seen_fraction > 0.0 && seen_fraction < 1.0,
          "noise catalog: seen_fraction must lie in (0, 1), got ",
          seen_fraction);
  const int sr = dsp::kPipelineRate;
  const int n = static_cast<int>(kClipSeconds * sr);
  const char* families[] = {"white", "pink", "babble", "hum", "clatter"};

  std::vector<dsp::NoiseClip> clips;
  for (int fam = 0; fam < 5; ++fam)
    for (int inst = 0; inst < instances_per_family; ++inst) {
      Rng rng = Rng::substream(master_seed, {0x6e, static_cast<uint64_t>(fam),
                                             static_cast<uint64_t>(inst)});
      std::vector<double> x;
      switch (fam) {
        case 0: x = white(rng, n); break;
        case 1: x = pink(rng, n); break;
        case 2: x = babble(rng, n, kClipSeconds); break;
        case 3: x = hum(rng, n, sr); break;
        default: x = clatter(rng, n, sr); break;
      }
      normalize_rms(&x);
      dsp::NoiseClip clip;
      clip.waveform.samples = std::move(x);
      clip.waveform.sample_rate = sr;
      char id[32];
      std::snprintf(id, sizeof(id), "%s%02d", families[fam], inst);
      clip.noise_id = id;
      clips.push_back(std::move(clip));
    }

  // Seeded shuffle, then the leading floor(seen_fraction * N) are seen.
  const int total = static_cast<int>(clips.size());
  std::vector<int> order(static_cast<size_t>(total));
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng = Rng::substream(master_seed, {0x70});
  shuffle_rng.shuffle(order);
  const int n_seen = static_cast<int>(std::floor(seen_fraction * total));
  require(n_seen >= 2 && total - n_seen >= 2,
          "noise catalog: configuration error, need at least 2 instances per ",
          "partition, got ", n_seen, " seen / ", total - n_seen, " unseen");
  for (int i = 0; i < total; ++i)
    clips[static_cast<size_t>(order[static_cast<size_t>(i)])].partition =
        i < n_seen ? dsp::NoisePartition::kSeen : dsp::NoisePartition::kUnseen;
  return clips;
}

}  // namespace datagen
}  // namespace avsqa
