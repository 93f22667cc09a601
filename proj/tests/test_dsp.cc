// tests/test_dsp.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "common/error.h"
#include "common/rng.h"
#include "common/wav_io.h"
#include "dsp/enhance.h"
#include "dsp/fw_seg_snr.h"
#include "dsp/mel.h"
#include "dsp/mixing.h"
#include "dsp/stft.h"
#include "dsp/waveform.h"

using namespace avsqa;
using namespace avsqa::dsp;

namespace {

const double kPi = std::acos(-1.0);

Waveform make_sine(double freq, size_t n, double amp, int rate = kPipelineRate,
                   double phase = 0.0) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * kPi * freq * i / rate + phase);
  return w;
}

Waveform make_white(uint64_t seed, size_t n, double amp) {
  Rng rng(seed);
  Waveform w;
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i) w.samples[i] = amp * rng.normal();
  return w;
}

template <typename F>
std::string error_message(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "<no error>";
}

// Brute-force DFT of one windowed, zero-padded frame.
std::vector<double> naive_frame_mags(const std::vector<double>& x, size_t start,
                                     const std::vector<double>& win, int fft) {
  const int bins = fft / 2 + 1;
  std::vector<double> out(bins);
  for (int f = 0; f < bins; ++f) {
    double re = 0.0, im = 0.0;
    for (size_t n = 0; n < win.size(); ++n) {
      const double v = win[n] * x[start + n];
      const double ang = -2.0 * kPi * f * static_cast<double>(n) / fft;
      re += v * std::cos(ang);
      im += v * std::sin(ang);
    }
    out[f] = std::hypot(re, im);
  }
  return out;
}

}  // namespace

TEST_CASE("stft_magnitude: zero input gives an all-zero 61x257 matrix") {
  Waveform w;
  w.samples.assign(16000, 0.0);
  Spectrogram s = stft_magnitude(w);
  CHECK(s.frames == 61);
  CHECK(s.bins == 257);
  double total = 0.0;
  for (double m : s.mags) total += std::abs(m);
  CHECK(total == 0.0);
}

TEST_CASE("stft_magnitude: frame count for 16000 samples is 61") {
  Waveform w = make_sine(440.0, 16000, 0.3);
  Spectrogram s = stft_magnitude(w);
  CHECK(s.frames == 61);
  CHECK(s.frames == frame_count(16000, kWinLen, kHop));
}

TEST_CASE("stft_magnitude: matches a naive O(N^2) DFT per frame") {
  Waveform w = make_sine(1000.0, 16000, 1.0);
  Spectrogram s = stft_magnitude(w);
  const std::vector<double> win = hann_periodic(kWinLen);
  int bad = 0;
  for (int t = 0; t < s.frames; ++t) {
    const std::vector<double> ref =
        naive_frame_mags(w.samples, static_cast<size_t>(t) * kHop, win, kFftSize);
    for (int f = 0; f < s.bins; ++f) {
      const double err = std::abs(s.at(t, f) - ref[f]);
      if (err > 1e-9 * std::max(1.0, ref[f])) ++bad;
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("stft_magnitude: scaling the waveform scales every entry") {
  Waveform w = make_white(11, 8192, 0.25);
  Spectrogram base = stft_magnitude(w);
  for (double c : {0.0, 0.25, 1.7}) {
    Waveform scaled = w;
    for (double& v : scaled.samples) v *= c;
    Spectrogram s = stft_magnitude(scaled);
    double worst = 0.0;
    for (size_t i = 0; i < s.mags.size(); ++i) {
      const double want = c * base.mags[i];
      worst = std::max(worst,
                       std::abs(s.mags[i] - want) / std::max(1e-30, want));
    }
    if (c == 0.0) {
      for (double m : s.mags) CHECK(m == 0.0);
    } else {
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("frame_count: exact for 1000 random lengths in [512, 1e6]") {
  Rng rng(202608);
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = static_cast<size_t>(rng.uniform_int(512, 1000000));
    // Independent counting oracle: walk the frame starts.
    int frames = 0;
    for (size_t start = 0; start + kWinLen <= n; start += kHop) ++frames;
    REQUIRE(frame_count(n, kWinLen, kHop) == frames);
  }
}

TEST_CASE("stft_magnitude: rejects signals shorter than one window") {
  Waveform w = make_sine(440.0, 511, 0.5);
  CHECK(error_message([&] { stft_magnitude(w); }).find("utterance too short") !=
        std::string::npos);
}

TEST_CASE("mix_at_snr: equal-power inputs") {
  Waveform clean = make_sine(440.0, 16000, 0.4);
  Waveform other = make_white(7, 16000, 1.0);
  // Scale the noise to exactly the clean signal's mean power.
  const double ratio =
      std::sqrt(mean_power(clean.samples) / mean_power(other.samples));
  for (double& v : other.samples) v *= ratio;
  NoiseClip clip{other, "white_eq", NoisePartition::kSeen};

  SUBCASE("snr 0 dB gives scale 1") {
    MixResult r = mix_at_snr(clean, clip, 0.0);
    CHECK(r.noise_scale == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("snr 10 dB gives scale ~0.31623 and measured SNR within 0.01 dB") {
    MixResult r = mix_at_snr(clean, clip, 10.0);
    CHECK(r.noise_scale == doctest::Approx(0.31622776601).epsilon(1e-6));
    std::vector<double> addend(clean.size());
    for (size_t i = 0; i < addend.size(); ++i)
      addend[i] = r.noise_scale * clip.waveform.samples[i % clip.waveform.size()];
    CHECK(std::abs(measure_snr_db(clean.samples, addend) - 10.0) < 0.01);
  }
  SUBCASE("snr -20 dB gives scale 10") {
    MixResult r = mix_at_snr(clean, clip, -20.0);
    CHECK(r.noise_scale == doctest::Approx(10.0).epsilon(1e-9));
  }
}

TEST_CASE("mix_at_snr: achieved SNR within 0.01 dB across the grid") {
  const std::vector<Waveform> cleans = {
      make_sine(300.0, 16000, 0.5),
      make_white(3, 16000, 0.12),
      make_sine(620.0, 24000, 0.2, kPipelineRate, 0.7),
  };
  const std::vector<Waveform> noises = {
      make_white(4, 9000, 0.3),     // shorter than clean: must loop
      make_sine(50.0, 16000, 0.8),  // hum
  };
  for (const Waveform& clean : cleans) {
    for (size_t k = 0; k < noises.size(); ++k) {
      NoiseClip clip{noises[k], "n" + std::to_string(k), NoisePartition::kSeen};
      for (double snr : {-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0}) {
        MixResult r = mix_at_snr(clean, clip, snr);
        std::vector<double> addend(clean.size());
        for (size_t i = 0; i < addend.size(); ++i)
          addend[i] =
              r.noise_scale * clip.waveform.samples[i % clip.waveform.size()];
        REQUIRE(std::abs(measure_snr_db(clean.samples, addend) - snr) < 0.01);
        // The mix is clean + scaled addend, never renormalized.
        for (size_t i : {size_t(0), clean.size() / 2, clean.size() - 1})
          REQUIRE(r.mix.samples[i] ==
                  doctest::Approx(clean.samples[i] + addend[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("mix_at_snr: loops short noise deterministically") {
  Waveform clean = make_sine(440.0, 16000, 0.4);
  Waveform noise = make_white(9, 1000, 0.2);
  NoiseClip clip{noise, "short", NoisePartition::kUnseen};
  MixResult r = mix_at_snr(clean, clip, 0.0);
  for (size_t i : {size_t(999), size_t(1000), size_t(15999)}) {
    const double want =
        clean.samples[i] + r.noise_scale * noise.samples[i % 1000];
    CHECK(r.mix.samples[i] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("mix_at_snr: clipping is permitted and flagged") {
  Waveform clean = make_sine(440.0, 16000, 0.9);
  Waveform noise = make_sine(333.0, 16000, 0.9);
  NoiseClip clip{noise, "loud", NoisePartition::kSeen};
  MixResult r = mix_at_snr(clean, clip, -20.0);
  CHECK(r.clipped);
  double peak = 0.0;
  for (double v : r.mix.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak > 1.0);  // not renormalized
}

TEST_CASE("mix_at_snr: degenerate power errors") {
  Waveform clean = make_sine(440.0, 16000, 0.4);
  Waveform silent;
  silent.samples.assign(16000, 0.0);
  NoiseClip silent_noise{silent, "hushed", NoisePartition::kSeen};
  CHECK(error_message([&] { mix_at_snr(clean, silent_noise, 0.0); })
            .find("degenerate power") != std::string::npos);
  CHECK(error_message([&] { mix_at_snr(clean, silent_noise, 0.0); })
            .find("hushed") != std::string::npos);
  NoiseClip noise{make_white(5, 16000, 0.1), "ok", NoisePartition::kSeen};
  CHECK(error_message([&] { mix_at_snr(silent, noise, 0.0); })
            .find("degenerate power") != std::string::npos);
}

TEST_CASE("fw_seg_snr: identical signals clamp at the 35 dB ceiling") {
  Waveform w = make_white(21, 32000, 0.1);
  CHECK(fw_seg_snr(w, w) == doctest::Approx(35.0).epsilon(1e-12));
}

TEST_CASE("fw_seg_snr: polarity-inverted copy clamps at the -10 dB floor") {
  Waveform w = make_white(22, 32000, 0.1);
  Waveform inv = w;
  for (double& v : inv.samples) v = -v;
  CHECK(fw_seg_snr(w, inv) == doctest::Approx(-10.0).epsilon(1e-12));
}

TEST_CASE("fw_seg_snr: band-flat 5 dB fixture lands within 1.5 dB of 5") {
  // White clean + independent white noise: flat expected SNR in every band.
  Waveform clean = make_white(31, 32000, 0.1);
  NoiseClip clip{make_white(32, 32000, 0.1), "white", NoisePartition::kSeen};
  Waveform noisy = mix_at_snr(clean, clip, 5.0).mix;

  const double got = fw_seg_snr(clean, noisy);
  CHECK(std::abs(got - 5.0) <= 1.5);

  // Brute-force band-energy oracle: direct clean/residual energy ratio per
  // band (unit gain), same gating, weighting, and clamping conventions.
  std::vector<double> resid(clean.size());
  for (size_t i = 0; i < resid.size(); ++i)
    resid[i] = noisy.samples[i] - clean.samples[i];
  ComplexStft c = stft_complex(clean.samples, kWinLen, kHop, kFftSize, false);
  ComplexStft nz = stft_complex(resid, kWinLen, kHop, kFftSize, false);
  const std::vector<double> fb = mel_filterbank(
      kFwSegSnrBands, c.bins, kFftSize, kPipelineRate, 0.0, 8000.0);
  std::vector<double> frame_pow(c.frames, 0.0);
  double max_pow = 0.0;
  for (int t = 0; t < c.frames; ++t) {
    for (int f = 0; f < c.bins; ++f) frame_pow[t] += std::norm(c.at(t, f));
    max_pow = std::max(max_pow, frame_pow[t]);
  }
  double total = 0.0;
  int active = 0;
  for (int t = 0; t < c.frames; ++t) {
    if (frame_pow[t] <= max_pow * 1e-4) continue;
    double num = 0.0, den = 0.0;
    for (int b = 0; b < kFwSegSnrBands; ++b) {
      double sc = 0.0, sn = 0.0;
      const double* w = fb.data() + static_cast<size_t>(b) * c.bins;
      for (int f = 0; f < c.bins; ++f) {
        sc += w[f] * std::norm(c.at(t, f));
        sn += w[f] * std::norm(nz.at(t, f));
      }
      if (sc <= 1e-14) continue;
      const double weight = std::pow(sc, 0.1);
      num += weight * std::clamp(10.0 * std::log10((sc + 1e-14) / (sn + 1e-14)),
                                 -10.0, 35.0);
      den += weight;
    }
    if (den <= 0.0) continue;
    total += std::clamp(num / den, -10.0, 35.0);
    ++active;
  }
  REQUIRE(active > 0);
  const double brute = total / active;
  CHECK(std::abs(brute - 5.0) <= 1.5);
  CHECK(std::abs(got - brute) <= 1.0);
}

TEST_CASE("fw_seg_snr: length mismatch is rejected") {
  Waveform a = make_white(1, 16000, 0.1);
  Waveform b = make_white(2, 15999, 0.1);
  CHECK(error_message([&] { fw_seg_snr(a, b); }).find("length mismatch") !=
        std::string::npos);
}

TEST_CASE("spectral_subtraction_enhance: silent profile region is a no-op") {
  // 120 ms of silence then a tone: the noise floor estimate is exactly zero,
  // so analysis + overlap-add must reconstruct the input.
  Waveform w;
  w.samples.assign(16000, 0.0);
  for (size_t i = 1920; i < w.samples.size(); ++i)
    w.samples[i] = 0.4 * std::sin(2.0 * kPi * 500.0 * i / kPipelineRate);
  Waveform out = spectral_subtraction_enhance(w, 120.0);
  REQUIRE(out.samples.size() == w.samples.size());
  double worst = 0.0;
  for (size_t i = 0; i < w.samples.size(); ++i)
    worst = std::max(worst, std::abs(out.samples[i] - w.samples[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("spectral_subtraction_enhance: improves fwSegSNR at 0 dB white noise") {
  // Sine with a silent lead-in; white noise across the whole utterance.
  Waveform clean;
  clean.samples.assign(32000, 0.0);
  for (size_t i = 2400; i < clean.samples.size(); ++i)
    clean.samples[i] = 0.3 * std::sin(2.0 * kPi * 440.0 * i / kPipelineRate);
  NoiseClip clip{make_white(40, 32000, 0.1), "white", NoisePartition::kSeen};
  Waveform noisy = mix_at_snr(clean, clip, 0.0).mix;
  Waveform enhanced = spectral_subtraction_enhance(noisy, 120.0);
  REQUIRE(enhanced.samples.size() == noisy.samples.size());
  const double before = fw_seg_snr(clean, noisy);
  const double after = fw_seg_snr(clean, enhanced);
  CHECK(after > before);
}

TEST_CASE("spectral_subtraction_enhance: zero in, zero out") {
  Waveform w;
  w.samples.assign(16000, 0.0);
  Waveform out = spectral_subtraction_enhance(w, 120.0);
  REQUIRE(out.samples.size() == w.samples.size());
  for (double v : out.samples) CHECK(v == 0.0);
}

TEST_CASE("spectral_subtraction_enhance: rejects too-short input") {
  Waveform w = make_sine(440.0, 2000, 0.3);
  CHECK(error_message([&] { spectral_subtraction_enhance(w, 120.0); })
            .find("utterance too short") != std::string::npos);
}

TEST_CASE("spectral_subtraction_enhance: deterministic") {
  Waveform clean = make_sine(350.0, 24000, 0.3);
  NoiseClip clip{make_white(55, 24000, 0.2), "white", NoisePartition::kSeen};
  Waveform noisy = mix_at_snr(clean, clip, 0.0).mix;
  Waveform a = spectral_subtraction_enhance(noisy, 120.0);
  Waveform b = spectral_subtraction_enhance(noisy, 120.0);
  CHECK(a.samples == b.samples);
}

TEST_CASE("mel_filterbank: shape and coverage") {
  const int bands = 25, bins = 257;
  std::vector<double> fb =
      mel_filterbank(bands, bins, kFftSize, kPipelineRate, 0.0, 8000.0);
  REQUIRE(fb.size() == static_cast<size_t>(bands) * bins);
  for (double v : fb) REQUIRE(v >= 0.0);
  for (int b = 0; b < bands; ++b) {
    double s = 0.0;
    for (int f = 0; f < bins; ++f) s += fb[static_cast<size_t>(b) * bins + f];
    REQUIRE(s > 0.0);  // every band catches at least one bin
  }
  // Interior bins between the first and last band centers are all covered.
  int uncovered = 0;
  for (int f = 8; f < 250; ++f) {
    double s = 0.0;
    for (int b = 0; b < bands; ++b) s += fb[static_cast<size_t>(b) * bins + f];
    if (s <= 0.0) ++uncovered;
  }
  CHECK(uncovered == 0);
}

TEST_CASE("wav io: float32 round trip") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "avsqa_rt.wav").string();
  std::vector<double> samples(4000);
  Rng rng(77);
  for (double& v : samples)
    v = static_cast<double>(static_cast<float>(rng.uniform(-1.0, 1.0)));
  write_wav(path, samples, 16000);
  WavData back = read_wav(path);
  REQUIRE(back.sample_rate == 16000);
  REQUIRE(back.samples.size() == samples.size());
  for (size_t i = 0; i < samples.size(); ++i)
    REQUIRE(back.samples[i] == samples[i]);  // float32 values survive exactly
  std::remove(path.c_str());
}

TEST_CASE("wav io: reads 16-bit PCM") {
  namespace fs = std::filesystem;
  const std::string path =
      (fs::temp_directory_path() / "avsqa_pcm16.wav").string();
  const std::vector<int16_t> pcm = {0, 16384, -16384, 32767, -32768};
  {
    std::ofstream f(path, std::ios::binary);
    auto u16 = [&](uint16_t v) { f.put(v & 0xff).put(v >> 8); };
    auto u32 = [&](uint32_t v) {
      for (int k = 0; k < 4; ++k) f.put((v >> (8 * k)) & 0xff);
    };
    const uint32_t data_bytes = pcm.size() * 2;
    f.write("RIFF", 4);
    u32(36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    u32(16);
    u16(1);      // PCM
    u16(1);      // mono
    u32(16000);  // rate
    u32(16000 * 2);
    u16(2);
    u16(16);
    f.write("data", 4);
    u32(data_bytes);
    for (int16_t s : pcm) u16(static_cast<uint16_t>(s));
  }
  WavData back = read_wav(path);
  REQUIRE(back.sample_rate == 16000);
  REQUIRE(back.samples.size() == pcm.size());
  for (size_t i = 0; i < pcm.size(); ++i)
    REQUIRE(back.samples[i] == doctest::Approx(pcm[i] / 32768.0).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("rng: substreams are deterministic and path-sensitive") {
  Rng a = Rng::substream(123, {1, 2, 3});
  Rng b = Rng::substream(123, {1, 2, 3});
  Rng c = Rng::substream(123, {1, 2, 4});
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const double va = a.uniform(), vb = b.uniform(), vc = c.uniform();
    all_equal = all_equal && (va == vb);
    any_diff = any_diff || (va != vc);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("rng: uniform_int bounds and shuffle validity") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const int64_t v = rng.uniform_int(-3, 7);
    REQUIRE(v >= -3);
    REQUIRE(v <= 7);
  }
  std::vector<int> xs(100);
  for (int i = 0; i < 100; ++i) xs[i] = i;
  rng.shuffle(xs);
  std::vector<int> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) REQUIRE(sorted[i] == i);
}
