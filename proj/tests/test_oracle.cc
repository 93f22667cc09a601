// tests/test_oracle.cc

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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "common/error.h"
#include "common/rng.h"
#include "common/wav_io.h"
#include "dsp/mixing.h"
#include "dsp/waveform.h"
#include "oracle/eval_stats.h"
#include "oracle/labels.h"
#include "oracle/pseudo_pesq.h"
#include "oracle/resample.h"
#include "oracle/stoi.h"

using namespace avsqa;
using namespace avsqa::dsp;
using namespace avsqa::oracle;

namespace {

const double kPi = std::acos(-1.0);
const std::string kDataDir = AVSQA_TEST_DATA_DIR;

Waveform load_wave(const std::string& path) {
  WavData w = read_wav(path);
  return Waveform{w.samples, w.sample_rate};
}

// Speech-like harmonic stack with slow AM, peak-normalized.
Waveform make_voice(uint64_t seed, size_t n, double f0) {
  Rng rng(seed);
  Waveform w;
  w.samples.assign(n, 0.0);
  double phase = rng.uniform(0.0, 2.0 * kPi);
  const double am_phase = rng.uniform(0.0, 2.0 * kPi);
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kPipelineRate;
    const double inst = f0 * (1.0 + 0.08 * std::sin(2.0 * kPi * 0.7 * t));
    phase += 2.0 * kPi * inst / kPipelineRate;
    double v = 0.0;
    for (int h = 1; h * f0 <= 4000.0; ++h) v += std::sin(h * phase) / h;
    const double env = 0.55 + 0.45 * std::sin(2.0 * kPi * 3.0 * t + am_phase);
    w.samples[i] = v * env;
  }
  double peak = 0.0;
  for (double v : w.samples) peak = std::max(peak, std::abs(v));
  for (double& v : w.samples) v = 0.5 * v / peak;
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

// O(n^2) rank oracle: rank of v[i] = (#smaller) + (1 + #equal) / 2, 1-based.
std::vector<double> brute_force_ranks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    int smaller = 0, equal = 0;
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++smaller;
      if (v[j] == v[i]) ++equal;
    }
    ranks[i] = smaller + 0.5 * (equal + 1);
  }
  return ranks;
}

}  // namespace

TEST_CASE("resample_poly: tracks a band-limited tone through 16k->10k") {
  const size_t n = 16000;
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i)
    x[i] = 0.5 * std::sin(2.0 * kPi * 440.0 * i / 16000.0);
  std::vector<double> y = resample_16k_to_10k(x);
  REQUIRE(y.size() == (n * 5 + 7) / 8);
  // Compare the interior against the ideal 440 Hz tone at 10 kHz.
  double worst = 0.0;
  for (size_t j = 200; j + 200 < y.size(); ++j) {
    const double want = 0.5 * std::sin(2.0 * kPi * 440.0 * j / 10000.0);
    worst = std::max(worst, std::abs(y[j] - want));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("resample_poly: holds DC within the filter's passband ripple") {
  std::vector<double> x(4000, 0.75);
  std::vector<double> y = resample_16k_to_10k(x);
  double worst = 0.0;
  for (size_t j = 100; j + 100 < y.size(); ++j)
    worst = std::max(worst, std::abs(y[j] - 0.75));
  CHECK(worst < 1e-3);  // Kaiser beta 5.0 passband ripple is ~1e-4
}

TEST_CASE("stoi: identical non-silent signals score 1") {
  Waveform v = make_voice(101, 32000, 140.0);
  CHECK(stoi(v, v) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("stoi: white-noise ladder at {10, 0, -10} dB strictly decreases") {
  Waveform v = make_voice(102, 32000, 120.0);
  NoiseClip clip{make_white(103, 32000, 1.0), "white", NoisePartition::kSeen};
  const double s10 = stoi(v, mix_at_snr(v, clip, 10.0).mix);
  const double s0 = stoi(v, mix_at_snr(v, clip, 0.0).mix);
  const double sm10 = stoi(v, mix_at_snr(v, clip, -10.0).mix);
  CHECK(s10 > s0);
  CHECK(s0 > sm10);
}

TEST_CASE("stoi: matches the committed reference goldens within 0.01") {
  std::ifstream golden(kDataDir + "/stoi_golden.csv");
  REQUIRE(golden.good());
  std::string line;
  std::getline(golden, line);  // header
  int checked = 0;
  double worst = 0.0;
  while (std::getline(golden, line)) {
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    const std::string fid = line.substr(0, comma);
    const double want = std::stod(line.substr(comma + 1));
    Waveform clean = load_wave(kDataDir + "/stoi_fixtures/" + fid + "_clean.wav");
    Waveform deg = load_wave(kDataDir + "/stoi_fixtures/" + fid + "_deg.wav");
    const double got = stoi(clean, deg);
    worst = std::max(worst, std::abs(got - want));
    CHECK_MESSAGE(std::abs(got - want) <= 0.01, fid, ": got ", got, " want ",
                  want);
    ++checked;
  }
  REQUIRE(checked == 20);
  MESSAGE("worst golden deviation: ", worst);
}

TEST_CASE("stoi: invariant to scaling the degraded signal") {
  Waveform v = make_voice(104, 32000, 160.0);
  NoiseClip clip{make_white(105, 32000, 1.0), "white", NoisePartition::kSeen};
  Waveform noisy = mix_at_snr(v, clip, 0.0).mix;
  const double base = stoi(v, noisy);
  for (double c : {0.5, 2.0}) {
    Waveform scaled = noisy;
    for (double& s : scaled.samples) s *= c;
    CHECK(stoi(v, scaled) == doctest::Approx(base).epsilon(1e-7));
  }
}

TEST_CASE("stoi: rejects mismatched and too-short inputs") {
  Waveform a = make_voice(106, 32000, 150.0);
  Waveform b = make_voice(106, 31999, 150.0);
  CHECK(error_message([&] { stoi(a, b); }).find("length mismatch") !=
        std::string::npos);
  Waveform tiny = make_voice(107, 4800, 150.0);  // 0.3 s
  CHECK(error_message([&] { stoi(tiny, tiny); }).find("too short for STOI") !=
        std::string::npos);
}

TEST_CASE("pseudo_pesq: affine endpoints and midpoint") {
  CHECK(pseudo_pesq_from_snr(-10.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pseudo_pesq_from_snr(35.0) == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(pseudo_pesq_from_snr(12.5) == doctest::Approx(2.75).epsilon(1e-12));
  CHECK(pseudo_pesq_from_snr(-30.0) == 1.0);  // clamped below
  CHECK(pseudo_pesq_from_snr(50.0) == 4.5);   // clamped above
}

TEST_CASE("pseudo_pesq: waveform path hits the boundaries") {
  Waveform v = make_voice(108, 32000, 130.0);
  CHECK(pseudo_pesq(v, v) == doctest::Approx(4.5).epsilon(1e-12));
  Waveform inv = v;
  for (double& s : inv.samples) s = -s;
  CHECK(pseudo_pesq(v, inv) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pseudo_pesq: monotone over the mixing SNR grid") {
  Waveform v = make_voice(109, 32000, 145.0);
  NoiseClip clip{make_white(110, 32000, 1.0), "white", NoisePartition::kSeen};
  double prev = -1.0;
  for (double snr : {-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0}) {
    const double q = pseudo_pesq(v, mix_at_snr(v, clip, snr).mix);
    CHECK(q >= prev);
    prev = q;
  }
}

TEST_CASE("eval_stats: perfect linear relation") {
  Stats s = eval_stats({1, 2, 3}, {2, 4, 6});
  CHECK(s.lcc == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.srcc == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.mse == doctest::Approx(14.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("eval_stats: reversed ranks") {
  Stats s = eval_stats({3, 2, 1}, {1, 2, 3});
  CHECK(s.srcc == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("eval_stats: tie ranks match the spec vector") {
  const std::vector<double> pred = {1.0, 2.0, 2.0, 4.0};
  std::vector<double> ranks = average_ranks(pred);
  CHECK(ranks == std::vector<double>{1.0, 2.5, 2.5, 4.0});
  Stats s = eval_stats(pred, {1, 3, 2, 4});
  // Independent computation from the brute-force ranks.
  std::vector<double> rp = brute_force_ranks(pred);
  std::vector<double> rt = brute_force_ranks({1, 3, 2, 4});
  Stats ref = eval_stats(rp, rt);
  CHECK(s.srcc == doctest::Approx(ref.lcc).epsilon(1e-12));
}

TEST_CASE("eval_stats: srcc matches brute-force tie oracle on random data") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(3, 40);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      // Coarse integer grid to force plenty of ties.
      a[i] = static_cast<double>(rng.uniform_int(0, 6));
      b[i] = static_cast<double>(rng.uniform_int(0, 6));
    }
    const bool a_const =
        *std::max_element(a.begin(), a.end()) ==
        *std::min_element(a.begin(), a.end());
    const bool b_const =
        *std::max_element(b.begin(), b.end()) ==
        *std::min_element(b.begin(), b.end());
    if (a_const || b_const) continue;
    std::vector<double> ra = brute_force_ranks(a);
    std::vector<double> rb = brute_force_ranks(b);
    const bool ra_const =
        *std::max_element(ra.begin(), ra.end()) ==
        *std::min_element(ra.begin(), ra.end());
    if (ra_const) continue;
    Stats got = eval_stats(a, b);
    Stats want = eval_stats(ra, rb);
    REQUIRE(got.srcc == doctest::Approx(want.lcc).epsilon(1e-12));
  }
}

TEST_CASE("eval_stats: degenerate sides are named") {
  CHECK(error_message([&] { eval_stats({1, 2, 3}, {5, 5, 5}); })
            .find("degenerate correlation (constant truth)") !=
        std::string::npos);
  CHECK(error_message([&] { eval_stats({5, 5, 5}, {1, 2, 3}); })
            .find("degenerate correlation (constant predictions)") !=
        std::string::npos);
}

TEST_CASE("eval_stats: affine and monotone invariances") {
  Rng rng(77);
  std::vector<double> a(50), b(50);
  for (int i = 0; i < 50; ++i) {
    a[i] = rng.normal();
    b[i] = 0.4 * a[i] + rng.normal();
  }
  Stats base = eval_stats(a, b);
  // lcc invariant under positive affine maps of either argument.
  std::vector<double> a2(50), b2(50);
  for (int i = 0; i < 50; ++i) {
    a2[i] = 2.5 * a[i] - 7.0;
    b2[i] = 0.3 * b[i] + 11.0;
  }
  CHECK(eval_stats(a2, b).lcc == doctest::Approx(base.lcc).epsilon(1e-9));
  CHECK(eval_stats(a, b2).lcc == doctest::Approx(base.lcc).epsilon(1e-9));
  // srcc invariant under strictly increasing maps.
  std::vector<double> a3(50), b3(50);
  for (int i = 0; i < 50; ++i) {
    a3[i] = std::exp(a[i]);
    b3[i] = b[i] * b[i] * b[i];
  }
  CHECK(eval_stats(a3, b3).srcc == doctest::Approx(base.srcc).epsilon(1e-9));
  // mse(x, x) = 0 and lcc symmetry.
  CHECK(eval_stats(a, a).mse == 0.0);
  CHECK(eval_stats(a, b).lcc == doctest::Approx(eval_stats(b, a).lcc).epsilon(1e-12));
}

TEST_CASE("ingest_external_labels: accepts boundary values") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "labels_ok.jsonl").string();
  {
    std::ofstream f(path);
    f << R"({"utterance_id":"u1","pesq":4.5,"stoi":1.0})" << "\n";
    f << R"({"utterance_id":"u2","pesq":1.0,"stoi":0.0})" << "\n";
    f << "\n";  // blank lines are skipped
    f << R"({"utterance_id":"u3","pesq":2.75,"stoi":0.5})" << "\n";
  }
  auto labels = ingest_external_labels(path);
  REQUIRE(labels.size() == 3);
  CHECK(labels.at("u1").quality == 4.5);
  CHECK(labels.at("u1").intelligibility == 1.0);
  CHECK(labels.at("u1").quality_source == QualitySource::kExternalPesq);
  std::remove(path.c_str());
}

TEST_CASE("ingest_external_labels: reports every bad line") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "labels_bad.jsonl").string();
  {
    std::ofstream f(path);
    f << R"({"utterance_id":"u1","pesq":3.0,"stoi":0.8})" << "\n";  // line 1
    f << R"({"utterance_id":"u2","pesq":5.1,"stoi":0.8})" << "\n";  // line 2
    f << R"({"pesq":3.0,"stoi":0.8})" << "\n";                      // line 3
    f << R"({"utterance_id":"u1","pesq":3.0,"stoi":0.8})" << "\n";  // line 4
    f << R"(not json)" << "\n";                                     // line 5
    f << R"({"utterance_id":"u3","pesq":3.0,"stoi":-0.2})" << "\n"; // line 6
  }
  const std::string msg = error_message([&] { ingest_external_labels(path); });
  CHECK(msg.find("line 2: pesq 5.1 outside") != std::string::npos);
  CHECK(msg.find("line 3: missing utterance_id") != std::string::npos);
  CHECK(msg.find("duplicate utterance_id 'u1'") != std::string::npos);
  CHECK(msg.find("line 4") != std::string::npos);
  CHECK(msg.find("also line 1") != std::string::npos);
  CHECK(msg.find("line 5: malformed JSON") != std::string::npos);
  CHECK(msg.find("line 6: stoi -0.2 outside") != std::string::npos);
  std::remove(path.c_str());
}
