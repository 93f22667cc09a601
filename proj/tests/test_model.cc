// tests/test_model.cc

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

// Network-level contracts: the hand-computable loss values, the documented
// tensor shapes at full scale, masking and padding invariances, head
// isolation, determinism, the composed finite-difference gradient check over
// every learnable parameter, and the checkpoint container.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "common/error.h"
#include "common/rng.h"
#include "doctest.h"
#include "model/checkpoint.h"
#include "model/config.h"
#include "model/network.h"
#include "nn/grad_check.h"
#include "nn/graph.h"
#include "nn/ops.h"
#include "nn/params.h"
#include "nn/tensor.h"

using avsqa::Error;
using avsqa::Rng;
namespace nn = avsqa::nn;
namespace model = avsqa::model;
using model::ModelConfig;
using model::Modality;
using model::Network;
using model::SampleInput;
using model::Tasks;

namespace {

ModelConfig small_cfg(Modality m = Modality::kMultimodal,
                      Tasks t = Tasks::kMultiTask) {
  ModelConfig cfg;
  cfg.width_multiplier = 0.125;
  cfg.modality = m;
  cfg.tasks = t;
  return cfg;
}

nn::Tensor random_tensor(std::vector<int> shape, Rng& rng, double lo = -1.0,
                         double hi = 1.0) {
  nn::Tensor t(std::move(shape));
  for (double& v : t.data) v = rng.uniform(lo, hi);
  return t;
}

// A sample with zero-padded feature rows (the trainer's padding convention)
// and optional junk video frames past valid_m, which forward() must ignore.
SampleInput make_sample(const ModelConfig& cfg, int t_pad, int valid_t,
                        int m_pad, int valid_m, Rng& rng,
                        double video_junk = 0.0) {
  SampleInput in;
  in.features = nn::Tensor({t_pad, ModelConfig::kFreqBins});
  for (int t = 0; t < valid_t; ++t)
    for (int f = 0; f < ModelConfig::kFreqBins; ++f)
      in.features.at(t, f) = rng.uniform(0.0, 2.0);
  in.valid_t = valid_t;
  if (cfg.modality == Modality::kMultimodal) {
    in.video = nn::Tensor({m_pad, ModelConfig::kLipSize, ModelConfig::kLipSize});
    const size_t valid_px = static_cast<size_t>(valid_m) *
                            ModelConfig::kLipSize * ModelConfig::kLipSize;
    for (size_t i = 0; i < in.video.data.size(); ++i)
      in.video[i] = i < valid_px ? rng.uniform(0.0, 1.0) : video_junk;
    in.valid_m = valid_m;
  }
  return in;
}

double max_abs_diff(const nn::Tensor& a, const nn::Tensor& b) {
  REQUIRE(a.shape == b.shape);
  double m = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool bitwise_equal(const nn::Tensor& a, const nn::Tensor& b) {
  if (a.shape != b.shape) return false;
  for (size_t i = 0; i < a.data.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration.

TEST_CASE("model: config validation and mode names") {
  ModelConfig ok = small_cfg();
  ok.validate();

  ModelConfig bad = ok;
  bad.width_multiplier = 0.0;
  CHECK(error_message([&] { bad.validate(); }).find("width_multiplier") !=
        std::string::npos);
  bad.width_multiplier = 1.25;
  CHECK(error_message([&] { bad.validate(); }).find("width_multiplier") !=
        std::string::npos);

  bad = ok;
  bad.dropout = 1.0;
  CHECK(error_message([&] { bad.validate(); }).find("dropout") !=
        std::string::npos);

  bad = ok;
  bad.beta = 0.0;
  bad.gamma = 0.0;
  CHECK(error_message([&] { bad.validate(); })
            .find("beta and gamma are both zero") != std::string::npos);
  // A single-task mode ignores the absent task's weight...
  bad.tasks = Tasks::kQualityOnly;
  bad.beta = 1.0;
  bad.validate();
  // ...but a zero weight on the only active task is still degenerate.
  bad.beta = 0.0;
  bad.gamma = 5.0;
  CHECK(error_message([&] { bad.validate(); })
            .find("beta and gamma are both zero") != std::string::npos);

  bad = ok;
  bad.attention_heads = 2;
  CHECK(error_message([&] { bad.validate(); }).find("attention head") !=
        std::string::npos);

  for (Modality m : {Modality::kMultimodal, Modality::kAudioOnly})
    CHECK(model::modality_from_name(model::modality_name(m)) == m);
  for (Tasks t : {Tasks::kQualityOnly, Tasks::kIntelligibilityOnly,
                  Tasks::kMultiTask})
    CHECK(model::tasks_from_name(model::tasks_name(t)) == t);
  CHECK(error_message([] { model::modality_from_name("video_only"); })
            .find("unknown modality") != std::string::npos);
  CHECK(error_message([] { model::tasks_from_name("both"); })
            .find("unknown tasks mode") != std::string::npos);

  // Width arithmetic at the two scales the tests use.
  ModelConfig full;
  CHECK(full.d_v() == 512);
  CHECK(full.d_h() == 128);
  CHECK(full.fused_width() == 769);
  const ModelConfig eighth = small_cfg();
  CHECK(eighth.d_v() == 64);
  CHECK(eighth.d_h() == 16);
  CHECK(eighth.lstm_hidden() == 16);
  CHECK(eighth.fused_width() == 321);
}

// ---------------------------------------------------------------------------
// Loss algebra. The hand-evaluated values are exact in binary arithmetic.

TEST_CASE("model: task loss matches the hand evaluation") {
  nn::Graph g;
  nn::Tensor utt({1});
  utt[0] = 2.5;
  nn::Tensor frames({2, 1});
  frames[0] = 2.0;
  frames[1] = 3.0;
  const int hu = nn::constant(g, utt);
  const int hf = nn::constant(g, frames);

  // (3.0 - 2.5)^2 + 1 * mean{(3-2)^2, (3-3)^2} = 0.25 + 0.5
  const int l = Network::loss_task(g, hu, hf, 2, 3.0, 1.0);
  CHECK(g.val(l)[0] == 0.75);

  // alpha = 0 reduces to the utterance-level squared error.
  const int l0 = Network::loss_task(g, hu, hf, 2, 3.0, 0.0);
  CHECK(g.val(l0)[0] == 0.25);

  // Perfect prediction at both levels.
  nn::Tensor putt({1});
  putt[0] = 3.0;
  nn::Tensor pframes({3, 1});
  for (double& v : pframes.data) v = 3.0;
  const int lp = Network::loss_task(g, nn::constant(g, putt),
                                    nn::constant(g, pframes), 3, 3.0, 1.0);
  CHECK(g.val(lp)[0] == 0.0);
}

TEST_CASE("model: total loss weights the active task terms") {
  nn::Graph g;
  nn::Tensor a({1}), b({1});
  a[0] = 0.75;
  b[0] = 0.25;
  const int lq = nn::constant(g, a);
  const int li = nn::constant(g, b);

  Network both(small_cfg(Modality::kAudioOnly, Tasks::kMultiTask));
  CHECK(g.val(both.loss_total(g, lq, li))[0] == 1.0);

  ModelConfig weighted = small_cfg(Modality::kAudioOnly, Tasks::kMultiTask);
  weighted.beta = 2.0;
  weighted.gamma = 3.0;
  nn::Tensor c({1}), d({1});
  c[0] = 0.1;
  d[0] = 0.2;
  const int v = Network(weighted).loss_total(g, nn::constant(g, c),
                                             nn::constant(g, d));
  CHECK(std::abs(g.val(v)[0] - 0.8) < 1e-12);

  // gamma = 0 leaves exactly the weighted quality term.
  ModelConfig qonly = small_cfg(Modality::kAudioOnly, Tasks::kMultiTask);
  qonly.beta = 1.5;
  qonly.gamma = 0.0;
  CHECK(g.val(Network(qonly).loss_total(g, lq, li))[0] == 1.5 * 0.75);

  // Single-task configs pass -1 for the missing head.
  Network q(small_cfg(Modality::kAudioOnly, Tasks::kQualityOnly));
  CHECK(g.val(q.loss_total(g, lq, -1))[0] == 0.75);
  Network i(small_cfg(Modality::kAudioOnly, Tasks::kIntelligibilityOnly));
  CHECK(g.val(i.loss_total(g, -1, li))[0] == 0.25);
  CHECK(error_message([&] { q.loss_total(g, -1, -1); })
            .find("no task losses") != std::string::npos);
}

TEST_CASE("model: utterance pooling is the arithmetic mean") {
  nn::Graph g;
  nn::Tensor f({3, 1});
  f[0] = 0.6;
  f[1] = 0.8;
  f[2] = 1.0;
  const int p = Network::pool_utterance(g, nn::constant(g, f), 3);
  CHECK(std::abs(g.val(p)[0] - 0.8) < 1e-12);

  nn::Tensor c({7, 1});
  for (double& v : c.data) v = 0.37;
  const int pc = Network::pool_utterance(g, nn::constant(g, c), 7);
  CHECK(std::abs(g.val(pc)[0] - 0.37) < 1e-12);

  // Compensated-summation oracle on a long score vector.
  Rng rng = Rng::substream(2026, {41});
  nn::Tensor longf({1000, 1});
  for (double& v : longf.data) v = rng.uniform(0.0, 5.0);
  double sum = 0.0, comp = 0.0;
  for (double v : longf.data) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const int pl = Network::pool_utterance(g, nn::constant(g, longf), 1000);
  CHECK(std::abs(g.val(pl)[0] - sum / 1000.0) < 1e-12);
}

// ---------------------------------------------------------------------------
// Fusion.

TEST_CASE("model: fuse concatenates audio and visual blocks") {
  const ModelConfig cfg = small_cfg();
  Network net(cfg);
  Rng rng = Rng::substream(2026, {42});
  nn::Graph g;

  const nn::Tensor spec = random_tensor({5, ModelConfig::kFreqBins}, rng);
  const nn::Tensor vis = random_tensor({5, cfg.d_v()}, rng);
  const int hs = nn::variable(g, spec);
  const int hv = nn::variable(g, vis);
  const int fused = net.fuse(g, hs, hv);
  const nn::Tensor& vf = g.val(fused);
  REQUIRE(vf.shape == std::vector<int>{5, cfg.fused_width()});
  for (int t = 0; t < 5; ++t) {
    for (int f = 0; f < ModelConfig::kFreqBins; ++f)
      CHECK(vf.at(t, f) == spec.at(t, f));
    for (int d = 0; d < cfg.d_v(); ++d)
      CHECK(vf.at(t, ModelConfig::kFreqBins + d) == vis.at(t, d));
  }

  // Gradient reaches both blocks.
  const nn::Tensor w = random_tensor({5 * cfg.fused_width(), 1}, rng, 0.5, 1.5);
  const int loss = nn::mean_rows_masked(
      g, nn::mul(g, nn::reshape(g, fused, {5 * cfg.fused_width(), 1}),
                 nn::constant(g, w)),
      5 * cfg.fused_width());
  g.backward(loss);
  const nn::Tensor* gs = g.grad_or_null(hs);
  const nn::Tensor* gv = g.grad_or_null(hv);
  REQUIRE(gs != nullptr);
  REQUIRE(gv != nullptr);
  for (double d : gs->data) CHECK(d != 0.0);
  for (double d : gv->data) CHECK(d != 0.0);

  // Audio-only substitution: spectrogram block, then zeros.
  nn::Graph g2;
  const int hs2 = nn::constant(g2, spec);
  const nn::Tensor& vz = g2.val(net.fuse(g2, hs2, -1));
  for (int t = 0; t < 5; ++t) {
    for (int f = 0; f < ModelConfig::kFreqBins; ++f)
      CHECK(vz.at(t, f) == spec.at(t, f));
    for (int d = 0; d < cfg.d_v(); ++d)
      CHECK(vz.at(t, ModelConfig::kFreqBins + d) == 0.0);
  }

  // Mismatched lengths are rejected.
  nn::Graph g3;
  const int a = nn::constant(g3, random_tensor({5, ModelConfig::kFreqBins}, rng));
  const int b = nn::constant(g3, random_tensor({4, cfg.d_v()}, rng));
  CHECK(error_message([&] { net.fuse(g3, a, b); }).find("time mismatch") !=
        std::string::npos);
}

TEST_CASE("model: temporal upsampling endpoints and midpoint") {
  Network net(small_cfg());
  Rng rng = Rng::substream(2026, {43});
  nn::Graph g;

  // M = T is the identity, bit for bit.
  const nn::Tensor emb = random_tensor({6, 3}, rng);
  const int he = nn::constant(g, emb);
  CHECK(bitwise_equal(g.val(net.upsample_time(g, he, 6)), emb));

  // M = 2, T = 3: the middle row is the mean of the two source rows.
  nn::Tensor two({2, 2});
  two.at(0, 0) = 0.0;
  two.at(0, 1) = 1.0;
  two.at(1, 0) = 1.0;
  two.at(1, 1) = 3.0;
  const nn::Tensor& up = g.val(net.upsample_time(g, nn::constant(g, two), 3));
  REQUIRE(up.shape == std::vector<int>{3, 2});
  CHECK(up.at(0, 0) == 0.0);
  CHECK(up.at(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(up.at(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(up.at(2, 1) == 3.0);
}

// ---------------------------------------------------------------------------
// Visual encoder.

TEST_CASE("model: visual encoder shapes at full width") {
  ModelConfig cfg;  // width_multiplier 1
  Network net(cfg);
  nn::ParamStore store(7);
  net.register_params(&store);

  Rng rng = Rng::substream(2026, {44});
  const nn::Tensor video = random_tensor(
      {25, ModelConfig::kLipSize, ModelConfig::kLipSize}, rng, 0.0, 1.0);

  nn::Graph g;
  nn::Binder bind(&g, &store);
  const int emb = net.visual_encode(g, bind, nn::constant(g, video));
  REQUIRE(g.val(emb).shape == std::vector<int>{25, 512});

  // 1 s at 25 fps against a 61-frame spectrogram.
  const int up = net.upsample_time(g, emb, 61);
  REQUIRE(g.val(up).shape == std::vector<int>{61, 512});
  for (int d = 0; d < 512; ++d) {
    CHECK(g.val(up).at(0, d) == g.val(emb).at(0, d));
    CHECK(g.val(up).at(60, d) == g.val(emb).at(24, d));
  }

  const int spec =
      nn::constant(g, random_tensor({61, ModelConfig::kFreqBins}, rng));
  REQUIRE(g.val(net.fuse(g, spec, up)).shape == std::vector<int>{61, 769});

  // Malformed frames are rejected before any arithmetic.
  nn::Graph g2;
  nn::Binder bind2(&g2, &store);
  const int badv = nn::constant(g2, random_tensor({6, 44, 88}, rng, 0.0, 1.0));
  CHECK(error_message([&] { net.visual_encode(g2, bind2, badv); })
            .find("video format") != std::string::npos);
}

TEST_CASE("model: constant clip gives identical embedding rows") {
  ModelConfig cfg = small_cfg();
  cfg.width_multiplier = 0.25;
  Network net(cfg);
  nn::ParamStore store(8);
  net.register_params(&store);

  Rng rng = Rng::substream(2026, {45});
  nn::Tensor frame =
      random_tensor({ModelConfig::kLipSize, ModelConfig::kLipSize}, rng, 0.0, 1.0);
  nn::Tensor video({6, ModelConfig::kLipSize, ModelConfig::kLipSize});
  for (int m = 0; m < 6; ++m)
    std::copy(frame.data.begin(), frame.data.end(),
              video.data.begin() + static_cast<size_t>(m) * frame.numel());

  nn::Graph g;
  nn::Binder bind(&g, &store);
  const nn::Tensor& emb = g.val(net.visual_encode(g, bind, nn::constant(g, video)));
  REQUIRE(emb.dim(0) == 6);
  for (int m = 1; m < 6; ++m)
    for (int d = 0; d < emb.dim(1); ++d)
      CHECK(std::abs(emb.at(m, d) - emb.at(0, d)) < 1e-12);
}

// ---------------------------------------------------------------------------
// Trunk.

TEST_CASE("model: crnn preserves time and masks padded rows") {
  const ModelConfig cfg = small_cfg(Modality::kAudioOnly);
  Network net(cfg);
  nn::ParamStore store(9);
  net.register_params(&store);
  Rng rng = Rng::substream(2026, {46});
  const nn::Tensor fused = random_tensor({7, cfg.fused_width()}, rng, 0.0, 1.0);

  nn::Graph g;
  nn::Binder bind(&g, &store);
  const int h = net.crnn_forward(g, bind, nn::constant(g, fused), 7, false,
                                 nullptr);
  REQUIRE(g.val(h).shape == std::vector<int>{7, cfg.d_h()});

  // Same store, fresh graph: the untrained forward is bit-reproducible.
  nn::Graph g2;
  nn::Binder bind2(&g2, &store);
  const int h2 = net.crnn_forward(g2, bind2, nn::constant(g2, fused), 7, false,
                                  nullptr);
  CHECK(bitwise_equal(g.val(h), g2.val(h2)));

  // Rows past valid_t are exactly zero.
  nn::Graph g3;
  nn::Binder bind3(&g3, &store);
  const nn::Tensor& hm = g3.val(
      net.crnn_forward(g3, bind3, nn::constant(g3, fused), 5, false, nullptr));
  for (int t = 5; t < 7; ++t)
    for (int d = 0; d < cfg.d_h(); ++d) CHECK(hm.at(t, d) == 0.0);
}

TEST_CASE("model: attention is row-stochastic and exact at T = 1") {
  const ModelConfig cfg = small_cfg(Modality::kAudioOnly);
  Network net(cfg);
  nn::ParamStore store(10);
  net.register_params(&store);
  Rng rng = Rng::substream(2026, {47});

  // T = 1: softmax over one key is 1, so the context IS the value row.
  {
    nn::Graph g;
    nn::Binder bind(&g, &store);
    const int h = nn::constant(g, random_tensor({1, cfg.d_h()}, rng));
    const auto [ctx, attn] = net.attend(g, bind, h, 1, "q");
    CHECK(g.val(attn)[0] == 1.0);
    const int vref = nn::matmul_nt(g, h, bind("head.q.wv"));
    CHECK(bitwise_equal(g.val(ctx), g.val(vref)));
  }

  // Rows of the weight matrix are non-negative and sum to 1 for all T <= 64.
  for (int t = 1; t <= 64; ++t) {
    nn::Graph g;
    nn::Binder bind(&g, &store);
    const int h = nn::constant(g, random_tensor({t, cfg.d_h()}, rng));
    const auto [ctx, attn] = net.attend(g, bind, h, t, "i");
    (void)ctx;
    const nn::Tensor& a = g.val(attn);
    REQUIRE(a.shape == std::vector<int>{t, t});
    for (int r = 0; r < t; ++r) {
      double s = 0.0;
      for (int c = 0; c < t; ++c) {
        CHECK(a.at(r, c) >= 0.0);
        s += a.at(r, c);
      }
      CHECK(std::abs(s - 1.0) < 1e-6);
    }
  }

  // With a shorter valid span the padded block stays zero.
  nn::Graph g;
  nn::Binder bind(&g, &store);
  const int h = nn::constant(g, random_tensor({6, cfg.d_h()}, rng));
  const auto [ctx, attn] = net.attend(g, bind, h, 4, "q");
  (void)ctx;
  const nn::Tensor& a = g.val(attn);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c)
      if (r >= 4 || c >= 4) CHECK(a.at(r, c) == 0.0);
}

TEST_CASE("model: frame scores reduce to the bias under zero weights") {
  const ModelConfig cfg = small_cfg(Modality::kAudioOnly);
  Network net(cfg);
  nn::ParamStore store(11);
  net.register_params(&store);
  for (double& v : store.value("head.q.score.w").data) v = 0.0;
  store.value("head.q.score.b")[0] = 0.7;

  Rng rng = Rng::substream(2026, {48});
  nn::Graph g;
  nn::Binder bind(&g, &store);
  const int ctx = nn::constant(g, random_tensor({6, cfg.d_h()}, rng));
  const nn::Tensor& s = g.val(net.frame_scores(g, bind, ctx, "q"));
  REQUIRE(s.shape == std::vector<int>{6, 1});
  for (int t = 0; t < 6; ++t) CHECK(s.at(t, 0) == 0.7);
}

// ---------------------------------------------------------------------------
// Full forward invariants.

TEST_CASE("model: head isolation under single-task gradient flow") {
  const double q_truth = 3.2, i_truth = 0.8;
  Rng rng = Rng::substream(2026, {49});

  // gamma-only loss: quality-head gradients are identically zero.
  ModelConfig cfg = small_cfg(Modality::kAudioOnly, Tasks::kMultiTask);
  cfg.beta = 0.0;
  cfg.gamma = 1.0;
  {
    Network net(cfg);
    nn::ParamStore store(12);
    net.register_params(&store);
    SampleInput in = make_sample(cfg, 6, 5, 0, 0, rng);
    nn::Graph g;
    nn::Binder bind(&g, &store);
    const auto r = net.forward(g, bind, in, false, nullptr, &q_truth, &i_truth);
    g.backward(r.loss);
    bind.harvest();
    for (const char* suffix : {"wq", "wk", "wv", "score.w", "score.b"}) {
      for (double d : store.grad(std::string("head.q.") + suffix).data)
        CHECK(d == 0.0);
      double isum = 0.0;
      for (double d : store.grad(std::string("head.i.") + suffix).data)
        isum += std::abs(d);
      CHECK(isum > 0.0);
    }
    double trunk = 0.0;
    for (double d : store.grad("dense.w").data) trunk += std::abs(d);
    CHECK(trunk > 0.0);
  }

  // beta-only loss: the mirror image.
  cfg.beta = 1.0;
  cfg.gamma = 0.0;
  {
    Network net(cfg);
    nn::ParamStore store(12);
    net.register_params(&store);
    SampleInput in = make_sample(cfg, 6, 5, 0, 0, rng);
    nn::Graph g;
    nn::Binder bind(&g, &store);
    const auto r = net.forward(g, bind, in, false, nullptr, &q_truth, &i_truth);
    g.backward(r.loss);
    bind.harvest();
    for (const char* suffix : {"wq", "wk", "wv", "score.w", "score.b"})
      for (double d : store.grad(std::string("head.i.") + suffix).data)
        CHECK(d == 0.0);
  }
}

TEST_CASE("model: zero padding leaves valid outputs unchanged") {
  Rng rng = Rng::substream(2026, {50});
  const ModelConfig cfg = small_cfg(Modality::kMultimodal, Tasks::kMultiTask);
  Network net(cfg);
  nn::ParamStore store(13);
  net.register_params(&store);

  SampleInput exact = make_sample(cfg, 9, 9, 5, 5, rng);
  SampleInput padded;
  padded.features = nn::Tensor({14, ModelConfig::kFreqBins});
  std::copy(exact.features.data.begin(), exact.features.data.end(),
            padded.features.data.begin());
  padded.valid_t = 9;
  padded.video = nn::Tensor({8, ModelConfig::kLipSize, ModelConfig::kLipSize});
  std::copy(exact.video.data.begin(), exact.video.data.end(),
            padded.video.data.begin());
  for (size_t i = exact.video.data.size(); i < padded.video.data.size(); ++i)
    padded.video[i] = 12345.0;  // junk frames must never be touched
  padded.valid_m = 5;

  nn::Graph ga, gb;
  nn::Binder ba(&ga, &store), bb(&gb, &store);
  const auto ra = net.forward(ga, ba, exact, false, nullptr, nullptr, nullptr);
  const auto rb = net.forward(gb, bb, padded, false, nullptr, nullptr, nullptr);

  CHECK(std::abs(ga.val(ra.quality_utt)[0] - gb.val(rb.quality_utt)[0]) < 1e-9);
  CHECK(std::abs(ga.val(ra.intel_utt)[0] - gb.val(rb.intel_utt)[0]) < 1e-9);
  for (int t = 0; t < 9; ++t) {
    CHECK(std::abs(ga.val(ra.quality_frames).at(t, 0) -
                   gb.val(rb.quality_frames).at(t, 0)) < 1e-9);
    CHECK(std::abs(ga.val(ra.intel_frames).at(t, 0) -
                   gb.val(rb.intel_frames).at(t, 0)) < 1e-9);
  }
}

TEST_CASE("model: trunk shapes match across modalities") {
  Rng rng = Rng::substream(2026, {51});
  const ModelConfig mm = small_cfg(Modality::kMultimodal, Tasks::kMultiTask);
  const ModelConfig ao = small_cfg(Modality::kAudioOnly, Tasks::kMultiTask);
  CHECK(mm.fused_width() == ao.fused_width());
  CHECK(mm.d_h() == ao.d_h());

  SampleInput in = make_sample(mm, 7, 7, 5, 5, rng);
  SampleInput audio_in;
  audio_in.features = in.features;
  audio_in.valid_t = in.valid_t;

  Network mnet(mm), anet(ao);
  nn::ParamStore mstore(14), astore(14);
  mnet.register_params(&mstore);
  anet.register_params(&astore);

  nn::Graph gm, ga;
  nn::Binder bm(&gm, &mstore), ba(&ga, &astore);
  const auto rm = mnet.forward(gm, bm, in, false, nullptr, nullptr, nullptr);
  const auto ra = anet.forward(ga, ba, audio_in, false, nullptr, nullptr,
                               nullptr);

  CHECK(gm.val(rm.quality_frames).shape == ga.val(ra.quality_frames).shape);
  CHECK(gm.val(rm.intel_frames).shape == ga.val(ra.intel_frames).shape);
  CHECK(gm.val(rm.quality_attn).shape == ga.val(ra.quality_attn).shape);
  CHECK(gm.val(rm.quality_utt).shape == ga.val(ra.quality_utt).shape);

  // Forward without video in multimodal mode is rejected.
  nn::Graph g2;
  nn::Binder b2(&g2, &mstore);
  CHECK(error_message([&] {
          mnet.forward(g2, b2, audio_in, false, nullptr, nullptr, nullptr);
        }).find("needs video") != std::string::npos);
}

TEST_CASE("model: forward determinism with and without dropout") {
  Rng rng = Rng::substream(2026, {52});
  const ModelConfig cfg = small_cfg(Modality::kMultimodal, Tasks::kMultiTask);
  Network net(cfg);
  nn::ParamStore store(15);
  net.register_params(&store);
  SampleInput in = make_sample(cfg, 8, 7, 6, 6, rng);

  // Training off: bit-identical outputs on repeat runs.
  nn::Graph ga, gb;
  nn::Binder ba(&ga, &store), bb(&gb, &store);
  const auto r1 = net.forward(ga, ba, in, false, nullptr, nullptr, nullptr);
  const auto r2 = net.forward(gb, bb, in, false, nullptr, nullptr, nullptr);
  CHECK(ga.val(r1.quality_utt)[0] == gb.val(r2.quality_utt)[0]);
  CHECK(ga.val(r1.intel_utt)[0] == gb.val(r2.intel_utt)[0]);
  CHECK(bitwise_equal(ga.val(r1.quality_frames), gb.val(r2.quality_frames)));

  // Training on: identical dropout streams give identical outputs, and the
  // dropout mask demonstrably acts.
  Rng d1 = Rng::substream(99, {1}), d2 = Rng::substream(99, {1});
  Rng d3 = Rng::substream(99, {2});
  nn::Graph gc, gd, ge;
  nn::Binder bc(&gc, &store), bd(&gd, &store), be(&ge, &store);
  const auto r3 = net.forward(gc, bc, in, true, &d1, nullptr, nullptr);
  const auto r4 = net.forward(gd, bd, in, true, &d2, nullptr, nullptr);
  const auto r5 = net.forward(ge, be, in, true, &d3, nullptr, nullptr);
  CHECK(gc.val(r3.quality_utt)[0] == gd.val(r4.quality_utt)[0]);
  CHECK(gc.val(r3.quality_utt)[0] != ge.val(r5.quality_utt)[0]);
}

// ---------------------------------------------------------------------------
// Composed gradient check: every learnable parameter of a 1/8-width
// multimodal multi-task model against central finite differences.

TEST_CASE("model: every parameter passes the composed gradient check") {
  Rng rng = Rng::substream(2026, {53});
  const ModelConfig cfg = small_cfg(Modality::kMultimodal, Tasks::kMultiTask);
  Network net(cfg);
  nn::ParamStore store(16);
  net.register_params(&store);

  const SampleInput in = make_sample(cfg, 9, 8, 6, 5, rng);
  const double q_truth = 3.2, i_truth = 0.8;

  const auto run = [&]() {
    nn::Graph g;
    nn::Binder bind(&g, &store);
    const auto r = net.forward(g, bind, in, false, nullptr, &q_truth, &i_truth);
    return std::pair<double, int>(g.val(r.loss)[0], r.loss);
  };

  // Analytic gradients.
  {
    nn::Graph g;
    nn::Binder bind(&g, &store);
    const auto r = net.forward(g, bind, in, false, nullptr, &q_truth, &i_truth);
    g.backward(r.loss);
    bind.harvest();
  }

  Rng pick = Rng::substream(2026, {54});
  const auto report = nn::fd_check_store(
      store, [&]() { return run().first; }, pick, 2);
  INFO("worst: " << report.worst << " analytic " << report.worst_analytic
                 << " numeric " << report.worst_numeric << " rel "
                 << report.max_rel << " over " << report.checked);
  CHECK(report.checked > 0);
  CHECK(report.ok());
}

// ---------------------------------------------------------------------------
// Checkpoints.

TEST_CASE("model: checkpoint round trip is bit-identical") {
  const ModelConfig cfg = small_cfg(Modality::kMultimodal, Tasks::kMultiTask);
  Network net(cfg);
  nn::ParamStore store(17);
  net.register_params(&store);

  model::Checkpoint ck;
  ck.seed = 42;
  ck.epoch = 7;
  ck.config = {{"width_multiplier", 0.125}, {"modality", "multimodal"}};
  model::append_store_arrays(store, &ck);
  REQUIRE(ck.arrays.size() == store.names().size());

  const std::string path = temp_path("avsqa_test_ckpt.bin");
  model::save_checkpoint(path, ck);
  const model::Checkpoint back = model::load_checkpoint(path);

  CHECK(back.seed == 42);
  CHECK(back.epoch == 7);
  CHECK(back.config == ck.config);
  REQUIRE(back.arrays.size() == ck.arrays.size());
  for (size_t i = 0; i < ck.arrays.size(); ++i) {
    CHECK(back.arrays[i].first == ck.arrays[i].first);
    CHECK(bitwise_equal(back.arrays[i].second, ck.arrays[i].second));
  }

  // Restoring into a differently-initialized twin reproduces every value.
  nn::ParamStore other(99);
  net.register_params(&other);
  CHECK_FALSE(bitwise_equal(other.value("dense.w"), store.value("dense.w")));
  model::restore_store_arrays(back, &other);
  for (const std::string& name : store.names())
    CHECK(bitwise_equal(other.value(name), store.value(name)));

  CHECK(back.find("dense.w") != nullptr);
  CHECK(back.find("no.such.array") == nullptr);
  std::filesystem::remove(path);
}

TEST_CASE("model: checkpoint rejects malformed files") {
  const ModelConfig cfg = small_cfg(Modality::kAudioOnly, Tasks::kQualityOnly);
  Network net(cfg);
  nn::ParamStore store(18);
  net.register_params(&store);
  model::Checkpoint ck;
  ck.seed = 1;
  ck.epoch = 0;
  model::append_store_arrays(store, &ck);
  const std::string path = temp_path("avsqa_test_ckpt_bad.bin");

  CHECK(error_message([&] { model::load_checkpoint(path + ".absent"); })
            .find("cannot open") != std::string::npos);

  {
    std::ofstream os(path, std::ios::binary);
    os << "RIFF not a checkpoint";
  }
  CHECK(error_message([&] { model::load_checkpoint(path); })
            .find("not a AVSQA-CKPT-1") != std::string::npos);

  model::save_checkpoint(path, ck);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 9);
  CHECK(error_message([&] { model::load_checkpoint(path); })
            .find("truncated") != std::string::npos);

  // Restore with a missing parameter and with a reshaped one.
  model::Checkpoint missing = ck;
  missing.arrays.pop_back();
  CHECK(error_message([&] { model::restore_store_arrays(missing, &store); })
            .find("missing parameter") != std::string::npos);

  model::Checkpoint reshaped = ck;
  reshaped.arrays[0].second = nn::Tensor({1, 2, 3});
  CHECK(error_message([&] { model::restore_store_arrays(reshaped, &store); })
            .find("shape mismatch") != std::string::npos);

  std::filesystem::remove(path);
}
