// model/network.cc

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

#include "model/network.h"

#include <cmath>

#include "common/error.h"

namespace avsqa {
namespace model {

namespace {

std::string block_name(const std::string& stem, int a, int b) {
  return stem + std::to_string(a) + ".l" + std::to_string(b);
}

}  // namespace

Network::Network(ModelConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void Network::register_params(nn::ParamStore* store) const {
  const int kf = cfg_.scaled(ModelConfig::kVisualFrontChannels);
  store->create("vis.front.w", {kf, 1, 5, 7, 7}, nn::Init::kFanInUniform,
                5 * 7 * 7);
  store->create("vis.front.gamma", {kf}, nn::Init::kOne);
  store->create("vis.front.beta", {kf}, nn::Init::kZero);
  int in_ch = kf;
  for (int s = 0; s < 4; ++s) {
    const int out_ch = cfg_.scaled(ModelConfig::kResnetChannels[s]);
    for (int b = 0; b < 2; ++b) {
      const std::string p =
          "vis.s" + std::to_string(s + 1) + ".b" + std::to_string(b) + ".";
      const int block_in = b == 0 ? in_ch : out_ch;
      const int stride = (s > 0 && b == 0) ? 2 : 1;
      store->create(p + "conv1.w", {out_ch, block_in, 3, 3},
                    nn::Init::kFanInUniform, block_in * 9);
      store->create(p + "norm1.gamma", {out_ch}, nn::Init::kOne);
      store->create(p + "norm1.beta", {out_ch}, nn::Init::kZero);
      store->create(p + "conv2.w", {out_ch, out_ch, 3, 3},
                    nn::Init::kFanInUniform, out_ch * 9);
      store->create(p + "norm2.gamma", {out_ch}, nn::Init::kOne);
      store->create(p + "norm2.beta", {out_ch}, nn::Init::kZero);
      if (stride != 1 || block_in != out_ch) {
        store->create(p + "down.w", {out_ch, block_in, 1, 1},
                      nn::Init::kFanInUniform, block_in);
        store->create(p + "down.gamma", {out_ch}, nn::Init::kOne);
        store->create(p + "down.beta", {out_ch}, nn::Init::kZero);
      }
    }
    in_ch = out_ch;
  }

  int prev = 1;
  for (int k = 0; k < 4; ++k) {
    const int ch = cfg_.scaled(ModelConfig::kConvChannels[k]);
    for (int l = 0; l < ModelConfig::kConvLayersPerBlock; ++l) {
      const std::string p = block_name("crnn.b", k + 1, l + 1);
      const int cin = l == 0 ? prev : ch;
      // No normalization in this stack, so the rectifier gain is load-bearing:
      // with the plain 1/sqrt(fan_in) bound, twelve layers shrink activations
      // by ~0.54 each and the trunk output collapses to ~1e-6.
      store->create(p + ".w", {ch, cin, 3, 3}, nn::Init::kReluUniform, cin * 9);
      store->create(p + ".b", {ch}, nn::Init::kZero);
    }
    prev = ch;
  }

  // Feature width after four stride-2 halvings of the fused axis.
  int df = cfg_.fused_width();
  for (int k = 0; k < 4; ++k) df = (df - 1) / 2 + 1;
  const int flat = prev * df;
  const int hh = cfg_.lstm_hidden();
  for (const char* dir : {"fw", "bw"}) {
    const std::string p = std::string("blstm.") + dir + ".";
    store->create(p + "wx", {4 * hh, flat}, nn::Init::kFanInUniform, flat);
    store->create(p + "wh", {4 * hh, hh}, nn::Init::kOrthogonalGates);
    store->create(p + "b", {4 * hh}, nn::Init::kLstmBias);
  }
  const int dh = cfg_.d_h();
  store->create("dense.w", {dh, 2 * hh}, nn::Init::kReluUniform, 2 * hh);
  store->create("dense.b", {dh}, nn::Init::kZero);

  const auto head = [&](const std::string& h) {
    store->create("head." + h + ".wq", {dh, dh}, nn::Init::kFanInUniform, dh);
    store->create("head." + h + ".wk", {dh, dh}, nn::Init::kFanInUniform, dh);
    store->create("head." + h + ".wv", {dh, dh}, nn::Init::kFanInUniform, dh);
    store->create("head." + h + ".score.w", {1, dh}, nn::Init::kFanInUniform,
                  dh);
    store->create("head." + h + ".score.b", {1}, nn::Init::kZero);
  };
  if (cfg_.quality_active()) head("q");
  if (cfg_.intel_active()) head("i");
}

int Network::resnet_block(nn::Graph& g, nn::Binder& bind, int x,
                          const std::string& prefix, int in_ch, int out_ch,
                          int stride) const {
  int y = nn::conv2d(g, x, bind(prefix + "conv1.w"), -1, stride, stride, 1, 1);
  y = nn::channel_norm2d(g, y, bind(prefix + "norm1.gamma"),
                         bind(prefix + "norm1.beta"));
  y = nn::relu(g, y);
  y = nn::conv2d(g, y, bind(prefix + "conv2.w"), -1, 1, 1, 1, 1);
  y = nn::channel_norm2d(g, y, bind(prefix + "norm2.gamma"),
                         bind(prefix + "norm2.beta"));
  int shortcut = x;
  if (stride != 1 || in_ch != out_ch) {
    shortcut = nn::conv2d(g, x, bind(prefix + "down.w"), -1, stride, stride, 0, 0);
    shortcut = nn::channel_norm2d(g, shortcut, bind(prefix + "down.gamma"),
                                  bind(prefix + "down.beta"));
  }
  return nn::relu(g, nn::add(g, y, shortcut));
}

int Network::visual_encode(nn::Graph& g, nn::Binder& bind, int video) const {
  const nn::Tensor& v = g.val(video);
  require(v.ndim() == 3, "video format: expected M x ", ModelConfig::kLipSize,
          " x ", ModelConfig::kLipSize, " grayscale frames, got ",
          v.shape_str());
  require(v.dim(1) == ModelConfig::kLipSize && v.dim(2) == ModelConfig::kLipSize,
          "video format: expected ", ModelConfig::kLipSize, "x",
          ModelConfig::kLipSize, " frames, got ", v.shape_str());
  const int m = v.dim(0);
  require(m >= 1, "video format: need at least one frame");

  // [M,88,88] -> [1,M,88,88]; symmetric temporal padding keeps a constant
  // clip constant through the 5-frame temporal kernel.
  int x = nn::reshape(g, video, {1, m, ModelConfig::kLipSize,
                                 ModelConfig::kLipSize});
  x = nn::pad_time_symmetric(g, x, 2);
  x = nn::conv3d(g, x, bind("vis.front.w"), -1, {1, 2, 2}, {0, 3, 3});
  x = nn::channel_norm3d_masked(g, x, bind("vis.front.gamma"),
                                bind("vis.front.beta"), m);
  x = nn::relu(g, x);
  x = nn::time_to_batch(g, x);           // [M, Kf, 44, 44]
  x = nn::maxpool2d(g, x, 3, 2, 1);      // [M, Kf, 22, 22]

  int in_ch = cfg_.scaled(ModelConfig::kVisualFrontChannels);
  for (int s = 0; s < 4; ++s) {
    const int out_ch = cfg_.scaled(ModelConfig::kResnetChannels[s]);
    for (int b = 0; b < 2; ++b) {
      const std::string p =
          "vis.s" + std::to_string(s + 1) + ".b" + std::to_string(b) + ".";
      const int stride = (s > 0 && b == 0) ? 2 : 1;
      x = resnet_block(g, bind, x, p, b == 0 ? in_ch : out_ch, out_ch, stride);
    }
    in_ch = out_ch;
  }
  return nn::global_avg_pool2d(g, x);  // [M, d_v]
}

int Network::upsample_time(nn::Graph& g, int emb, int t) const {
  return nn::upsample_rows_linear(g, emb, t);
}

int Network::fuse(nn::Graph& g, int spec, int vis) const {
  // Copy the dims out before adding nodes: growing the tape invalidates
  // references into it.
  const std::vector<int> sshape = g.val(spec).shape;
  require(sshape.size() == 2 && sshape[1] == ModelConfig::kFreqBins,
          "fuse: spectrogram must be T x ", ModelConfig::kFreqBins, ", got ",
          g.val(spec).shape_str());
  const int t = sshape[0];
  if (vis < 0) vis = nn::constant(g, nn::Tensor({t, cfg_.d_v()}));
  const std::vector<int> vshape = g.val(vis).shape;
  require(vshape.size() == 2 && vshape[1] == cfg_.d_v(),
          "fuse: visual block must be T x ", cfg_.d_v(), ", got ",
          g.val(vis).shape_str());
  require(vshape[0] == t, "fuse: time mismatch, audio T = ", t,
          " vs visual T = ", vshape[0]);
  return nn::concat_cols(g, spec, vis);
}

int Network::crnn_forward(nn::Graph& g, nn::Binder& bind, int fused,
                          int valid_t, bool training, Rng* dropout_rng) const {
  const nn::Tensor& f = g.val(fused);
  require(f.ndim() == 2 && f.dim(1) == cfg_.fused_width(),
          "crnn: fused input must be T x ", cfg_.fused_width(), ", got ",
          f.shape_str());
  const int t_pad = f.dim(0);
  require(valid_t >= 1 && valid_t <= t_pad, "crnn: valid_t ", valid_t,
          " out of range for T = ", t_pad);

  // Feature axis is the image height, time the width; time is never strided.
  int x = nn::rows_to_image(g, fused);  // [1, 1, D, T]
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < ModelConfig::kConvLayersPerBlock; ++l) {
      const std::string p = block_name("crnn.b", k + 1, l + 1);
      const int stride_f = l == ModelConfig::kConvLayersPerBlock - 1 ? 2 : 1;
      x = nn::conv2d(g, x, bind(p + ".w"), bind(p + ".b"), stride_f, 1, 1, 1);
      // Bias would otherwise leak into the padded frames and, through the
      // next layer's kernel, back into the last valid frames.
      x = nn::mask_time_cols(g, x, valid_t);
      x = nn::relu(g, x);
    }
  }
  int rows = nn::image_to_rows(g, x);  // [T, C4 * D4]

  const int fw = nn::lstm_dir(g, rows, bind("blstm.fw.wx"), bind("blstm.fw.wh"),
                              bind("blstm.fw.b"), valid_t, false);
  const int bw = nn::lstm_dir(g, rows, bind("blstm.bw.wx"), bind("blstm.bw.wh"),
                              bind("blstm.bw.b"), valid_t, true);
  int h = nn::concat_cols(g, fw, bw);
  h = nn::add_row_bias(g, nn::matmul_nt(g, h, bind("dense.w")),
                       bind("dense.b"));
  h = nn::relu(g, h);
  h = nn::mask_rows(g, h, valid_t);
  if (training && cfg_.dropout > 0.0) {
    require(dropout_rng != nullptr, "crnn: dropout requires an rng when training");
    const double keep = 1.0 - cfg_.dropout;
    nn::Tensor mask(g.val(h).shape);
    for (double& mv : mask.data)
      mv = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
    h = nn::mul(g, h, nn::constant(g, std::move(mask)));
  }
  return h;
}

std::pair<int, int> Network::attend(nn::Graph& g, nn::Binder& bind, int h,
                                    int valid_t, const std::string& head) const {
  const std::string p = "head." + head + ".";
  const int q = nn::matmul_nt(g, h, bind(p + "wq"));
  const int k = nn::matmul_nt(g, h, bind(p + "wk"));
  const int v = nn::matmul_nt(g, h, bind(p + "wv"));
  const int scores =
      nn::scale(g, nn::matmul_nt(g, q, k), 1.0 / std::sqrt(cfg_.d_h()));
  const int attn = nn::softmax_rows_masked(g, scores, valid_t);
  return {nn::matmul(g, attn, v), attn};
}

int Network::frame_scores(nn::Graph& g, nn::Binder& bind, int ctx,
                          const std::string& head) const {
  const std::string p = "head." + head + ".score.";
  return nn::add_row_bias(g, nn::matmul_nt(g, ctx, bind(p + "w")),
                          bind(p + "b"));
}

int Network::pool_utterance(nn::Graph& g, int frames, int valid) {
  return nn::mean_rows_masked(g, frames, valid);
}

int Network::loss_task(nn::Graph& g, int utt, int frames, int valid,
                       double truth, double alpha) {
  nn::Tensor tu({1});
  tu[0] = truth;
  const int du = nn::sub(g, nn::constant(g, std::move(tu)), utt);
  int loss = nn::mul(g, du, du);
  nn::Tensor tf(g.val(frames).shape);
  for (double& v : tf.data) v = truth;
  const int df = nn::sub(g, nn::constant(g, std::move(tf)), frames);
  const int mf = nn::mean_rows_masked(g, nn::mul(g, df, df), valid);
  return nn::add(g, loss, nn::scale(g, mf, alpha));
}

int Network::loss_total(nn::Graph& g, int l_quality, int l_intel) const {
  if (l_quality >= 0 && l_intel >= 0)
    return nn::add(g, nn::scale(g, l_quality, cfg_.beta),
                   nn::scale(g, l_intel, cfg_.gamma));
  if (l_quality >= 0) return nn::scale(g, l_quality, cfg_.beta);
  require(l_intel >= 0, "loss_total: no task losses supplied");
  return nn::scale(g, l_intel, cfg_.gamma);
}

ForwardResult Network::forward(nn::Graph& g, nn::Binder& bind,
                               const SampleInput& in, bool training,
                               Rng* dropout_rng, const double* quality_truth,
                               const double* intel_truth) const {
  require(in.features.ndim() == 2, "forward: features must be 2-D");
  const int t_pad = in.features.dim(0);
  require(in.valid_t >= 1 && in.valid_t <= t_pad,
          "forward: valid_t out of range");
  const int spec = nn::constant(g, in.features);

  int vis = -1;
  if (cfg_.modality == Modality::kMultimodal) {
    require(in.video.numel() > 0 && in.valid_m >= 1,
            "forward: multimodal model needs video frames");
    // Only the valid frames enter the graph; temporal padding of the batch
    // never reaches the visual branch.
    nn::Tensor valid_video({in.valid_m, ModelConfig::kLipSize,
                            ModelConfig::kLipSize});
    require(in.video.ndim() == 3 && in.video.dim(0) >= in.valid_m &&
                in.video.dim(1) == ModelConfig::kLipSize &&
                in.video.dim(2) == ModelConfig::kLipSize,
            "video format: expected M x 88 x 88, got ", in.video.shape_str());
    std::copy(in.video.data.begin(),
              in.video.data.begin() + valid_video.data.size(),
              valid_video.data.begin());
    const int emb = visual_encode(g, bind, nn::constant(g, std::move(valid_video)));
    const int up = upsample_time(g, emb, in.valid_t);
    vis = nn::pad_rows(g, up, t_pad);
  }

  const int fused = fuse(g, spec, vis);
  const int trunk = crnn_forward(g, bind, fused, in.valid_t, training,
                                 dropout_rng);

  ForwardResult r;
  int lq = -1, li = -1;
  if (cfg_.quality_active()) {
    auto [ctx, attn] = attend(g, bind, trunk, in.valid_t, "q");
    r.quality_attn = attn;
    r.quality_frames = frame_scores(g, bind, ctx, "q");
    r.quality_utt = pool_utterance(g, r.quality_frames, in.valid_t);
    if (quality_truth)
      lq = loss_task(g, r.quality_utt, r.quality_frames, in.valid_t,
                     *quality_truth, cfg_.alpha_q);
  }
  if (cfg_.intel_active()) {
    auto [ctx, attn] = attend(g, bind, trunk, in.valid_t, "i");
    r.intel_attn = attn;
    r.intel_frames = frame_scores(g, bind, ctx, "i");
    r.intel_utt = pool_utterance(g, r.intel_frames, in.valid_t);
    if (intel_truth)
      li = loss_task(g, r.intel_utt, r.intel_frames, in.valid_t, *intel_truth,
                     cfg_.alpha_i);
  }
  if (lq >= 0 || li >= 0) r.loss = loss_total(g, lq, li);
  return r;
}

}  // namespace model
}  // namespace avsqa
