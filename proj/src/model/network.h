// model/network.h

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

#ifndef AVSQA_MODEL_NETWORK_H_
#define AVSQA_MODEL_NETWORK_H_

#include <string>
#include <utility>

#include "common/rng.h"
#include "model/config.h"
#include "nn/graph.h"
#include "nn/ops.h"
#include "nn/params.h"
#include "nn/tensor.h"

namespace avsqa {
namespace model {

// One utterance as the trainer presents it: padded feature matrices plus the
// valid lengths. `video` may be empty in audio-only mode.
struct SampleInput {
  nn::Tensor features;  // [T_pad, F] log-compressed magnitude spectrogram
  int valid_t = 0;
  nn::Tensor video;     // [M_pad, 88, 88], grayscale in [0,1]
  int valid_m = 0;
};

// Graph handles produced by one forward pass. Handles are -1 when the
// corresponding task head is inactive or no labels were supplied.
struct ForwardResult {
  int quality_utt = -1;     // [1]
  int intel_utt = -1;       // [1]
  int quality_frames = -1;  // [T_pad, 1]; rows >= valid_t meaningless
  int intel_frames = -1;
  int quality_attn = -1;    // [T_pad, T_pad]; leading valid block stochastic
  int intel_attn = -1;
  int loss = -1;            // scalar total loss
};

// The dual-branch assessment network: visual encoder -> temporal alignment ->
// fusion with the spectrogram -> convolutional-recurrent trunk -> per-task
// attention heads -> frame scores -> utterance pooling and composite loss.
// Stateless apart from the config; parameters live in a ParamStore and are
// bound into a fresh Graph per forward pass.
class Network {
 public:
  explicit Network(ModelConfig cfg);

  const ModelConfig& config() const { return cfg_; }

  // Creates every learnable tensor for this configuration.
  void register_params(nn::ParamStore* store) const;

  // [M,88,88] video handle -> [M, d_v] embedding handle.
  int visual_encode(nn::Graph& g, nn::Binder& bind, int video) const;

  // [M, d_v] -> [t, d_v] by linear interpolation along time.
  int upsample_time(nn::Graph& g, int emb, int t) const;

  // [T,F] spectrogram handle + [T, d_v] visual handle -> [T, F+d_v].
  // Pass vis = -1 for the audio-only zero block.
  int fuse(nn::Graph& g, int spec, int vis) const;

  // [T_pad, F+d_v] -> [T_pad, d_h]; rows >= valid_t are zero.
  // `dropout_rng` must be non-null when training and dropout > 0.
  int crnn_forward(nn::Graph& g, nn::Binder& bind, int fused, int valid_t,
                   bool training, Rng* dropout_rng) const;

  // Self-attention for one head ("q" or "i"): returns (context, weights).
  std::pair<int, int> attend(nn::Graph& g, nn::Binder& bind, int h,
                             int valid_t, const std::string& head) const;

  // [T_pad, d_h] context -> [T_pad, 1] frame scores for one head.
  int frame_scores(nn::Graph& g, nn::Binder& bind, int ctx,
                   const std::string& head) const;

  // Mean of the first `valid` frame scores -> [1].
  static int pool_utterance(nn::Graph& g, int frames, int valid);

  // (truth - utt)^2 + alpha * mean over valid frames of (truth - frame)^2.
  static int loss_task(nn::Graph& g, int utt, int frames, int valid,
                       double truth, double alpha);

  // beta*l_quality + gamma*l_intelligibility over the active heads.
  int loss_total(nn::Graph& g, int l_quality, int l_intel) const;

  // Full forward. Labels are attached (and `loss` produced) only when the
  // truth pointers are non-null.
  ForwardResult forward(nn::Graph& g, nn::Binder& bind, const SampleInput& in,
                        bool training, Rng* dropout_rng,
                        const double* quality_truth,
                        const double* intel_truth) const;

 private:
  int resnet_block(nn::Graph& g, nn::Binder& bind, int x,
                   const std::string& prefix, int in_ch, int out_ch,
                   int stride) const;

  ModelConfig cfg_;
};

}  // namespace model
}  // namespace avsqa

#endif  // AVSQA_MODEL_NETWORK_H_
