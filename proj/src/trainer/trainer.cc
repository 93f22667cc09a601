// trainer/trainer.cc

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

#include "trainer/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "common/error.h"
#include "common/rng.h"
#include "common/wav_io.h"
#include "datagen/video.h"
#include "nn/graph.h"
#include "trainer/features.h"

namespace avsqa {
namespace trainer {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

// Substream path tags: batch order and dropout masks per epoch.
enum Tag : uint64_t {
  kTagBatchOrder = 0x62,
  kTagDropout = 0x72,
};

struct AdamState {
  int64_t step = 0;
  std::vector<nn::Tensor> m, v;  // aligned with store creation order

  explicit AdamState(const nn::ParamStore& store) {
    for (const auto& name : store.names()) {
      m.emplace_back(store.value(name).shape);
      v.emplace_back(store.value(name).shape);
    }
  }
};

// One Adam update from the store's accumulated gradients, with global-norm
// clipping applied to the whole gradient vector first.
void adam_step(nn::ParamStore* store, AdamState* st, double lr, double clip) {
  double sq = 0.0;
  for (const auto& name : store->names())
    for (double g : store->grad(name).data) sq += g * g;
  const double norm = std::sqrt(sq);
  const double scale = (clip > 0.0 && norm > clip) ? clip / norm : 1.0;

  st->step += 1;
  const double b1c = 1.0 - std::pow(kBeta1, static_cast<double>(st->step));
  const double b2c = 1.0 - std::pow(kBeta2, static_cast<double>(st->step));
  const auto& names = store->names();
  for (size_t pi = 0; pi < names.size(); ++pi) {
    nn::Tensor& value = store->value(names[pi]);
    const nn::Tensor& grad = store->grad(names[pi]);
    nn::Tensor& m = st->m[pi];
    nn::Tensor& v = st->v[pi];
    for (size_t i = 0; i < value.data.size(); ++i) {
      const double g = grad[i] * scale;
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
      value[i] -= lr * (m[i] / b1c) / (std::sqrt(v[i] / b2c) + kEps);
    }
  }
}

double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Runs one utterance through the network; labels attach per active head.
model::ForwardResult run_sample(const model::Network& net,
                                nn::ParamStore* store, nn::Graph* g,
                                nn::Binder* bind, const CachedSample& cs,
                                int t_pad, int m_pad, bool training,
                                Rng* dropout_rng, const double* quality,
                                const double* intel) {
  const model::SampleInput in =
      assemble_input(*cs.features, cs.video, t_pad, m_pad);
  const double* q = net.config().quality_active() ? quality : nullptr;
  const double* i = net.config().intel_active() ? intel : nullptr;
  return net.forward(*g, *bind, in, training, dropout_rng, q, i);
}

// Mean validation total loss with dropout off.
double validation_loss(const model::Network& net, nn::ParamStore* store,
                       SampleCache* cache,
                       const std::vector<const datagen::UtteranceRecord*>& recs) {
  double sum = 0.0;
  for (const datagen::UtteranceRecord* r : recs) {
    const CachedSample cs = cache->get(*r);
    nn::Graph g;
    nn::Binder bind(&g, store);
    const model::ForwardResult fr = run_sample(
        net, store, &g, &bind, cs, cs.features->dim(0),
        cs.video != nullptr ? cs.video->dim(0) : 0, false, nullptr,
        &r->labels.quality, &r->labels.intelligibility);
    sum += g.val(fr.loss)[0];
  }
  return sum / static_cast<double>(recs.size());
}

model::Checkpoint snapshot(const model::Network& net,
                           const nn::ParamStore& store, const AdamState& adam,
                           const TrainConfig& tc, int epoch, double val_loss) {
  model::Checkpoint ck;
  ck.seed = tc.seed;
  ck.epoch = epoch;
  ck.config["model"] = model_config_to_json(net.config());
  ck.config["train"] = train_config_to_json(tc);
  ck.config["best_val_loss"] = val_loss;
  ck.config["adam_step"] = adam.step;
  model::append_store_arrays(store, &ck);
  const auto& names = store.names();
  for (size_t i = 0; i < names.size(); ++i) {
    ck.arrays.emplace_back("adam.m/" + names[i], adam.m[i]);
    ck.arrays.emplace_back("adam.v/" + names[i], adam.v[i]);
  }
  return ck;
}

}  // namespace

void TrainConfig::validate() const {
  require(learning_rate > 0.0, "train config: learning_rate must be > 0");
  require(max_epochs >= 1, "train config: max_epochs must be >= 1");
  require(plateau_factor > 0.0 && plateau_factor < 1.0,
          "train config: plateau_factor must lie in (0, 1)");
  require(plateau_patience >= 1, "train config: plateau_patience must be >= 1");
  require(early_stop_patience >= 1,
          "train config: early_stop_patience must be >= 1");
  require(batch_size >= 1, "train config: batch_size must be >= 1");
}

double scheduled_lr(double base_lr, const std::vector<double>& val_history,
                    int patience, double factor) {
  double lr = base_lr;
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (double v : val_history) {
    if (v < best) {
      best = v;
      stall = 0;
    } else if (++stall >= patience) {
      lr *= factor;
      stall = 0;
    }
  }
  return lr;
}

TrainResult train(const model::ModelConfig& mc, const TrainConfig& tc,
                  const std::vector<datagen::UtteranceRecord>& records,
                  const std::string& corpus_dir) {
  mc.validate();
  tc.validate();

  std::vector<const datagen::UtteranceRecord*> train_recs, val_recs;
  for (const auto& r : records) {
    if (r.split == datagen::Split::kTrain) train_recs.push_back(&r);
    if (r.split == datagen::Split::kValidation) val_recs.push_back(&r);
  }
  require(!train_recs.empty(), "trainer: manifest has no train records");
  require(!val_recs.empty(), "trainer: manifest has no validation records");

  const model::Network net(mc);
  nn::ParamStore store(tc.seed);
  net.register_params(&store);
  AdamState adam(store);
  SampleCache cache(corpus_dir, mc.modality);

  TrainResult res;
  res.best_val_loss = std::numeric_limits<double>::infinity();
  std::vector<double> val_history;
  int stall = 0;

  for (int epoch = 1; epoch <= tc.max_epochs; ++epoch) {
    const double lr = scheduled_lr(tc.learning_rate, val_history,
                                   tc.plateau_patience, tc.plateau_factor);

    std::vector<size_t> order(train_recs.size());
    std::iota(order.begin(), order.end(), size_t{0});
    Rng shuffle_rng = Rng::substream(
        tc.seed, {kTagBatchOrder, static_cast<uint64_t>(epoch)});
    shuffle_rng.shuffle(order);
    Rng dropout_rng =
        Rng::substream(tc.seed, {kTagDropout, static_cast<uint64_t>(epoch)});

    double loss_sum = 0.0;
    for (size_t b0 = 0; b0 < order.size(); b0 += static_cast<size_t>(tc.batch_size)) {
      const size_t bn =
          std::min(static_cast<size_t>(tc.batch_size), order.size() - b0);
      // Pad every sample of the batch to the batch-wide maxima; the network
      // masks the suffix rows out of convolutions, attention, and pooling.
      int t_pad = 0, m_pad = 0;
      for (size_t k = 0; k < bn; ++k) {
        const CachedSample cs = cache.get(*train_recs[order[b0 + k]]);
        t_pad = std::max(t_pad, cs.features->dim(0));
        if (cs.video != nullptr) m_pad = std::max(m_pad, cs.video->dim(0));
      }

      store.zero_grads();
      double batch_sum = 0.0;
      for (size_t k = 0; k < bn; ++k) {
        const datagen::UtteranceRecord& rec = *train_recs[order[b0 + k]];
        const CachedSample cs = cache.get(rec);
        nn::Graph g;
        nn::Binder bind(&g, &store);
        const model::ForwardResult fr = run_sample(
            net, &store, &g, &bind, cs, t_pad, m_pad, true, &dropout_rng,
            &rec.labels.quality, &rec.labels.intelligibility);
        const double loss = g.val(fr.loss)[0];
        require(std::isfinite(loss),
                "trainer: divergence, non-finite training loss at epoch ",
                epoch, ", step ", res.optimizer_steps + 1, " (", rec.utterance_id,
                ")");
        batch_sum += loss;
        // Seeding 1/bn accumulates the batch-mean gradient directly.
        g.backward(fr.loss, 1.0 / static_cast<double>(bn));
        bind.harvest();
      }
      adam_step(&store, &adam, lr, tc.grad_clip_norm);
      res.optimizer_steps += 1;
      loss_sum += batch_sum;
    }
    const double train_loss = loss_sum / static_cast<double>(order.size());

    const double val_loss = validation_loss(net, &store, &cache, val_recs);
    require(std::isfinite(val_loss),
            "trainer: divergence, non-finite validation loss at epoch ", epoch);

    res.metrics.push_back(EpochRow{epoch, train_loss, val_loss, lr});
    val_history.push_back(val_loss);

    if (val_loss < res.best_val_loss) {
      res.best_val_loss = val_loss;
      res.best_epoch = epoch;
      res.best = snapshot(net, store, adam, tc, epoch, val_loss);
      stall = 0;
    } else if (++stall >= tc.early_stop_patience) {
      res.early_stopped = true;
      break;
    }
  }
  return res;
}

std::vector<EvalCell> cells_from_rows(const std::string& task,
                                      const std::vector<PredRow>& rows) {
  std::vector<EvalCell> cells;
  for (const datagen::Condition cond :
       {datagen::Condition::kSeen, datagen::Condition::kUnseen}) {
    for (const char* source : {"noisy", "enhanced", "pooled"}) {
      EvalCell cell;
      cell.condition = datagen::to_string(cond);
      cell.source = source;
      cell.task = task;
      std::vector<double> pred, truth;
      for (const PredRow& r : rows) {
        if (r.condition != cond) continue;
        if (std::string(source) != "pooled" &&
            std::string(datagen::to_string(r.source)) != source)
          continue;
        pred.push_back(r.clamped);
        truth.push_back(r.truth);
      }
      cell.n = static_cast<int>(pred.size());
      const auto constant = [](const std::vector<double>& x) {
        return *std::max_element(x.begin(), x.end()) ==
               *std::min_element(x.begin(), x.end());
      };
      // eval_stats rejects degenerate cells; report them absent rather than
      // inventing a number.
      if (cell.n >= 2 && !constant(pred) && !constant(truth)) {
        cell.present = true;
        cell.stats = oracle::eval_stats(pred, truth);
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

EvalSummary evaluate(const model::Network& net, nn::ParamStore& store,
                     const std::vector<datagen::UtteranceRecord>& subset,
                     const std::string& corpus_dir) {
  SampleCache cache(corpus_dir, net.config().modality);
  EvalSummary summary;
  for (const auto& rec : subset) {
    const CachedSample cs = cache.get(rec);
    nn::Graph g;
    nn::Binder bind(&g, &store);
    const model::ForwardResult fr = run_sample(
        net, &store, &g, &bind, cs, cs.features->dim(0),
        cs.video != nullptr ? cs.video->dim(0) : 0, false, nullptr, nullptr,
        nullptr);
    if (net.config().quality_active()) {
      const double raw = g.val(fr.quality_utt)[0];
      summary.quality.push_back(PredRow{rec.utterance_id, rec.condition,
                                        rec.source, rec.labels.quality, raw,
                                        clamp(raw, kQualityMin, kQualityMax)});
    }
    if (net.config().intel_active()) {
      const double raw = g.val(fr.intel_utt)[0];
      summary.intelligibility.push_back(
          PredRow{rec.utterance_id, rec.condition, rec.source,
                  rec.labels.intelligibility, raw,
                  clamp(raw, kIntelMin, kIntelMax)});
    }
  }
  if (net.config().quality_active()) {
    const auto cells = cells_from_rows("quality", summary.quality);
    summary.cells.insert(summary.cells.end(), cells.begin(), cells.end());
  }
  if (net.config().intel_active()) {
    const auto cells =
        cells_from_rows("intelligibility", summary.intelligibility);
    summary.cells.insert(summary.cells.end(), cells.begin(), cells.end());
  }
  return summary;
}

Prediction predict(const model::Network& net, nn::ParamStore& store,
                   const std::string& wav_path,
                   const std::string& video_path) {
  const WavData w = read_wav(wav_path);
  const nn::Tensor feat = featurize(dsp::Waveform{w.samples, w.sample_rate});
  nn::Tensor video;
  const nn::Tensor* video_ptr = nullptr;
  if (net.config().modality == model::Modality::kMultimodal) {
    require(!video_path.empty(),
            "predict: modality mismatch, the multimodal network needs a ",
            "video for ", wav_path);
    video = video_to_tensor(datagen::read_video(video_path));
    video_ptr = &video;
  }

  const model::SampleInput in = assemble_input(
      feat, video_ptr, feat.dim(0),
      video_ptr != nullptr ? video_ptr->dim(0) : 0);
  nn::Graph g;
  nn::Binder bind(&g, &store);
  const model::ForwardResult fr =
      net.forward(g, bind, in, false, nullptr, nullptr, nullptr);

  const auto frame_column = [&](int h) {
    std::vector<double> out(static_cast<size_t>(in.valid_t));
    for (int t = 0; t < in.valid_t; ++t)
      out[static_cast<size_t>(t)] = g.val(h).at(t, 0);
    return out;
  };
  const auto attention_block = [&](int h) {
    nn::Tensor a({in.valid_t, in.valid_t});
    for (int r = 0; r < in.valid_t; ++r)
      for (int c = 0; c < in.valid_t; ++c) a.at(r, c) = g.val(h).at(r, c);
    return a;
  };

  Prediction p;
  if (net.config().quality_active()) {
    p.quality = g.val(fr.quality_utt)[0];
    p.quality_frames = frame_column(fr.quality_frames);
    p.quality_attention = attention_block(fr.quality_attn);
  }
  if (net.config().intel_active()) {
    p.intelligibility = g.val(fr.intel_utt)[0];
    p.intel_frames = frame_column(fr.intel_frames);
    p.intel_attention = attention_block(fr.intel_attn);
  }
  return p;
}

RestoredModel restore_model(const model::Checkpoint& ck) {
  require(ck.config.contains("model"),
          "checkpoint: missing the model config echo");
  RestoredModel rm{model_config_from_json(ck.config["model"]),
                   nn::ParamStore(ck.seed)};
  const model::Network net(rm.config);
  net.register_params(&rm.store);
  model::restore_store_arrays(ck, &rm.store);
  return rm;
}

nlohmann::json model_config_to_json(const model::ModelConfig& mc) {
  nlohmann::json j;
  j["width_multiplier"] = mc.width_multiplier;
  j["modality"] = model::modality_name(mc.modality);
  j["tasks"] = model::tasks_name(mc.tasks);
  j["alpha_q"] = mc.alpha_q;
  j["alpha_i"] = mc.alpha_i;
  j["beta"] = mc.beta;
  j["gamma"] = mc.gamma;
  j["dropout"] = mc.dropout;
  j["attention_heads"] = mc.attention_heads;
  return j;
}

model::ModelConfig model_config_from_json(const nlohmann::json& j) {
  model::ModelConfig mc;
  mc.width_multiplier = j.at("width_multiplier").get<double>();
  mc.modality = model::modality_from_name(j.at("modality").get<std::string>());
  mc.tasks = model::tasks_from_name(j.at("tasks").get<std::string>());
  mc.alpha_q = j.at("alpha_q").get<double>();
  mc.alpha_i = j.at("alpha_i").get<double>();
  mc.beta = j.at("beta").get<double>();
  mc.gamma = j.at("gamma").get<double>();
  mc.dropout = j.at("dropout").get<double>();
  mc.attention_heads = j.at("attention_heads").get<int>();
  return mc;
}

nlohmann::json train_config_to_json(const TrainConfig& tc) {
  nlohmann::json j;
  j["learning_rate"] = tc.learning_rate;
  j["max_epochs"] = tc.max_epochs;
  j["plateau_factor"] = tc.plateau_factor;
  j["plateau_patience"] = tc.plateau_patience;
  j["early_stop_patience"] = tc.early_stop_patience;
  j["batch_size"] = tc.batch_size;
  j["grad_clip_norm"] = tc.grad_clip_norm;
  j["seed"] = tc.seed;
  return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig tc;
  tc.learning_rate = j.at("learning_rate").get<double>();
  tc.max_epochs = j.at("max_epochs").get<int>();
  tc.plateau_factor = j.at("plateau_factor").get<double>();
  tc.plateau_patience = j.at("plateau_patience").get<int>();
  tc.early_stop_patience = j.at("early_stop_patience").get<int>();
  tc.batch_size = j.at("batch_size").get<int>();
  tc.grad_clip_norm = j.at("grad_clip_norm").get<double>();
  tc.seed = j.at("seed").get<uint64_t>();
  return tc;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<EpochRow>& rows) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "metrics csv: cannot open ", path);
  os << "epoch,train_loss,val_loss,lr\n";
  for (const EpochRow& r : rows)
    os << r.epoch << "," << fmt(r.train_loss) << "," << fmt(r.val_loss) << ","
       << fmt(r.lr) << "\n";
  require(os.good(), "metrics csv: short write to ", path);
}

void write_summary_csv(const std::string& path, const EvalSummary& summary) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "summary csv: cannot open ", path);
  os << "condition,source,task,lcc,srcc,mse,n\n";
  for (const EvalCell& c : summary.cells) {
    os << c.condition << "," << c.source << "," << c.task << ",";
    if (c.present)
      os << fmt(c.stats.lcc) << "," << fmt(c.stats.srcc) << ","
         << fmt(c.stats.mse);
    else
      os << "absent,absent,absent";
    os << "," << c.n << "\n";
  }
  require(os.good(), "summary csv: short write to ", path);
}

void write_predictions_csv(const std::string& path,
                           const std::vector<PredRow>& rows) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "predictions csv: cannot open ", path);
  os << "utterance_id,truth,predicted_raw,predicted_clamped\n";
  for (const PredRow& r : rows)
    os << r.utterance_id << "," << fmt(r.truth) << "," << fmt(r.raw) << ","
       << fmt(r.clamped) << "\n";
  require(os.good(), "predictions csv: short write to ", path);
}

}  // namespace trainer
}  // namespace avsqa
