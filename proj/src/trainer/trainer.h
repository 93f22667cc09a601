// trainer/trainer.h

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

#ifndef AVSQA_TRAINER_TRAINER_H_
#define AVSQA_TRAINER_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "datagen/corpus.h"
#include "model/checkpoint.h"
#include "model/config.h"
#include "model/network.h"
#include "nn/params.h"
#include "nn/tensor.h"
#include "oracle/eval_stats.h"

namespace avsqa {
namespace trainer {

// Reported-score ranges; raw network outputs are clamped to these when a
// number leaves the pipeline.
inline constexpr double kQualityMin = 1.0;
inline constexpr double kQualityMax = 4.5;
inline constexpr double kIntelMin = 0.0;
inline constexpr double kIntelMax = 1.0;

struct TrainConfig {
  double learning_rate = 1e-4;
  int max_epochs = 25;
  double plateau_factor = 0.1;
  int plateau_patience = 3;   // epochs without validation improvement
  int early_stop_patience = 5;
  int batch_size = 8;
  double grad_clip_norm = 5.0;  // global norm; <= 0 disables clipping
  uint64_t seed = 1;

  void validate() const;
};

// The learning rate after observing `val_history` (one validation total
// loss per completed epoch): drops by `factor` each time `patience` epochs
// pass without a new strict best. A pure function of its inputs, so the
// schedule can be audited from the metrics log alone.
double scheduled_lr(double base_lr, const std::vector<double>& val_history,
                    int patience, double factor);

struct EpochRow {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;  // rate used during this epoch
};

struct TrainResult {
  model::Checkpoint best;  // parameters + Adam state at the best epoch
  std::vector<EpochRow> metrics;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  int optimizer_steps = 0;
  bool early_stopped = false;
};

// Trains on the manifest's train split, validating each epoch on its
// validation split. Deterministic given (configs, records, seed).
TrainResult train(const model::ModelConfig& mc, const TrainConfig& tc,
                  const std::vector<datagen::UtteranceRecord>& records,
                  const std::string& corpus_dir);

// One scored utterance of one task.
struct PredRow {
  std::string utterance_id;
  datagen::Condition condition = datagen::Condition::kSeen;
  datagen::Source source = datagen::Source::kNoisy;
  double truth = 0.0;
  double raw = 0.0;      // network output
  double clamped = 0.0;  // reported score
};

// One condition x source x task cell of the report matrix. Cells with fewer
// than two utterances, or with a constant prediction or truth vector, carry
// no statistics and are marked absent instead.
struct EvalCell {
  std::string condition;  // "seen" | "unseen"
  std::string source;     // "noisy" | "enhanced" | "pooled"
  std::string task;       // "quality" | "intelligibility"
  int n = 0;
  bool present = false;
  oracle::Stats stats;
};

struct EvalSummary {
  std::vector<PredRow> quality;  // empty when the head is inactive
  std::vector<PredRow> intelligibility;
  std::vector<EvalCell> cells;
};

// The report cells for one task's rows: seen/unseen x noisy/enhanced/pooled,
// statistics over clamped predictions.
std::vector<EvalCell> cells_from_rows(const std::string& task,
                                      const std::vector<PredRow>& rows);

// Scores every record of `subset` with dropout off and fills the report
// matrix for the active tasks.
EvalSummary evaluate(const model::Network& net, nn::ParamStore& store,
                     const std::vector<datagen::UtteranceRecord>& subset,
                     const std::string& corpus_dir);

struct Prediction {
  double quality = 0.0;  // meaningful only when the head is active
  double intelligibility = 0.0;
  std::vector<double> quality_frames;       // valid frames only
  std::vector<double> intel_frames;
  nn::Tensor quality_attention;  // [valid_t, valid_t]
  nn::Tensor intel_attention;
};

// Scores one utterance from files. `video_path` may be empty for audio-only
// networks; a multimodal network without a video is a modality mismatch.
Prediction predict(const model::Network& net, nn::ParamStore& store,
                   const std::string& wav_path,
                   const std::string& video_path);

// Checkpoint glue: a trained store (plus optional Adam moments) serialized
// with the model config echoed into ck.config["model"], and back.
struct RestoredModel {
  model::ModelConfig config;
  nn::ParamStore store;
};
RestoredModel restore_model(const model::Checkpoint& ck);

nlohmann::json model_config_to_json(const model::ModelConfig& mc);
model::ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::json train_config_to_json(const TrainConfig& tc);
TrainConfig train_config_from_json(const nlohmann::json& j);

// CSV exports. Numbers are printed with enough digits to round-trip.
void write_metrics_csv(const std::string& path,
                       const std::vector<EpochRow>& rows);
void write_summary_csv(const std::string& path, const EvalSummary& summary);
void write_predictions_csv(const std::string& path,
                           const std::vector<PredRow>& rows);

}  // namespace trainer
}  // namespace avsqa

#endif  // AVSQA_TRAINER_TRAINER_H_
