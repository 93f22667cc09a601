// datagen/corpus.h

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

#ifndef AVSQA_DATAGEN_CORPUS_H_
#define AVSQA_DATAGEN_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "oracle/labels.h"

namespace avsqa {
namespace datagen {

struct CorpusConfig {
  int n_train_speakers = 40;  // validation speakers are carved out of these
  int n_test_speakers = 8;
  int utterances_per_speaker = 1;
  double duration_min_s = 1.0;
  double duration_max_s = 1.4;
  double fps = 25.0;
  std::vector<double> snr_grid_db = {-20, -15, -10, -5, 0, 5, 10};
  double seen_fraction = 0.8;
  int noise_instances_per_family = 2;
  // Fraction of each split's noisy utterances routed through enhancement.
  // Routing moves whole SNR ladders so noisy ladders stay complete.
  double enhanced_fraction = 0.5;
  uint64_t master_seed = 1;
  // When non-empty, labels come from this JSONL file instead of the oracles;
  // a record whose id is missing from it aborts the build.
  std::string external_labels_path;

  void validate() const;  // throws Error naming the offending field
};

enum class Split { kTrain, kValidation, kTest };
enum class Condition { kSeen, kUnseen };
enum class Source { kNoisy, kEnhanced };

struct UtteranceRecord {
  std::string utterance_id;  // unique per record
  std::string clean_path;    // all paths relative to the corpus root
  std::string degraded_path;
  std::string video_path;
  std::string noise_id;
  double snr_db = 0.0;
  Condition condition = Condition::kSeen;
  Source source = Source::kNoisy;
  Split split = Split::kTrain;
  oracle::LabelPair labels;
};

struct CorpusSummary {
  int n_records = 0;
  int n_train = 0, n_validation = 0, n_test = 0;
  int n_noisy = 0, n_enhanced = 0;
  int n_test_seen = 0, n_test_unseen = 0;
  int n_noise_seen = 0, n_noise_unseen = 0;
  std::string label_source;  // "oracle" or the external path
};

struct Corpus {
  std::vector<UtteranceRecord> records;
  CorpusSummary summary;
};

const char* to_string(Split s);
const char* to_string(Condition c);
const char* to_string(Source s);

// Deterministic record plan: speakers, durations, noise assignment (one
// noise instance per utterance, mixed at every grid SNR), the speaker-level
// validation holdout, and per-ladder enhancement routing. No files are
// touched and labels are left zero. Train and validation mix only seen
// noises; each test utterance gets one seen and one unseen ladder.
Corpus plan_corpus(const CorpusConfig& cfg);

// Materializes the plan under out_dir: clean/degraded WAVs, per-utterance
// lip-video directories, oracle (or external) labels, and a JSON Lines
// manifest at <out_dir>/manifest.jsonl plus a summary.json. Identical
// configs produce byte-identical manifests. A label failure aborts with the
// offending utterance id.
Corpus build_corpus(const CorpusConfig& cfg, const std::string& out_dir);

// Manifest round trip. write_manifest emits one sorted-key JSON object per
// record; load_manifest validates field presence and enum values.
void write_manifest(const std::string& path,
                    const std::vector<UtteranceRecord>& records);
std::vector<UtteranceRecord> load_manifest(const std::string& path);

}  // namespace datagen
}  // namespace avsqa

#endif  // AVSQA_DATAGEN_CORPUS_H_
