// datagen/corpus.cc

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

#include "datagen/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "common/error.h"
#include "common/rng.h"
#include "common/wav_io.h"
#include "datagen/noise.h"
#include "datagen/synth.h"
#include "datagen/video.h"
#include "dsp/enhance.h"
#include "dsp/mixing.h"
#include "json.hpp"
#include "oracle/labels.h"
#include "oracle/pseudo_pesq.h"
#include "oracle/stoi.h"

namespace avsqa {
namespace datagen {

namespace fs = std::filesystem;

namespace {

// Substream path tags, one per random decision so no stream order couples
// two decisions: speaker traits, utterance traits, durations, jitter, noise
// assignment, enhancement routing, validation holdout.
enum Tag : uint64_t {
  kTagSpeaker = 0x73,
  kTagUtterance = 0x75,
  kTagDuration = 0x64,
  kTagJitter = 0x6a,
  kTagNoisePick = 0x6d,
  kTagEnhance = 0x65,
  kTagValidation = 0x76,
};

std::string snr_token(double snr_db) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", std::fabs(snr_db));
  std::string t(buf);
  for (char& c : t)
    if (c == '.') c = 'd';
  return (snr_db < 0.0 ? "m" : "p") + t;
}

std::string speaker_name(int gspk, int utt) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%03du%02d", gspk, utt);
  return buf;
}

}  // namespace

void CorpusConfig::validate() const {
  require(n_train_speakers >= 2, "corpus config: n_train_speakers must be ",
          ">= 2 (one is held out for validation), got ", n_train_speakers);
  require(n_test_speakers >= 1, "corpus config: n_test_speakers must be >= 1");
  require(utterances_per_speaker >= 1,
          "corpus config: utterances_per_speaker must be >= 1");
  require(duration_min_s >= 1.0 && duration_max_s <= 6.0 &&
              duration_min_s <= duration_max_s,
          "corpus config: duration range must lie within [1, 6] s");
  require(fps >= 10.0 && fps <= 60.0,
          "corpus config: fps must lie in [10, 60]");
  require(!snr_grid_db.empty(), "corpus config: snr_grid_db is empty");
  for (double s : snr_grid_db)
    require(s >= -20.0 && s <= 10.0,
            "corpus config: snr_grid_db entry ", s, " outside [-20, 10] dB");
  for (size_t i = 1; i < snr_grid_db.size(); ++i)
    require(snr_grid_db[i] > snr_grid_db[i - 1],
            "corpus config: snr_grid_db must be strictly increasing");
  require(seen_fraction > 0.0 && seen_fraction < 1.0,
          "corpus config: seen_fraction must lie in (0, 1)");
  require(enhanced_fraction >= 0.0 && enhanced_fraction <= 1.0,
          "corpus config: enhanced_fraction must lie in [0, 1]");
  require(noise_instances_per_family >= 1,
          "corpus config: noise_instances_per_family must be >= 1");
}

const char* to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    default: return "test";
  }
}
const char* to_string(Condition c) {
  return c == Condition::kSeen ? "seen" : "unseen";
}
const char* to_string(Source s) {
  return s == Source::kNoisy ? "noisy" : "enhanced";
}

namespace {

Corpus plan_with_catalog(const CorpusConfig& cfg,
                         const std::vector<dsp::NoiseClip>& catalog) {
  std::vector<int> seen_idx, unseen_idx;
  for (int i = 0; i < static_cast<int>(catalog.size()); ++i)
    (catalog[static_cast<size_t>(i)].partition == dsp::NoisePartition::kSeen
         ? seen_idx
         : unseen_idx)
        .push_back(i);

  // Speaker-level validation holdout: a seeded shuffle of the train
  // speakers, first tenth (at least one) held out.
  std::vector<int> train_spk(static_cast<size_t>(cfg.n_train_speakers));
  std::iota(train_spk.begin(), train_spk.end(), 0);
  Rng val_rng = Rng::substream(cfg.master_seed, {kTagValidation});
  val_rng.shuffle(train_spk);
  const int n_val = std::max(1, cfg.n_train_speakers / 10);
  std::set<int> val_set(train_spk.begin(), train_spk.begin() + n_val);

  Corpus corpus;

  const auto emit_ladder = [&](int gspk, int utt, int noise_idx,
                               Condition cond, Split split) {
    for (double snr : cfg.snr_grid_db) {
      UtteranceRecord r;
      const std::string base = speaker_name(gspk, utt);
      r.clean_path = "clean/" + base + ".wav";
      r.video_path = "video/" + base;
      r.noise_id = catalog[static_cast<size_t>(noise_idx)].noise_id;
      r.snr_db = snr;
      r.condition = cond;
      r.source = Source::kNoisy;
      r.split = split;
      r.utterance_id = base + "_" + r.noise_id + "_" + snr_token(snr);
      corpus.records.push_back(std::move(r));
    }
  };

  for (int s = 0; s < cfg.n_train_speakers; ++s)
    for (int u = 0; u < cfg.utterances_per_speaker; ++u) {
      Rng pick = Rng::substream(cfg.master_seed,
                                {kTagNoisePick, static_cast<uint64_t>(s),
                                 static_cast<uint64_t>(u)});
      const int ni =
          seen_idx[static_cast<size_t>(pick.uniform_int(
              0, static_cast<int>(seen_idx.size()) - 1))];
      emit_ladder(s, u, ni, Condition::kSeen,
                  val_set.count(s) > 0 ? Split::kValidation : Split::kTrain);
    }

  for (int s = 0; s < cfg.n_test_speakers; ++s)
    for (int u = 0; u < cfg.utterances_per_speaker; ++u) {
      const int gspk = cfg.n_train_speakers + s;
      Rng pick = Rng::substream(cfg.master_seed,
                                {kTagNoisePick, static_cast<uint64_t>(gspk),
                                 static_cast<uint64_t>(u)});
      const int ns =
          seen_idx[static_cast<size_t>(pick.uniform_int(
              0, static_cast<int>(seen_idx.size()) - 1))];
      const int nu =
          unseen_idx[static_cast<size_t>(pick.uniform_int(
              0, static_cast<int>(unseen_idx.size()) - 1))];
      emit_ladder(gspk, u, ns, Condition::kSeen, Split::kTest);
      emit_ladder(gspk, u, nu, Condition::kUnseen, Split::kTest);
    }

  // Route floor(enhanced_fraction * pool) records of each split through
  // enhancement; the remainder stays noisy. Routing is per split so the
  // noisy/enhanced ratio holds for train, validation, and test alike.
  std::vector<size_t> pools[3];
  for (size_t i = 0; i < corpus.records.size(); ++i)
    pools[static_cast<int>(corpus.records[i].split)].push_back(i);
  for (int g = 0; g < 3; ++g) {
    Rng route = Rng::substream(cfg.master_seed,
                               {kTagEnhance, static_cast<uint64_t>(g)});
    route.shuffle(pools[g]);
    const size_t n_enh = static_cast<size_t>(std::floor(
        cfg.enhanced_fraction * static_cast<double>(pools[g].size())));
    for (size_t k = 0; k < n_enh; ++k)
      corpus.records[pools[g][k]].source = Source::kEnhanced;
  }

  for (UtteranceRecord& r : corpus.records) {
    r.utterance_id += std::string("_") + to_string(r.source);
    r.degraded_path = "degraded/" + r.utterance_id + ".wav";
  }

  CorpusSummary& sum = corpus.summary;
  sum.n_records = static_cast<int>(corpus.records.size());
  for (const UtteranceRecord& r : corpus.records) {
    if (r.split == Split::kTrain) ++sum.n_train;
    if (r.split == Split::kValidation) ++sum.n_validation;
    if (r.split == Split::kTest) {
      ++sum.n_test;
      if (r.condition == Condition::kSeen) ++sum.n_test_seen;
      else ++sum.n_test_unseen;
    }
    if (r.source == Source::kNoisy) ++sum.n_noisy;
    else ++sum.n_enhanced;
  }
  sum.n_noise_seen = static_cast<int>(seen_idx.size());
  sum.n_noise_unseen = static_cast<int>(unseen_idx.size());
  sum.label_source = cfg.external_labels_path.empty()
                         ? "oracle"
                         : cfg.external_labels_path;
  return corpus;
}

}  // namespace

Corpus plan_corpus(const CorpusConfig& cfg) {
  cfg.validate();
  const std::vector<dsp::NoiseClip> catalog = build_noise_catalog(
      cfg.master_seed, cfg.noise_instances_per_family, cfg.seen_fraction);
  return plan_with_catalog(cfg, catalog);
}

Corpus build_corpus(const CorpusConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const std::vector<dsp::NoiseClip> catalog = build_noise_catalog(
      cfg.master_seed, cfg.noise_instances_per_family, cfg.seen_fraction);
  Corpus corpus = plan_with_catalog(cfg, catalog);

  std::map<std::string, int> noise_by_id;
  for (int i = 0; i < static_cast<int>(catalog.size()); ++i)
    noise_by_id[catalog[static_cast<size_t>(i)].noise_id] = i;

  std::map<std::string, oracle::LabelPair> external;
  if (!cfg.external_labels_path.empty())
    external = oracle::ingest_external_labels(cfg.external_labels_path);

  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "clean", ec);
  fs::create_directories(fs::path(out_dir) / "degraded", ec);
  fs::create_directories(fs::path(out_dir) / "video", ec);
  require(!ec, "corpus: cannot create directories under ", out_dir);

  // Clean audio and video are per utterance, shared by every record of its
  // ladders; synthesize each exactly once, keyed by the base name.
  std::map<std::string, dsp::Waveform> clean_by_base;
  const int total_speakers = cfg.n_train_speakers + cfg.n_test_speakers;
  for (int gspk = 0; gspk < total_speakers; ++gspk)
    for (int u = 0; u < cfg.utterances_per_speaker; ++u) {
      const std::string base = speaker_name(gspk, u);
      const uint64_t sp = static_cast<uint64_t>(gspk);
      const uint64_t uu = static_cast<uint64_t>(u);
      const double dur =
          Rng::substream(cfg.master_seed, {kTagDuration, sp, uu})
              .uniform(cfg.duration_min_s, cfg.duration_max_s);
      dsp::Waveform clean = synth_clean(
          Rng::substream(cfg.master_seed, {kTagSpeaker, sp}).next_u64(),
          Rng::substream(cfg.master_seed, {kTagUtterance, sp, uu}).next_u64(),
          dur);
      write_wav((fs::path(out_dir) / "clean" / (base + ".wav")).string(),
                clean.samples, clean.sample_rate);
      const VideoClip clip = synth_lip_video(
          clean, cfg.fps,
          Rng::substream(cfg.master_seed, {kTagJitter, sp, uu}).next_u64());
      write_video((fs::path(out_dir) / "video" / base).string(), clip);
      clean_by_base[base] = std::move(clean);
    }

  for (UtteranceRecord& r : corpus.records) {
    const std::string base = r.utterance_id.substr(0, r.utterance_id.find('_'));
    const dsp::Waveform& clean = clean_by_base.at(base);
    const dsp::NoiseClip& noise =
        catalog[static_cast<size_t>(noise_by_id.at(r.noise_id))];
    dsp::Waveform degraded = dsp::mix_at_snr(clean, noise, r.snr_db).mix;
    if (r.source == Source::kEnhanced)
      degraded = dsp::spectral_subtraction_enhance(degraded);
    write_wav((fs::path(out_dir) / r.degraded_path).string(), degraded.samples,
              degraded.sample_rate);

    if (!external.empty()) {
      const auto it = external.find(r.utterance_id);
      require(it != external.end(), "corpus: label failure for ",
              r.utterance_id, ": id missing from ", cfg.external_labels_path);
      r.labels = it->second;
    } else {
      try {
        r.labels.intelligibility = oracle::stoi(clean, degraded);
        r.labels.quality = oracle::pseudo_pesq(clean, degraded);
        r.labels.quality_source = oracle::QualitySource::kPseudoPesq;
      } catch (const Error& e) {
        throw Error("corpus: label failure for " + r.utterance_id + ": " +
                    e.what());
      }
    }
  }

  write_manifest((fs::path(out_dir) / "manifest.jsonl").string(),
                 corpus.records);

  nlohmann::json sj;
  const CorpusSummary& s = corpus.summary;
  sj["n_records"] = s.n_records;
  sj["n_train"] = s.n_train;
  sj["n_validation"] = s.n_validation;
  sj["n_test"] = s.n_test;
  sj["n_test_seen"] = s.n_test_seen;
  sj["n_test_unseen"] = s.n_test_unseen;
  sj["n_noisy"] = s.n_noisy;
  sj["n_enhanced"] = s.n_enhanced;
  sj["n_noise_seen"] = s.n_noise_seen;
  sj["n_noise_unseen"] = s.n_noise_unseen;
  sj["label_source"] = s.label_source;
  std::ofstream os(fs::path(out_dir) / "summary.json", std::ios::binary);
  os << sj.dump(2) << "\n";
  require(os.good(), "corpus: cannot write summary.json under ", out_dir);
  return corpus;
}

void write_manifest(const std::string& path,
                    const std::vector<UtteranceRecord>& records) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "manifest: cannot open ", path, " for writing");
  for (const UtteranceRecord& r : records) {
    nlohmann::json j;
    j["utterance_id"] = r.utterance_id;
    j["clean_path"] = r.clean_path;
    j["degraded_path"] = r.degraded_path;
    j["video_path"] = r.video_path;
    j["noise_id"] = r.noise_id;
    j["snr_db"] = r.snr_db;
    j["condition"] = to_string(r.condition);
    j["source"] = to_string(r.source);
    j["split"] = to_string(r.split);
    j["labels"] = {
        {"quality", r.labels.quality},
        {"intelligibility", r.labels.intelligibility},
        {"quality_source",
         r.labels.quality_source == oracle::QualitySource::kExternalPesq
             ? "external_pesq"
             : "pseudo_pesq"},
    };
    os << j.dump() << "\n";
  }
  require(os.good(), "manifest: short write to ", path);
}

std::vector<UtteranceRecord> load_manifest(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), "manifest: cannot open ", path);
  std::vector<UtteranceRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error("manifest: " + path + ":" + std::to_string(lineno) +
                  ": bad JSON: " + e.what());
    }
    const auto str = [&](const char* key) -> std::string {
      require(j.contains(key) && j[key].is_string(), "manifest: ", path, ":",
              lineno, ": missing string field '", key, "'");
      return j[key].get<std::string>();
    };
    UtteranceRecord r;
    r.utterance_id = str("utterance_id");
    r.clean_path = str("clean_path");
    r.degraded_path = str("degraded_path");
    r.video_path = str("video_path");
    r.noise_id = str("noise_id");
    require(j.contains("snr_db") && j["snr_db"].is_number(), "manifest: ",
            path, ":", lineno, ": missing number field 'snr_db'");
    r.snr_db = j["snr_db"].get<double>();

    const std::string cond = str("condition");
    require(cond == "seen" || cond == "unseen", "manifest: ", path, ":",
            lineno, ": bad condition '", cond, "'");
    r.condition = cond == "seen" ? Condition::kSeen : Condition::kUnseen;
    const std::string src = str("source");
    require(src == "noisy" || src == "enhanced", "manifest: ", path, ":",
            lineno, ": bad source '", src, "'");
    r.source = src == "noisy" ? Source::kNoisy : Source::kEnhanced;
    const std::string split = str("split");
    require(split == "train" || split == "validation" || split == "test",
            "manifest: ", path, ":", lineno, ": bad split '", split, "'");
    r.split = split == "train"
                  ? Split::kTrain
                  : (split == "validation" ? Split::kValidation : Split::kTest);

    require(j.contains("labels") && j["labels"].is_object(), "manifest: ",
            path, ":", lineno, ": missing labels object");
    const nlohmann::json& lj = j["labels"];
    require(lj.contains("quality") && lj["quality"].is_number() &&
                lj.contains("intelligibility") &&
                lj["intelligibility"].is_number(),
            "manifest: ", path, ":", lineno, ": labels need numeric quality ",
            "and intelligibility");
    r.labels.quality = lj["quality"].get<double>();
    r.labels.intelligibility = lj["intelligibility"].get<double>();
    if (lj.contains("quality_source") &&
        lj["quality_source"].get<std::string>() == "external_pesq")
      r.labels.quality_source = oracle::QualitySource::kExternalPesq;
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace datagen
}  // namespace avsqa
