// oracle/labels.h

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

#ifndef AVSQA_ORACLE_LABELS_H_
#define AVSQA_ORACLE_LABELS_H_

#include <map>
#include <string>

namespace avsqa {
namespace oracle {

enum class QualitySource { kExternalPesq, kPseudoPesq };

struct LabelPair {
  double quality = 0.0;          // PESQ scale, [1.0, 4.5]
  double intelligibility = 0.0;  // STOI scale, [0, 1]
  QualitySource quality_source = QualitySource::kPseudoPesq;
};

// Reads a JSON Lines file of {utterance_id, pesq, stoi} records and returns
// utterance_id -> LabelPair with quality_source = external_pesq. All line
// problems (missing id, malformed JSON, out-of-range score, duplicate id —
// with both line numbers) are collected into one Error report.
std::map<std::string, LabelPair> ingest_external_labels(
    const std::string& manifest_path);

}  // namespace oracle
}  // namespace avsqa

#endif  // AVSQA_ORACLE_LABELS_H_
