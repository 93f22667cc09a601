// oracle/labels.cc

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

#include "oracle/labels.h"

#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "common/error.h"
#include "oracle/pseudo_pesq.h"

namespace avsqa {
namespace oracle {

using json = nlohmann::json;

std::map<std::string, LabelPair> ingest_external_labels(
    const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  require(in.good(), "label ingest: cannot open ", manifest_path);

  std::map<std::string, LabelPair> out;
  std::map<std::string, int> first_line;
  std::vector<std::string> problems;
  auto problem = [&](int line_no, const std::string& what) {
    problems.push_back(str_cat("line ", line_no, ": ", what));
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (rec.is_discarded() || !rec.is_object()) {
      problem(line_no, "malformed JSON record");
      continue;
    }
    if (!rec.contains("utterance_id") || !rec["utterance_id"].is_string()) {
      problem(line_no, "missing utterance_id");
      continue;
    }
    const std::string id = rec["utterance_id"].get<std::string>();
    if (auto it = first_line.find(id); it != first_line.end()) {
      problem(line_no, str_cat("duplicate utterance_id '", id, "' (also line ",
                               it->second, ")"));
      continue;
    }
    first_line[id] = line_no;
    if (!rec.contains("pesq") || !rec["pesq"].is_number()) {
      problem(line_no, "missing pesq");
      continue;
    }
    if (!rec.contains("stoi") || !rec["stoi"].is_number()) {
      problem(line_no, "missing stoi");
      continue;
    }
    const double pesq = rec["pesq"].get<double>();
    const double stoi = rec["stoi"].get<double>();
    if (!(pesq >= kPesqMin && pesq <= kPesqMax)) {
      problem(line_no, str_cat("pesq ", pesq, " outside [", kPesqMin, ", ",
                               kPesqMax, "]"));
      continue;
    }
    if (!(stoi >= 0.0 && stoi <= 1.0)) {
      problem(line_no, str_cat("stoi ", stoi, " outside [0, 1]"));
      continue;
    }
    out[id] = LabelPair{pesq, stoi, QualitySource::kExternalPesq};
  }

  if (!problems.empty()) {
    std::ostringstream report;
    report << "label ingest: " << problems.size() << " bad line(s) in "
           << manifest_path;
    for (const std::string& p : problems) report << "\n  " << p;
    fail(report.str());
  }
  return out;
}

}  // namespace oracle
}  // namespace avsqa
