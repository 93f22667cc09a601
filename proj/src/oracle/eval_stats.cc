// oracle/eval_stats.cc

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

#include "oracle/eval_stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.h"

namespace avsqa {
namespace oracle {

namespace {

bool is_constant(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end()) ==
         *std::min_element(v.begin(), v.end());
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double dot = 0.0, sa = 0.0, sb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double x = a[i] - ma;
    const double y = b[i] - mb;
    dot += x * y;
    sa += x * x;
    sb += y * y;
  }
  return dot / std::sqrt(sa * sb);
}

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

Stats eval_stats(const std::vector<double>& predicted,
                 const std::vector<double>& truth) {
  require(predicted.size() == truth.size(), "eval_stats: length mismatch (",
          predicted.size(), " vs ", truth.size(), ")");
  require(predicted.size() >= 2, "eval_stats: need at least 2 samples, got ",
          predicted.size());
  require(!is_constant(truth), "eval_stats: degenerate correlation (constant truth)");
  require(!is_constant(predicted),
          "eval_stats: degenerate correlation (constant predictions)");

  Stats s;
  s.lcc = pearson(predicted, truth);
  s.srcc = pearson(average_ranks(predicted), average_ranks(truth));
  double acc = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    const double d = predicted[i] - truth[i];
    acc += d * d;
  }
  s.mse = acc / static_cast<double>(truth.size());
  return s;
}

}  // namespace oracle
}  // namespace avsqa
