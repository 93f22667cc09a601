// oracle/eval_stats.h

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

#ifndef AVSQA_ORACLE_EVAL_STATS_H_
#define AVSQA_ORACLE_EVAL_STATS_H_

#include <vector>

namespace avsqa {
namespace oracle {

struct Stats {
  double lcc = 0.0;   // Pearson linear correlation
  double srcc = 0.0;  // Spearman rank correlation, average ranks for ties
  double mse = 0.0;
};

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& v);

// Requires equal lengths >= 2 and non-constant sequences; a constant side
// raises a "degenerate correlation" Error naming it.
Stats eval_stats(const std::vector<double>& predicted,
                 const std::vector<double>& truth);

}  // namespace oracle
}  // namespace avsqa

#endif  // AVSQA_ORACLE_EVAL_STATS_H_
