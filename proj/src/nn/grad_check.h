// nn/grad_check.h

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

#ifndef AVSQA_NN_GRAD_CHECK_H_
#define AVSQA_NN_GRAD_CHECK_H_

#include <functional>
#include <string>

#include "common/rng.h"
#include "nn/params.h"

namespace avsqa {
namespace nn {

// Central finite-difference step and agreement tolerance for gradient
// verification. The tolerance is relative, with an absolute floor so that
// coordinates whose true derivative is numerically zero do not divide by
// noise.
constexpr double kFdStep = 1e-4;
constexpr double kFdRelTol = 1e-3;
constexpr double kFdAbsFloor = 1e-6;

struct GradCheckReport {
  double max_rel = 0.0;   // worst relative disagreement seen
  int checked = 0;        // coordinates compared
  std::string worst;      // "param[idx]" of the worst coordinate
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;

  bool ok() const { return max_rel <= kFdRelTol; }
};

// Compares the gradients already accumulated in `store` against central
// finite differences of `forward`, which must be a pure function of the
// store's current values. Checks every coordinate of tensors with at most
// `samples_per_tensor` values and that many uniformly sampled distinct
// coordinates of larger ones. A coordinate that fails at `step` is retried
// once at step/10: a rectifier kink inside the wider window invalidates that
// quotient only, while a wrong gradient fails at both steps. A kink exactly
// at the point (a rectifier-dead receptive field under a zero bias pins a
// pre-activation at 0.0) defeats every central window; there the backward
// pass reports a one-sided derivative, so the coordinate is accepted when
// either one-sided quotient at the narrower steps agrees.
GradCheckReport fd_check_store(ParamStore& store,
                               const std::function<double()>& forward,
                               Rng& rng, int samples_per_tensor,
                               double step = kFdStep);

}  // namespace nn
}  // namespace avsqa

#endif  // AVSQA_NN_GRAD_CHECK_H_
