// oracle/resample.cc

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

#include "oracle/resample.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"

namespace avsqa {
namespace oracle {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = 3.14159265358979323846 * x;
  return std::sin(px) / px;
}

// Lowpass prototype: cutoff 1/max(up,down) of Nyquist, Kaiser window,
// normalized to unity DC gain, then scaled by `up` to preserve amplitude
// through zero-insertion.
std::vector<double> design_filter(int up, int down) {
  const int max_rate = std::max(up, down);
  const int half = kResampleHalfLenFactor * max_rate;
  const int ntaps = 2 * half + 1;
  const double fc = 1.0 / max_rate;
  std::vector<double> h(ntaps);
  const double i0_beta = std::cyl_bessel_i(0.0, kResampleKaiserBeta);
  double sum = 0.0;
  for (int n = 0; n < ntaps; ++n) {
    const double m = n - half;
    const double r = m / half;
    const double kaiser =
        std::cyl_bessel_i(0.0, kResampleKaiserBeta * std::sqrt(1.0 - r * r)) /
        i0_beta;
    h[n] = fc * sinc(fc * m) * kaiser;
    sum += h[n];
  }
  for (double& v : h) v = v / sum * up;
  return h;
}

}  // namespace

std::vector<double> resample_poly(const std::vector<double>& x, int up,
                                  int down) {
  require(up > 0 && down > 0, "resample: non-positive rate factor");
  if (up == down) return x;
  const std::vector<double> h = design_filter(up, down);
  const int half = (static_cast<int>(h.size()) - 1) / 2;
  const long long n = static_cast<long long>(x.size());
  const long long n_out = (n * up + down - 1) / down;
  std::vector<double> y(static_cast<size_t>(n_out), 0.0);
  for (long long j = 0; j < n_out; ++j) {
    // Tap index into h for input sample k: half + j*down - k*up.
    const long long center = half + j * static_cast<long long>(down);
    long long k_lo = (center - (static_cast<long long>(h.size()) - 1) + up - 1) / up;
    long long k_hi = center / up;
    k_lo = std::max<long long>(k_lo, 0);
    k_hi = std::min<long long>(k_hi, n - 1);
    double acc = 0.0;
    for (long long k = k_lo; k <= k_hi; ++k)
      acc += x[static_cast<size_t>(k)] * h[static_cast<size_t>(center - k * up)];
    y[static_cast<size_t>(j)] = acc;
  }
  return y;
}

std::vector<double> resample_16k_to_10k(const std::vector<double>& x) {
  return resample_poly(x, 5, 8);
}

}  // namespace oracle
}  // namespace avsqa
