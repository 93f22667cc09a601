// nn/params.cc

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

#include "nn/params.h"

#include <cmath>

#include "common/error.h"
#include "common/rng.h"

namespace avsqa {
namespace nn {

namespace {

constexpr uint64_t kInitStreamTag = 0x494e4954ull;  // "INIT"

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Modified Gram-Schmidt on the rows of an n x n block drawn from the normal
// distribution. MGS yields R with a positive diagonal, so the resulting Q is
// the canonical orthogonal factor.
void orthogonal_block(Rng& rng, int n, double* block) {
  std::vector<double> a(static_cast<size_t>(n) * n);
  for (double& v : a) v = rng.normal();
  for (int r = 0; r < n; ++r) {
    double* qr = block + static_cast<size_t>(r) * n;
    const double* ar = a.data() + static_cast<size_t>(r) * n;
    for (int j = 0; j < n; ++j) qr[j] = ar[j];
    for (int k = 0; k < r; ++k) {
      const double* qk = block + static_cast<size_t>(k) * n;
      double dot = 0.0;
      for (int j = 0; j < n; ++j) dot += qk[j] * qr[j];
      for (int j = 0; j < n; ++j) qr[j] -= dot * qk[j];
    }
    double norm = 0.0;
    for (int j = 0; j < n; ++j) norm += qr[j] * qr[j];
    norm = std::sqrt(norm);
    require(norm > 1e-12, "orthogonal init: degenerate draw");
    for (int j = 0; j < n; ++j) qr[j] /= norm;
  }
}

}  // namespace

Tensor& ParamStore::create(const std::string& name, std::vector<int> shape,
                           Init kind, int fan_in) {
  require(!has(name), "param store: duplicate parameter '", name, "'");
  Tensor value(shape);
  Rng rng = Rng::substream(seed_, {kInitStreamTag, fnv1a64(name)});
  switch (kind) {
    case Init::kZero:
      break;
    case Init::kOne:
      for (double& v : value.data) v = 1.0;
      break;
    case Init::kFanInUniform: {
      require(fan_in > 0, "param store: fan_in required for '", name, "'");
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      for (double& v : value.data) v = rng.uniform(-bound, bound);
      break;
    }
    case Init::kReluUniform: {
      require(fan_in > 0, "param store: fan_in required for '", name, "'");
      const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
      for (double& v : value.data) v = rng.uniform(-bound, bound);
      break;
    }
    case Init::kLstmBias: {
      require(value.ndim() == 1 && value.dim(0) % 4 == 0,
              "param store: LSTM bias must be [4H], got '", name, "' ",
              value.shape_str());
      const int h = value.dim(0) / 4;
      for (int j = 0; j < h; ++j) value[static_cast<size_t>(h + j)] = 1.0;
      break;
    }
    case Init::kOrthogonalGates: {
      require(value.ndim() == 2 && value.dim(0) == 4 * value.dim(1),
              "param store: recurrent kernel must be [4H,H], got '", name,
              "' ", value.shape_str());
      const int h = value.dim(1);
      for (int gate = 0; gate < 4; ++gate)
        orthogonal_block(rng, h,
                         value.data.data() + static_cast<size_t>(gate) * h * h);
      break;
    }
  }
  order_.push_back(name);
  auto& e = index_[name];
  e.value = std::move(value);
  e.grad = Tensor(e.value.shape);
  return e.value;
}

Tensor& ParamStore::value(const std::string& name) {
  auto it = index_.find(name);
  require(it != index_.end(), "param store: unknown parameter '", name, "'");
  return it->second.value;
}

const Tensor& ParamStore::value(const std::string& name) const {
  auto it = index_.find(name);
  require(it != index_.end(), "param store: unknown parameter '", name, "'");
  return it->second.value;
}

Tensor& ParamStore::grad(const std::string& name) {
  auto it = index_.find(name);
  require(it != index_.end(), "param store: unknown parameter '", name, "'");
  return it->second.grad;
}

void ParamStore::zero_grads() {
  for (auto& [name, e] : index_)
    std::fill(e.grad.data.begin(), e.grad.data.end(), 0.0);
}

int64_t ParamStore::total_values() const {
  int64_t n = 0;
  for (const auto& name : order_) n += index_.at(name).value.numel();
  return n;
}

}  // namespace nn
}  // namespace avsqa
