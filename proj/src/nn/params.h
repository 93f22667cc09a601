// nn/params.h

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

#ifndef AVSQA_NN_PARAMS_H_
#define AVSQA_NN_PARAMS_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nn/graph.h"
#include "nn/ops.h"
#include "nn/tensor.h"

namespace avsqa {
namespace nn {

enum class Init {
  kZero,
  kOne,
  kFanInUniform,     // U[-1/sqrt(fan_in), 1/sqrt(fan_in)]; pass fan_in
  kReluUniform,      // U[+-sqrt(6/fan_in)]: variance 2/fan_in, the gain that
                     // preserves second moments through a rectifier. Use for
                     // every weight whose output feeds a relu without an
                     // intervening normalization; the smaller kFanInUniform
                     // collapses a deep normless stack's activations.
  kLstmBias,         // zeros with the forget-gate block set to 1
  kOrthogonalGates,  // [4H,H]: four independent HxH orthogonal blocks
};

// Named parameter tensors plus matching gradient buffers, in creation order.
// Initialization draws from a substream keyed by the parameter name, so the
// values for a given (seed, name) never depend on creation order.
class ParamStore {
 public:
  explicit ParamStore(uint64_t init_seed) : seed_(init_seed) {}

  Tensor& create(const std::string& name, std::vector<int> shape, Init kind,
                 int fan_in = 0);

  bool has(const std::string& name) const { return index_.count(name) != 0; }
  Tensor& value(const std::string& name);
  const Tensor& value(const std::string& name) const;
  Tensor& grad(const std::string& name);
  const std::vector<std::string>& names() const { return order_; }

  void zero_grads();
  int64_t total_values() const;
  uint64_t init_seed() const { return seed_; }

 private:
  struct Entry {
    Tensor value;
    Tensor grad;
  };
  uint64_t seed_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, Entry> index_;
};

// Binds store parameters into a graph as tracked leaves and, after
// backward(), adds the leaf gradients back onto the store gradients.
class Binder {
 public:
  Binder(Graph* g, ParamStore* store) : g_(g), store_(store) {}

  int operator()(const std::string& name) {
    int h = variable(*g_, store_->value(name));
    bound_.emplace_back(name, h);
    return h;
  }

  void harvest() {
    for (const auto& [name, h] : bound_) {
      if (!g_->grad_live(h)) continue;
      const Tensor& src = *g_->grad_or_null(h);
      Tensor& dst = store_->grad(name);
      for (size_t i = 0; i < src.data.size(); ++i) dst[i] += src[i];
    }
  }

 private:
  Graph* g_;
  ParamStore* store_;
  std::vector<std::pair<std::string, int>> bound_;
};

}  // namespace nn
}  // namespace avsqa

#endif  // AVSQA_NN_PARAMS_H_
