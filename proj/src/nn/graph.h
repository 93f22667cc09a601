// nn/graph.h

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

#ifndef AVSQA_NN_GRAPH_H_
#define AVSQA_NN_GRAPH_H_

#include <functional>
#include <utility>
#include <vector>

#include "nn/tensor.h"

namespace avsqa {
namespace nn {

// Reverse-mode tape. Nodes are appended in construction order, which is a
// valid topological order, so backward() is a single reverse sweep. One graph
// is built per forward pass and discarded after the backward sweep.
class Graph {
 public:
  // Backward callback: reads grad(self) and accumulates into the parents.
  using BackwardFn = std::function<void(Graph&, int self)>;

  int leaf(Tensor value, bool track) {
    nodes_.push_back(Node{std::move(value), Tensor(), track, false, {}, {}});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int add(Tensor value, std::vector<int> parents, BackwardFn fn) {
    bool track = false;
    for (int p : parents) track = track || nodes_[static_cast<size_t>(p)].tracked;
    nodes_.push_back(Node{std::move(value), Tensor(), track, false,
                          std::move(parents), track ? std::move(fn) : BackwardFn()});
    return static_cast<int>(nodes_.size()) - 1;
  }

  const Tensor& val(int h) const { return nodes_[static_cast<size_t>(h)].value; }
  Tensor& mutable_val(int h) { return nodes_[static_cast<size_t>(h)].value; }

  bool tracked(int h) const { return nodes_[static_cast<size_t>(h)].tracked; }

  // Gradient buffer for a node, allocated zero on first touch. Returns
  // nullptr when the node does not require gradients, so op backwards can
  // skip the corresponding work entirely.
  Tensor* grad_or_null(int h) {
    Node& n = nodes_[static_cast<size_t>(h)];
    if (!n.tracked) return nullptr;
    if (!n.grad_live) {
      n.grad = Tensor(n.value.shape);
      n.grad_live = true;
    }
    return &n.grad;
  }

  bool grad_live(int h) const { return nodes_[static_cast<size_t>(h)].grad_live; }

  // The gradient of `loss` (a scalar node) w.r.t. every tracked ancestor.
  // `seed` is the upstream derivative, normally 1; the trainer seeds 1/batch
  // so per-sample sweeps accumulate a batch-mean gradient directly.
  void backward(int loss, double seed = 1.0) {
    require(val(loss).numel() == 1, "graph: backward target must be scalar");
    require(tracked(loss), "graph: backward target does not depend on any tracked leaf");
    (*grad_or_null(loss))[0] += seed;
    for (int i = loss; i >= 0; --i) {
      Node& n = nodes_[static_cast<size_t>(i)];
      if (n.grad_live && n.fn) n.fn(*this, i);
    }
  }

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool tracked = false;
    bool grad_live = false;
    std::vector<int> parents;
    BackwardFn fn;
  };
  std::vector<Node> nodes_;
};

}  // namespace nn
}  // namespace avsqa

#endif  // AVSQA_NN_GRAPH_H_
