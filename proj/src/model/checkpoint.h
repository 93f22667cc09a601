// model/checkpoint.h

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

#ifndef AVSQA_MODEL_CHECKPOINT_H_
#define AVSQA_MODEL_CHECKPOINT_H_

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nn/params.h"
#include "nn/tensor.h"

namespace avsqa {
namespace model {

// Versioned on-disk container: a header line, a JSON metadata block (config
// echo, seed, epoch, array directory), then the raw 64-bit values of every
// named array in directory order, little-endian. Loading a saved checkpoint
// reproduces every value bit for bit.
inline constexpr char kCheckpointMagic[] = "AVSQA-CKPT-1";

struct Checkpoint {
  uint64_t seed = 0;
  int epoch = 0;
  nlohmann::json config;  // opaque echo of the run configuration
  std::vector<std::pair<std::string, nn::Tensor>> arrays;

  const nn::Tensor* find(const std::string& name) const {
    for (const auto& [n, t] : arrays)
      if (n == name) return &t;
    return nullptr;
  }
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

// Appends every store parameter (in creation order) to ck->arrays.
void append_store_arrays(const nn::ParamStore& store, Checkpoint* ck);

// Copies arrays back into an already-registered store by name, checking
// shapes. Arrays that do not correspond to a parameter (optimizer state) are
// ignored; a parameter missing from the checkpoint is an error.
void restore_store_arrays(const Checkpoint& ck, nn::ParamStore* store);

}  // namespace model
}  // namespace avsqa

#endif  // AVSQA_MODEL_CHECKPOINT_H_
