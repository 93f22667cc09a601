// model/checkpoint.cc

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

#include "model/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "common/error.h"

namespace avsqa {
namespace model {

namespace {

void put_u64_le(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t get_u64_le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw Error("checkpoint: truncated file");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  nlohmann::json meta;
  meta["format"] = kCheckpointMagic;
  meta["seed"] = ck.seed;
  meta["epoch"] = ck.epoch;
  meta["config"] = ck.config;
  nlohmann::json dir = nlohmann::json::array();
  for (const auto& [name, t] : ck.arrays) {
    nlohmann::json e;
    e["name"] = name;
    e["shape"] = t.shape;
    dir.push_back(e);
  }
  meta["arrays"] = dir;
  // dump() emits object keys in sorted order, so the byte stream is a pure
  // function of the contents.
  const std::string meta_str = meta.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("checkpoint: cannot write '" + path + "'");
  os << kCheckpointMagic << '\n';
  put_u64_le(os, meta_str.size());
  os.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));
  for (const auto& [name, t] : ck.arrays) {
    (void)name;
    for (double d : t.data) put_u64_le(os, std::bit_cast<uint64_t>(d));
  }
  os.flush();
  if (!os) throw Error("checkpoint: write failed '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("checkpoint: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line) || line != kCheckpointMagic)
    throw Error("checkpoint: '" + path + "' is not a " +
                             kCheckpointMagic + std::string(" file"));
  const uint64_t meta_len = get_u64_le(is);
  std::string meta_str(meta_len, '\0');
  is.read(meta_str.data(), static_cast<std::streamsize>(meta_len));
  if (!is) throw Error("checkpoint: truncated file");
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_str);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("checkpoint: bad metadata: ") +
                             e.what());
  }
  if (!meta.contains("format") || meta["format"] != kCheckpointMagic)
    throw Error("checkpoint: metadata format mismatch");

  Checkpoint ck;
  ck.seed = meta.at("seed").get<uint64_t>();
  ck.epoch = meta.at("epoch").get<int>();
  ck.config = meta.value("config", nlohmann::json::object());
  for (const auto& e : meta.at("arrays")) {
    const std::string name = e.at("name").get<std::string>();
    const std::vector<int> shape = e.at("shape").get<std::vector<int>>();
    nn::Tensor t(shape);
    for (double& d : t.data) d = std::bit_cast<double>(get_u64_le(is));
    ck.arrays.emplace_back(name, std::move(t));
  }
  return ck;
}

void append_store_arrays(const nn::ParamStore& store, Checkpoint* ck) {
  for (const std::string& name : store.names())
    ck->arrays.emplace_back(name, store.value(name));
}

void restore_store_arrays(const Checkpoint& ck, nn::ParamStore* store) {
  for (const std::string& name : store->names()) {
    const nn::Tensor* src = ck.find(name);
    if (src == nullptr)
      throw Error("checkpoint: missing parameter '" + name + "'");
    nn::Tensor& dst = store->value(name);
    if (src->shape != dst.shape)
      throw Error("checkpoint: shape mismatch for '" + name +
                               "': file has " + src->shape_str() +
                               ", model wants " + dst.shape_str());
    dst.data = src->data;
  }
}

}  // namespace model
}  // namespace avsqa
