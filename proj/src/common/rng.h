// common/rng.h

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

#ifndef AVSQA_COMMON_RNG_H_
#define AVSQA_COMMON_RNG_H_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace avsqa {

// Counter-seedable xoshiro256** generator with hand-rolled distributions.
// Every random stream in the pipeline is derived from (master seed, path),
// never from call order across components, so corpus construction and
// training are reproducible regardless of scheduling.
class Rng {
 public:
  explicit Rng(uint64_t seed) { reseed(seed); }

  // Derives an independent stream from a master seed and a path of indices,
  // e.g. {speaker, utterance} or {epoch, step, layer}.
  static Rng substream(uint64_t master, std::initializer_list<uint64_t> path) {
    uint64_t s = splitmix(master ^ 0x9e3779b97f4a7c15ull);
    for (uint64_t p : path) s = splitmix(s ^ splitmix(p + 0x632be59bd9b4e019ull));
    return Rng(s);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive on both ends.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  // Box-Muller; both values consumed in a fixed order.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = next_u64() % i;
      std::swap(v[i - 1], v[j]);
    }
  }

  static uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

 private:
  void reseed(uint64_t seed) {
    uint64_t x = seed;
    for (auto& s : s_) {
      x = splitmix(x);
      s = x;
    }
    for (int i = 0; i < 8; ++i) next_u64();
  }

  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t s_[4] = {};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace avsqa

#endif  // AVSQA_COMMON_RNG_H_
