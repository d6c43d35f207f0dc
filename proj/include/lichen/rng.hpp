// Copyright 2026 The lichenwatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LICHEN_RNG_HPP_
#define LICHEN_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace lichen {

// All randomness in the toolkit flows through this wrapper. The generator is
// std::mt19937 (its output sequence is fixed by the C++ standard) and the
// bounded draw below is spelled out explicitly, so shuffles and samples
// reproduce bit-for-bit across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(uint32_t(seed ^ (seed >> 32))) {}

  /// Uniform integer in [0, n) by modulo reduction of the raw 32-bit draw.
  uint32_t below(uint32_t n) { return n == 0 ? 0 : gen_() % n; }

  /// Uniform real in [0, 1).
  double uniform() { return double(gen_()) / 4294967296.0; }

  /// Uniform real in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  uint32_t raw() { return gen_(); }

  /// Fisher-Yates, iterating from the back.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = below(uint32_t(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937 gen_;
};

}  // namespace lichen

#endif  // LICHEN_RNG_HPP_
