// Copyright 2026 The qprecode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

#include "qprecode/types.hpp"

namespace qprecode {

// Seeded random source. Substreams are derived from (master seed, indices)
// through a splitmix64 mix, so any (trial, point) pair can be regenerated
// without replaying the ones before it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng substream(std::uint64_t master, std::uint64_t a,
                       std::uint64_t b = 0, std::uint64_t c = 0);

  double normal();
  // CN(0, variance): two independent N(0, variance/2) draws.
  cd complex_normal(double variance = 1.0);
  double uniform();
  std::uint64_t bits();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qprecode
