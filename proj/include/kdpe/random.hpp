// Copyright 2026 The KDPE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace kdpe {

/// Deterministic random source for population generation and the uniform
/// baseline. The engine is std::mt19937_64, whose output sequence is fixed
/// by the C++ standard; the conversions below are written out explicitly
/// (std distributions are implementation-defined), so a seed yields the
/// same draws on every platform:
///   uniform()  = (next() >> 11) * 2^-53            in [0, 1)
///   normal()   = Box-Muller on (1 - uniform(), uniform()), cosine branch
///                first, sine branch cached for the following call
///   index(n)   = floor(uniform() * n)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double normal();
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_normal_;
};

}  // namespace kdpe
