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

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace kdpe {

// log(sum_i exp(x_i)), shifted by the maximum. Summation runs in index
// order so results do not depend on how callers parallelize around it.
// Returns -inf for an empty range.
template <typename Scalar>
Scalar log_sum_exp(std::span<const Scalar> xs) {
  if (xs.empty()) return -std::numeric_limits<Scalar>::infinity();
  const Scalar m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  Scalar sum = Scalar(0);
  for (const Scalar x : xs) sum += std::exp(x - m);
  return m + std::log(sum);
}

}  // namespace kdpe
