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

#include <cstdint>
#include <span>
#include <string>

#include "json.hpp"
#include "kdpe/kernel.hpp"

namespace kdpe {

struct LatencyStats {
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p99_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
};

/// Nearest-rank percentiles over the samples (milliseconds).
LatencyStats summarize(std::span<const double> samples_ms);

struct BenchResult {
  std::size_t n = 0;
  std::size_t t = 0;
  int repetitions = 0;
  LatencyStats kde;     // score_population at the default step
  LatencyStats tr_kde;  // score_trajectories
  std::string machine;
};

/// Times scoring on a bimodal synthetic population with outliers; the
/// population is generated once, outside the timed region.
BenchResult run_bench(std::size_t n, std::size_t t, int repetitions, std::uint64_t seed = 0,
                      const Bandwidths<double>& h = {});

nlohmann::json bench_to_json(const BenchResult& r);

/// CPU model from /proc/cpuinfo plus hardware concurrency, best effort.
std::string machine_description();

}  // namespace kdpe
