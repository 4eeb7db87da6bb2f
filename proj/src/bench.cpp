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

#include "kdpe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>
#include <vector>

#include "kdpe/density.hpp"
#include "kdpe/generator.hpp"

namespace kdpe {
namespace {

MixtureSpec bench_spec() {
  MixtureSpec spec;
  MixtureMode left;
  left.weight = 0.5;
  left.mean.position = {0.4, -0.1, 0.2};
  left.mean.rotation = so3::rot_z(0.3);
  left.mean.gripper = kGripperOpen;
  left.spread_pos = 0.02;
  left.spread_rot = 0.1;
  left.spread_grip = 0.05;
  left.velocity = {0.01, 0.0, -0.005};
  MixtureMode right = left;
  right.mean.position = {0.4, 0.15, 0.2};
  right.mean.rotation = so3::rot_z(-0.4);
  right.velocity = {0.01, 0.005, -0.005};
  spec.modes = {left, right};
  spec.outlier_rate = 0.05;
  return spec;
}

template <typename Fn>
LatencyStats time_runs(int repetitions, Fn&& fn) {
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(repetitions));
  for (int r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
    samples.push_back(dt.count());
  }
  return summarize(samples);
}

nlohmann::json stats_json(const LatencyStats& s) {
  return {{"mean_ms", s.mean_ms}, {"p50_ms", s.p50_ms}, {"p99_ms", s.p99_ms},
          {"min_ms", s.min_ms},   {"max_ms", s.max_ms}};
}

}  // namespace

LatencyStats summarize(std::span<const double> samples_ms) {
  LatencyStats s;
  if (samples_ms.empty()) return s;
  std::vector<double> sorted(samples_ms.begin(), samples_ms.end());
  std::sort(sorted.begin(), sorted.end());
  const auto rank = [&](double p) {
    const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
    return sorted[std::clamp<std::size_t>(k, 1, sorted.size()) - 1];
  };
  s.mean_ms = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  s.p50_ms = rank(0.50);
  s.p99_ms = rank(0.99);
  s.min_ms = sorted.front();
  s.max_ms = sorted.back();
  return s;
}

BenchResult run_bench(std::size_t n, std::size_t t, int repetitions, std::uint64_t seed,
                      const Bandwidths<double>& h) {
  if (n < 1 || t < 1 || repetitions < 1) {
    throw Error(ErrorKind::kInvalidArgument, "n, t and repetitions must be at least 1");
  }
  const Population pop = generate(bench_spec(), n, t, seed);
  const int step = default_scored_step(pop);
  volatile double sink = 0.0;

  BenchResult r;
  r.n = n;
  r.t = t;
  r.repetitions = repetitions;
  r.kde = time_runs(repetitions, [&] { sink = sink + score_population(pop, step, h).front(); });
  r.tr_kde = time_runs(repetitions, [&] { sink = sink + score_trajectories(pop, h).front(); });
  r.machine = machine_description();
  return r;
}

nlohmann::json bench_to_json(const BenchResult& r) {
  return {{"n", r.n},
          {"t", r.t},
          {"repetitions", r.repetitions},
          {"kde", stats_json(r.kde)},
          {"tr_kde", stats_json(r.tr_kde)},
          {"machine", r.machine}};
}

std::string machine_description() {
  std::string model = "unknown CPU";
  std::ifstream in("/proc/cpuinfo");
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with("model name")) {
      if (const auto colon = line.find(':'); colon != std::string::npos) {
        model = line.substr(line.find_first_not_of(' ', colon + 1));
      }
      break;
    }
  }
  return model + ", " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads";
}

}  // namespace kdpe
