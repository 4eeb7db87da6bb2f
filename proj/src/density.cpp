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

#include "kdpe/density.hpp"

#include <algorithm>

#include "kdpe/random.hpp"

namespace kdpe {
namespace {

std::size_t checked_step(const Population& pop, int step) {
  if (step < 0 || static_cast<std::size_t>(step) >= pop.horizon()) {
    throw Error(ErrorKind::kStepOutOfRange, "step " + std::to_string(step) +
                                                " is outside [0, " +
                                                std::to_string(pop.horizon()) + ")");
  }
  return static_cast<std::size_t>(step);
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kKdpe: return "kdpe";
    case Method::kKdpeOod: return "kdpe-ood";
    case Method::kUniform: return "uniform";
    case Method::kTrKdpe: return "tr-kdpe";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "kdpe") return Method::kKdpe;
  if (name == "kdpe-ood" || name == "kdpe_ood") return Method::kKdpeOod;
  if (name == "uniform") return Method::kUniform;
  if (name == "tr-kdpe" || name == "tr_kdpe") return Method::kTrKdpe;
  return std::nullopt;
}

int default_scored_step(const Population& pop) {
  return static_cast<int>(std::min<std::size_t>(kExecutionHorizon, pop.horizon())) - 1;
}

std::vector<double> score_population(const Population& pop, int step, const Bandwidths<double>& h,
                                     Normalization norm) {
  h.check();
  const std::vector<Action<double>> actions = pop.actions_at(checked_step(pop, step));
  std::vector<double> out;
  out.reserve(actions.size());
  for (const auto& a : actions) {
    out.push_back(kde_log_density<double>(a, actions, h, norm));
  }
  return out;
}

double tr_kde_log_density(std::size_t traj_index, const Population& pop,
                          const Bandwidths<double>& h, Normalization norm) {
  h.check();
  if (traj_index >= pop.size()) {
    throw Error(ErrorKind::kInvalidArgument, "trajectory index out of range");
  }
  const std::size_t n = pop.size();
  const Trajectory& query = pop[traj_index];

  // prev[j] = log k(a_{t-1}, a^j_{t-1}), the marginal term at step t.
  std::vector<double> prev(n);
  std::vector<double> cur(n);
  std::vector<double> joint(n);
  for (std::size_t j = 0; j < n; ++j) prev[j] = log_kernel(query[0], pop[j][0], h, norm);
  double total = log_sum_exp<double>(prev) - std::log(static_cast<double>(n));

  for (std::size_t t = 1; t < pop.horizon(); ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      cur[j] = log_kernel(query[t], pop[j][t], h, norm);
      joint[j] = prev[j] + cur[j];
    }
    total += log_sum_exp<double>(joint) - log_sum_exp<double>(prev);
    prev.swap(cur);
  }
  return total;
}

std::vector<double> score_trajectories(const Population& pop, const Bandwidths<double>& h,
                                       Normalization norm) {
  std::vector<double> out;
  out.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) out.push_back(tr_kde_log_density(i, pop, h, norm));
  return out;
}

std::size_t argmax(std::span<const double> xs) {
  return static_cast<std::size_t>(std::max_element(xs.begin(), xs.end()) - xs.begin());
}

std::size_t argmin(std::span<const double> xs) {
  return static_cast<std::size_t>(std::min_element(xs.begin(), xs.end()) - xs.begin());
}

DensityReport select(const Population& pop, Method method, int step, const Bandwidths<double>& h,
                     std::uint64_t seed) {
  if (method == Method::kTrKdpe) return select_tr(pop, h);
  if (step < 0) step = default_scored_step(pop);

  DensityReport report;
  report.method = method;
  report.scored_step = step;
  report.bandwidths = h;
  report.log_densities = score_population(pop, step, h);
  switch (method) {
    case Method::kKdpe:
      report.selected_index = argmax(report.log_densities);
      break;
    case Method::kKdpeOod:
      report.selected_index = argmin(report.log_densities);
      break;
    case Method::kUniform: {
      Rng rng(seed);
      report.selected_index = rng.index(pop.size());
      break;
    }
    case Method::kTrKdpe:
      break;
  }
  return report;
}

DensityReport select_tr(const Population& pop, const Bandwidths<double>& h) {
  DensityReport report;
  report.method = Method::kTrKdpe;
  report.scored_step = -1;
  report.bandwidths = h;
  report.log_densities = score_trajectories(pop, h);
  report.selected_index = argmax(report.log_densities);
  return report;
}

}  // namespace kdpe
