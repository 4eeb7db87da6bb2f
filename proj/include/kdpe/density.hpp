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

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kdpe/error.hpp"
#include "kdpe/kernel.hpp"
#include "kdpe/log_sum_exp.hpp"
#include "kdpe/population.hpp"

namespace kdpe {

enum class Method : std::uint8_t { kKdpe = 0, kKdpeOod = 1, kUniform = 2, kTrKdpe = 3 };

/// CLI spelling: kdpe, kdpe-ood, uniform, tr-kdpe.
std::string_view to_string(Method m);
/// Accepts the CLI spelling and the underscore form (kdpe_ood, tr_kdpe).
std::optional<Method> parse_method(std::string_view name);

/// Last step of the 8-action execution horizon, clamped to the stored
/// horizon.
inline constexpr int kExecutionHorizon = 8;
int default_scored_step(const Population& pop);

struct DensityReport {
  std::vector<double> log_densities;
  std::size_t selected_index = 0;
  Method method = Method::kKdpe;
  /// -1 for trajectory-level scoring.
  int scored_step = 0;
  Bandwidths<double> bandwidths;
};

/// log((1/N) sum_i k(query, support_i)). Throws EmptySupport.
template <typename Scalar>
Scalar kde_log_density(const Action<Scalar>& query, std::span<const Action<Scalar>> support,
                       const Bandwidths<Scalar>& h, Normalization norm = Normalization::kFull) {
  if (support.empty()) throw Error(ErrorKind::kEmptySupport, "KDE support is empty");
  std::vector<Scalar> terms;
  terms.reserve(support.size());
  for (const auto& s : support) terms.push_back(log_kernel(query, s, h, norm));
  return log_sum_exp<Scalar>(terms) - std::log(static_cast<Scalar>(support.size()));
}

/// Density of every trajectory's action at `step` under the KDE of all
/// actions at that step (self term included). Throws StepOutOfRange.
std::vector<double> score_population(const Population& pop, int step, const Bandwidths<double>& h,
                                     Normalization norm = Normalization::kFull);

/// Markov-factorized trajectory density:
///   log p(a_1) + sum_{t>=2} [log g(a_{t-1}, a_t) - log h(a_{t-1})]
/// with joint and marginal KDEs over the population's steps t-1 and t.
double tr_kde_log_density(std::size_t traj_index, const Population& pop,
                          const Bandwidths<double>& h,
                          Normalization norm = Normalization::kFull);
std::vector<double> score_trajectories(const Population& pop, const Bandwidths<double>& h,
                                       Normalization norm = Normalization::kFull);

/// Lowest index attaining the max / min.
std::size_t argmax(std::span<const double> xs);
std::size_t argmin(std::span<const double> xs);

/// kdpe: argmax at `step`; kdpe-ood: argmin; uniform: one seeded draw
/// (densities are still reported); tr-kdpe: delegates to select_tr and
/// ignores `step`. A negative step selects default_scored_step.
DensityReport select(const Population& pop, Method method, int step, const Bandwidths<double>& h,
                     std::uint64_t seed = 0);
DensityReport select_tr(const Population& pop, const Bandwidths<double>& h);

}  // namespace kdpe
