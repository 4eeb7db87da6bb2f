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
#include <optional>
#include <string>

#include "json.hpp"
#include "kdpe/density.hpp"
#include "kdpe/heatmap.hpp"

namespace kdpe {

/// {"method", "selected_index", "scored_step", "n", "t", "log_densities",
///  "bandwidths", "observation_id", "selected_payload_hex"[, "request_id"]}.
/// Wall-clock fields are added by callers under "timing".
nlohmann::json report_to_json(const DensityReport& report, const Population& pop,
                              std::optional<std::uint64_t> request_id = std::nullopt);

/// Runs select() and returns its report with a "timing" object
/// ({"score_ms": ...}). Shared by the CLI and the server.
nlohmann::json run_selection(const Population& pop, Method method, int step,
                             const Bandwidths<double>& h, std::uint64_t seed,
                             std::optional<std::uint64_t> request_id = std::nullopt);

nlohmann::json error_to_json(ErrorKind kind, const std::string& message,
                             std::optional<std::uint64_t> request_id = std::nullopt);

nlohmann::json heatmap_to_json(const HeatmapGrid& grid);
/// Header line "y\\x,<x_0>,...", then one row per y value.
std::string heatmap_to_csv(const HeatmapGrid& grid);

}  // namespace kdpe
