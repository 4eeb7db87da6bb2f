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

#include "kdpe/report.hpp"

#include <chrono>
#include <sstream>

#include "kdpe/config.hpp"
#include "kdpe/population_json.hpp"

namespace kdpe {

nlohmann::json report_to_json(const DensityReport& report, const Population& pop,
                              std::optional<std::uint64_t> request_id) {
  nlohmann::json j = {
      {"method", to_string(report.method)},
      {"selected_index", report.selected_index},
      {"scored_step", report.scored_step},
      {"n", pop.size()},
      {"t", pop.horizon()},
      {"log_densities", report.log_densities},
      {"bandwidths", bandwidths_to_json(report.bandwidths)},
      {"observation_id", pop.observation_id()},
      {"selected_payload_hex", hex_encode(pop[report.selected_index].payload())},
  };
  if (request_id) j["request_id"] = *request_id;
  return j;
}

nlohmann::json run_selection(const Population& pop, Method method, int step,
                             const Bandwidths<double>& h, std::uint64_t seed,
                             std::optional<std::uint64_t> request_id) {
  const auto start = std::chrono::steady_clock::now();
  const DensityReport report = select(pop, method, step, h, seed);
  const std::chrono::duration<double, std::milli> elapsed =
      std::chrono::steady_clock::now() - start;
  nlohmann::json j = report_to_json(report, pop, request_id);
  j["timing"] = {{"score_ms", elapsed.count()}};
  return j;
}

nlohmann::json error_to_json(ErrorKind kind, const std::string& message,
                             std::optional<std::uint64_t> request_id) {
  nlohmann::json j = {{"error", {{"kind", to_string(kind)}, {"message", message}}}};
  if (request_id) j["request_id"] = *request_id;
  return j;
}

nlohmann::json heatmap_to_json(const HeatmapGrid& grid) {
  const HeatmapRequest& r = grid.request;
  nlohmann::json values = nlohmann::json::array();
  for (int row = 0; row < grid.values.rows(); ++row) {
    nlohmann::json line = nlohmann::json::array();
    for (int col = 0; col < grid.values.cols(); ++col) line.push_back(grid.values(row, col));
    values.push_back(std::move(line));
  }
  const auto [arg_row, arg_col] = grid.argmax();
  return {
      {"request",
       {{"x_min", r.x_min},
        {"x_max", r.x_max},
        {"y_min", r.y_min},
        {"y_max", r.y_max},
        {"resolution_x", r.resolution_x},
        {"resolution_y", r.resolution_y},
        {"probe_angle", r.probe_angle},
        {"probe_gripper", r.probe_gripper},
        {"plane", to_string(r.plane)},
        {"plane_offset", r.plane_offset},
        {"step", r.step},
        {"bandwidths", bandwidths_to_json(r.bandwidths)}}},
      {"log_densities", std::move(values)},
      {"argmax",
       {{"row", arg_row},
        {"col", arg_col},
        {"x", grid.x_at(arg_col)},
        {"y", grid.y_at(arg_row)},
        {"log_density", grid.values(arg_row, arg_col)}}},
  };
}

std::string heatmap_to_csv(const HeatmapGrid& grid) {
  std::ostringstream out;
  out << "y\\x";
  for (int col = 0; col < grid.values.cols(); ++col) out << ',' << format_scalar(grid.x_at(col));
  out << '\n';
  for (int row = 0; row < grid.values.rows(); ++row) {
    out << format_scalar(grid.y_at(row));
    for (int col = 0; col < grid.values.cols(); ++col) {
      out << ',' << format_scalar(grid.values(row, col));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace kdpe
