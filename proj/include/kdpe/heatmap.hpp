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

// Density grids over a plane of probe actions, for visual inspection of
// the KDE.

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "kdpe/kernel.hpp"
#include "kdpe/population.hpp"

namespace kdpe {

/// Probe plane; the probe rotation turns about the plane normal
/// (+Z for xy, +Y for xz, +X for yz).
enum class Plane { kXY, kXZ, kYZ };

std::string_view to_string(Plane p);
std::optional<Plane> parse_plane(std::string_view name);

struct HeatmapRequest {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  int resolution_x = 64;
  int resolution_y = 64;
  /// In-plane probe rotation, radians.
  double probe_angle = 0.0;
  double probe_gripper = 0.0;
  Plane plane = Plane::kXY;
  /// Coordinate along the plane normal.
  double plane_offset = 0.0;
  /// Population step whose actions form the KDE support.
  int step = 0;
  Bandwidths<double> bandwidths;

  /// Throws InvalidArgument.
  void validate() const;
};

struct HeatmapGrid {
  HeatmapRequest request;
  /// values(row, col): row indexes the second plane axis, col the first.
  Eigen::MatrixXd values;

  double x_at(int col) const;
  double y_at(int row) const;
  /// (row, col) of the largest value; lowest row-major index on ties.
  std::pair<int, int> argmax() const;
};

/// Probe action at plane coordinates (u, v).
Action<double> probe_action(const HeatmapRequest& req, double u, double v);

HeatmapGrid compute_heatmap(const Population& pop, const HeatmapRequest& req);

}  // namespace kdpe
