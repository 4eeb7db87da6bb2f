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

#include "kdpe/heatmap.hpp"

#include <cmath>

#include "kdpe/density.hpp"

namespace kdpe {

std::string_view to_string(Plane p) {
  switch (p) {
    case Plane::kXY: return "xy";
    case Plane::kXZ: return "xz";
    case Plane::kYZ: return "yz";
  }
  return "xy";
}

std::optional<Plane> parse_plane(std::string_view name) {
  if (name == "xy") return Plane::kXY;
  if (name == "xz") return Plane::kXZ;
  if (name == "yz") return Plane::kYZ;
  return std::nullopt;
}

void HeatmapRequest::validate() const {
  if (resolution_x < 2 || resolution_y < 2) {
    throw Error(ErrorKind::kInvalidArgument, "heatmap resolution must be at least 2 per axis");
  }
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw Error(ErrorKind::kInvalidArgument, "heatmap bounds must satisfy min < max");
  }
  if (!std::isfinite(x_min + x_max + y_min + y_max + probe_angle + probe_gripper + plane_offset)) {
    throw Error(ErrorKind::kInvalidArgument, "heatmap parameters must be finite");
  }
  bandwidths.check();
}

double HeatmapGrid::x_at(int col) const {
  const auto& r = request;
  return r.x_min + (r.x_max - r.x_min) * col / (r.resolution_x - 1);
}

double HeatmapGrid::y_at(int row) const {
  const auto& r = request;
  return r.y_min + (r.y_max - r.y_min) * row / (r.resolution_y - 1);
}

std::pair<int, int> HeatmapGrid::argmax() const {
  int best_row = 0;
  int best_col = 0;
  for (int row = 0; row < values.rows(); ++row) {
    for (int col = 0; col < values.cols(); ++col) {
      if (values(row, col) > values(best_row, best_col)) {
        best_row = row;
        best_col = col;
      }
    }
  }
  return {best_row, best_col};
}

Action<double> probe_action(const HeatmapRequest& req, double u, double v) {
  Action<double> a;
  a.gripper = req.probe_gripper;
  switch (req.plane) {
    case Plane::kXY:
      a.position = {u, v, req.plane_offset};
      a.rotation = Eigen::AngleAxisd(req.probe_angle, Vector3<double>::UnitZ()).toRotationMatrix();
      break;
    case Plane::kXZ:
      a.position = {u, req.plane_offset, v};
      a.rotation = Eigen::AngleAxisd(req.probe_angle, Vector3<double>::UnitY()).toRotationMatrix();
      break;
    case Plane::kYZ:
      a.position = {req.plane_offset, u, v};
      a.rotation = Eigen::AngleAxisd(req.probe_angle, Vector3<double>::UnitX()).toRotationMatrix();
      break;
  }
  return a;
}

HeatmapGrid compute_heatmap(const Population& pop, const HeatmapRequest& req) {
  req.validate();
  if (req.step < 0 || static_cast<std::size_t>(req.step) >= pop.horizon()) {
    throw Error(ErrorKind::kStepOutOfRange, "heatmap step is outside the horizon");
  }
  const std::vector<Action<double>> support = pop.actions_at(static_cast<std::size_t>(req.step));
  HeatmapGrid grid{req, Eigen::MatrixXd(req.resolution_y, req.resolution_x)};
  for (int row = 0; row < req.resolution_y; ++row) {
    for (int col = 0; col < req.resolution_x; ++col) {
      const Action<double> probe = probe_action(req, grid.x_at(col), grid.y_at(row));
      grid.values(row, col) = kde_log_density<double>(probe, support, req.bandwidths);
    }
  }
  return grid;
}

}  // namespace kdpe
