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

// Synthetic populations: a Gaussian mixture over actions that stands in for
// a generative policy sampler, and the fixed six-action planar scene used
// for density heatmaps.

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "kdpe/population.hpp"

namespace kdpe {

inline constexpr double kGripperOpen = -1.0;
inline constexpr double kGripperClosed = 1.0;

struct MixtureMode {
  double weight = 1.0;
  Action<double> mean;
  double spread_pos = 0.0;
  double spread_rot = 0.0;
  double spread_grip = 0.0;
  /// Position drift added per step, so trajectories move through space.
  Vector3<double> velocity = Vector3<double>::Zero();
};

struct MixtureSpec {
  std::vector<MixtureMode> modes;
  double outlier_rate = 0.0;
  /// Displacement of an outlier's scored action, in units of
  /// reference_sigma_pos.
  double outlier_offset = 10.0;
  double reference_sigma_pos = 0.05;
  /// Step displaced for outliers; negative means the last step.
  int scored_step = -1;

  /// Throws InvalidSpec.
  void validate() const;
};

/// Draw order per trajectory (all from one Rng seeded with `seed`):
/// mode choice (one uniform), then for each step position (3 normals),
/// rotation tangent (3 normals), gripper (1 normal), then the outlier
/// decision (one uniform) and, for outliers, a direction (3 normals).
/// Each payload records the mode index as "mode=<k>", with ";outlier"
/// appended for displaced trajectories.
Population generate(const MixtureSpec& spec, std::size_t n, std::size_t t, std::uint64_t seed);

MixtureSpec mixture_spec_from_json(const nlohmann::json& j);
nlohmann::json mixture_spec_to_json(const MixtureSpec& spec);

struct Fig1Pose {
  double x;
  double y;
  double angle_deg;
  double gripper;
};

/// Poses of the planar scene: three open grippers along y = 0.3 at 0, 40
/// and 90 degrees, three closed grippers along y = 0.7 at 0, 50 and 90
/// degrees, spaced 0.3 apart in x. All rotations are about +Z, z = 0.
const std::vector<Fig1Pose>& fig1_poses();
Population fig1_population();

}  // namespace kdpe
