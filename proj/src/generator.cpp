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

#include "kdpe/generator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kdpe/population_json.hpp"
#include "kdpe/random.hpp"

namespace kdpe {
namespace {

Vector3<double> normal3(Rng& rng) {
  const double x = rng.normal();
  const double y = rng.normal();
  const double z = rng.normal();
  return {x, y, z};
}

std::size_t pick_mode(const MixtureSpec& spec, double u) {
  double cumulative = 0.0;
  for (std::size_t k = 0; k < spec.modes.size(); ++k) {
    cumulative += spec.modes[k].weight;
    if (u < cumulative) return k;
  }
  return spec.modes.size() - 1;
}

Vector3<double> vec3(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::kInvalidSpec, "expected 3 numbers");
  return {parse_scalar(j[0]), parse_scalar(j[1]), parse_scalar(j[2])};
}

}  // namespace

void MixtureSpec::validate() const {
  if (modes.empty()) throw Error(ErrorKind::kInvalidSpec, "mixture has no modes");
  double total = 0.0;
  for (const auto& m : modes) {
    if (!(m.weight > 0.0) || !std::isfinite(m.weight)) {
      throw Error(ErrorKind::kInvalidSpec, "mode weights must be positive");
    }
    if (!(m.spread_pos >= 0.0) || !(m.spread_rot >= 0.0) || !(m.spread_grip >= 0.0) ||
        !std::isfinite(m.spread_pos + m.spread_rot + m.spread_grip)) {
      throw Error(ErrorKind::kInvalidSpec, "spreads must be finite and non-negative");
    }
    if (!m.mean.valid() || !m.velocity.allFinite()) {
      throw Error(ErrorKind::kInvalidSpec, "mode mean is not a valid action");
    }
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::kInvalidSpec, "mode weights sum to " + format_scalar(total) + ", not 1");
  }
  if (!(outlier_rate >= 0.0 && outlier_rate < 1.0)) {
    throw Error(ErrorKind::kInvalidSpec, "outlier_rate must lie in [0, 1)");
  }
  if (!std::isfinite(outlier_offset) || outlier_offset < 0.0) {
    throw Error(ErrorKind::kInvalidSpec, "outlier_offset must be finite and non-negative");
  }
  if (!(reference_sigma_pos > 0.0) || !std::isfinite(reference_sigma_pos)) {
    throw Error(ErrorKind::kInvalidSpec, "reference_sigma_pos must be positive");
  }
}

Population generate(const MixtureSpec& spec, std::size_t n, std::size_t t, std::uint64_t seed) {
  spec.validate();
  if (n < 1 || t < 1) throw Error(ErrorKind::kInvalidSpec, "n and t must be at least 1");
  const std::size_t scored =
      spec.scored_step < 0 ? t - 1 : static_cast<std::size_t>(spec.scored_step);
  if (scored >= t) throw Error(ErrorKind::kInvalidSpec, "scored_step is outside the horizon");

  Rng rng(seed);
  std::vector<Trajectory> trajectories;
  trajectories.reserve(n);
  std::vector<Action<double>> actions(t);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = pick_mode(spec, rng.uniform());
    const MixtureMode& mode = spec.modes[k];
    for (std::size_t s = 0; s < t; ++s) {
      Action<double>& a = actions[s];
      a.position = mode.mean.position + static_cast<double>(s) * mode.velocity +
                   mode.spread_pos * normal3(rng);
      const Vector3<double> w = mode.spread_rot * normal3(rng);
      a.rotation = mode.mean.rotation * so3::expmap(w);
      a.gripper = mode.mean.gripper + mode.spread_grip * rng.normal();
    }
    std::string payload = "mode=" + std::to_string(k);
    if (rng.uniform() < spec.outlier_rate) {
      Vector3<double> dir = normal3(rng);
      while (dir.norm() < 1e-12) dir = normal3(rng);
      actions[scored].position += spec.outlier_offset * spec.reference_sigma_pos * dir.normalized();
      payload += ";outlier";
    }
    trajectories.push_back(Trajectory::from_actions(actions, std::move(payload)));
  }
  return Population(std::move(trajectories), "synthetic-seed-" + std::to_string(seed));
}

MixtureSpec mixture_spec_from_json(const nlohmann::json& j) {
  try {
    MixtureSpec spec;
    if (!j.is_object() || !j.contains("modes") || !j.at("modes").is_array()) {
      throw Error(ErrorKind::kInvalidSpec, "spec needs a 'modes' array");
    }
    for (const auto& m : j.at("modes")) {
      MixtureMode mode;
      mode.weight = m.value("weight", 1.0);
      if (m.contains("position")) mode.mean.position = vec3(m.at("position"));
      if (m.contains("rotation_6d")) {
        const auto& r = m.at("rotation_6d");
        if (!r.is_array() || r.size() != 6) {
          throw Error(ErrorKind::kInvalidSpec, "rotation_6d needs 6 numbers");
        }
        Rotation6D<double> r6;
        for (int c = 0; c < 6; ++c) r6(c) = parse_scalar(r[static_cast<std::size_t>(c)]);
        try {
          mode.mean.rotation = so3::from6d(r6);
        } catch (const Error& e) {
          throw Error(ErrorKind::kInvalidSpec, e.what());
        }
      } else if (m.contains("yaw")) {
        mode.mean.rotation = so3::rot_z(parse_scalar(m.at("yaw")));
      }
      mode.mean.gripper = m.value("gripper", 0.0);
      if (m.contains("spread")) {
        const auto& s = m.at("spread");
        mode.spread_pos = s.value("pos", 0.0);
        mode.spread_rot = s.value("rot", 0.0);
        mode.spread_grip = s.value("grip", 0.0);
      }
      if (m.contains("velocity")) mode.velocity = vec3(m.at("velocity"));
      spec.modes.push_back(mode);
    }
    spec.outlier_rate = j.value("outlier_rate", 0.0);
    spec.outlier_offset = j.value("outlier_offset", 10.0);
    spec.reference_sigma_pos = j.value("reference_sigma_pos", 0.05);
    spec.scored_step = j.value("scored_step", -1);
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidSpec, std::string("malformed mixture spec: ") + e.what());
  }
}

nlohmann::json mixture_spec_to_json(const MixtureSpec& spec) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : spec.modes) {
    const Rotation6D<double> r6 = so3::to6d(m.mean.rotation);
    modes.push_back({
        {"weight", m.weight},
        {"position", {m.mean.position.x(), m.mean.position.y(), m.mean.position.z()}},
        {"rotation_6d", {r6(0), r6(1), r6(2), r6(3), r6(4), r6(5)}},
        {"gripper", m.mean.gripper},
        {"spread", {{"pos", m.spread_pos}, {"rot", m.spread_rot}, {"grip", m.spread_grip}}},
        {"velocity", {m.velocity.x(), m.velocity.y(), m.velocity.z()}},
    });
  }
  return {{"modes", std::move(modes)},
          {"outlier_rate", spec.outlier_rate},
          {"outlier_offset", spec.outlier_offset},
          {"reference_sigma_pos", spec.reference_sigma_pos},
          {"scored_step", spec.scored_step}};
}

const std::vector<Fig1Pose>& fig1_poses() {
  static const std::vector<Fig1Pose> poses = {
      {0.2, 0.3, 0.0, kGripperOpen},   {0.5, 0.3, 40.0, kGripperOpen},
      {0.8, 0.3, 90.0, kGripperOpen},  {0.2, 0.7, 0.0, kGripperClosed},
      {0.5, 0.7, 50.0, kGripperClosed}, {0.8, 0.7, 90.0, kGripperClosed},
  };
  return poses;
}

Population fig1_population() {
  std::vector<Trajectory> trajectories;
  for (const auto& p : fig1_poses()) {
    Action<double> a;
    a.position = {p.x, p.y, 0.0};
    a.rotation = so3::rot_z(p.angle_deg * std::numbers::pi / 180.0);
    a.gripper = p.gripper;
    const Action<double> one[] = {a};
    trajectories.push_back(Trajectory::from_actions(one));
  }
  return Population(std::move(trajectories), "fig1-planar");
}

}  // namespace kdpe
