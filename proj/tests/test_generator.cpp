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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kdpe/density.hpp"
#include "kdpe/generator.hpp"
#include "kdpe/random.hpp"

namespace kdpe {
namespace {

MixtureSpec single_mode(double spread) {
  MixtureSpec spec;
  MixtureMode m;
  m.mean.position = {0.3, -0.2, 0.5};
  m.mean.rotation = so3::rot_z(0.7);
  m.mean.gripper = kGripperClosed;
  m.spread_pos = m.spread_rot = m.spread_grip = spread;
  spec.modes = {m};
  return spec;
}

std::size_t mode_of(const Trajectory& t) {
  return static_cast<std::size_t>(t.payload().at(5) - '0');
}

TEST(Rng, PinnedSequence) {
  // std::mt19937_64 is fully specified: the 10000th output for the default
  // seed is fixed by the standard.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ull);

  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.normal(), b.normal());
  }
  Rng u(5);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    ASSERT_LT(u.index(7), 7u);
  }
}

TEST(Rng, NormalMoments) {
  Rng r(9);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(Generate, ZeroSpreadReproducesTheMean) {
  const MixtureSpec spec = single_mode(0.0);
  const Population pop = generate(spec, 10, 3, 1);
  for (const auto& t : pop.trajectories()) {
    for (const auto& a : t.actions()) {
      EXPECT_EQ(a.position, spec.modes[0].mean.position);
      EXPECT_LT((a.rotation - spec.modes[0].mean.rotation).norm(), 1e-15);
      EXPECT_EQ(a.gripper, kGripperClosed);
    }
    EXPECT_EQ(t.rows(), pop[0].rows());
  }
  EXPECT_EQ(select(pop, Method::kKdpe, -1, Bandwidths<double>{}).selected_index, 0u);
}

TEST(Generate, EqualModesSplitBinomially) {
  MixtureSpec spec;
  MixtureMode left;
  left.weight = 0.5;
  left.spread_pos = 0.01;
  MixtureMode right = left;
  right.mean.position = {20 * 0.05, 0.0, 0.0};
  spec.modes = {left, right};
  const std::size_t n = 1000;
  const Population pop = generate(spec, n, 1, 2024);
  std::size_t left_count = 0;
  for (const auto& t : pop.trajectories()) {
    const bool is_left = mode_of(t) == 0;
    left_count += is_left;
    EXPECT_EQ(t[0].position.x() < 0.5, is_left);
  }
  EXPECT_LE(std::abs(static_cast<double>(left_count) - n / 2.0), 3.0 * std::sqrt(n * 0.25));
}

TEST(Generate, OutliersAreDisplacedAtTheScoredStep) {
  MixtureSpec spec = single_mode(0.0);
  spec.outlier_rate = 0.0;
  for (const auto& t : generate(spec, 200, 4, 3).trajectories()) {
    EXPECT_EQ(t.payload().find("outlier"), std::string::npos);
  }
  spec.outlier_rate = 0.3;
  spec.outlier_offset = 12.0;
  const Population pop = generate(spec, 200, 4, 3);
  int outliers = 0;
  for (const auto& t : pop.trajectories()) {
    const bool flagged = t.payload().find("outlier") != std::string::npos;
    outliers += flagged;
    const double shift = (t[3].position - spec.modes[0].mean.position).norm();
    EXPECT_NEAR(shift, flagged ? 12.0 * 0.05 : 0.0, 1e-12);
    EXPECT_EQ(t[0].position, spec.modes[0].mean.position);
  }
  EXPECT_GT(outliers, 30);
  EXPECT_LT(outliers, 90);
}

TEST(Generate, DeterministicPerSeed) {
  MixtureSpec spec = single_mode(0.05);
  spec.outlier_rate = 0.1;
  const auto a = encode_population(generate(spec, 50, 8, 77));
  const auto b = encode_population(generate(spec, 50, 8, 77));
  const auto c = encode_population(generate(spec, 50, 8, 78));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Generate, RotationSpreadFollowsTangentGaussian) {
  const MixtureSpec spec = single_mode(0.1);
  const Population pop = generate(spec, 2000, 1, 5);
  double sq = 0.0;
  for (const auto& t : pop.trajectories()) {
    const double th = so3::geodesic_distance(t[0].rotation, spec.modes[0].mean.rotation);
    sq += th * th;
  }
  // E[|w|^2] = 3 spread^2 for w ~ N(0, spread^2 I3).
  EXPECT_NEAR(sq / 2000.0, 3 * 0.01, 0.003);
}

TEST(Generate, InvalidSpecs) {
  auto kind = [](const MixtureSpec& s, std::size_t n = 5, std::size_t t = 2) {
    try {
      generate(s, n, t, 0);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kInvalidArgument;
  };
  MixtureSpec spec = single_mode(0.1);
  spec.modes[0].weight = 0.7;
  EXPECT_EQ(kind(spec), ErrorKind::kInvalidSpec);
  EXPECT_EQ(kind(MixtureSpec{}), ErrorKind::kInvalidSpec);
  spec = single_mode(0.1);
  spec.outlier_rate = 1.0;
  EXPECT_EQ(kind(spec), ErrorKind::kInvalidSpec);
  spec = single_mode(-0.1);
  EXPECT_EQ(kind(spec), ErrorKind::kInvalidSpec);
  EXPECT_EQ(kind(single_mode(0.1), 0), ErrorKind::kInvalidSpec);
  EXPECT_EQ(kind(single_mode(0.1), 3, 0), ErrorKind::kInvalidSpec);
}

TEST(MixtureJson, RoundTripAndValidation) {
  MixtureSpec spec = single_mode(0.02);
  spec.modes[0].velocity = {0.01, 0.0, 0.0};
  spec.outlier_rate = 0.05;
  const MixtureSpec back = mixture_spec_from_json(mixture_spec_to_json(spec));
  EXPECT_EQ(encode_population(generate(back, 20, 4, 9)), encode_population(generate(spec, 20, 4, 9)));

  const auto parsed = mixture_spec_from_json(nlohmann::json::parse(R"({
    "modes": [{"weight": 0.25, "position": [0, 0, 0], "yaw": 0.5, "gripper": -1},
              {"weight": 0.75, "position": [1, 0, 0], "spread": {"pos": 0.01}}]})"));
  EXPECT_EQ(parsed.modes.size(), 2u);
  EXPECT_NEAR(so3::geodesic_distance(parsed.modes[0].mean.rotation, so3::rot_z(0.5)), 0.0, 1e-15);

  EXPECT_THROW(mixture_spec_from_json(nlohmann::json::parse(
                   R"({"modes": [{"weight": 0.5}, {"weight": 0.4}]})")),
               Error);
  EXPECT_THROW(mixture_spec_from_json(nlohmann::json::parse(R"({"modes": 3})")), Error);
  EXPECT_THROW(mixture_spec_from_json(nlohmann::json::parse(
                   R"({"modes": [{"rotation_6d": [1, 0, 0, 2, 0, 0]}]})")),
               Error);
}

TEST(Fig1, Structure) {
  const Population pop = fig1_population();
  EXPECT_EQ(pop.size(), 6u);
  EXPECT_EQ(pop.horizon(), 1u);
  int open = 0;
  int closed = 0;
  for (const auto& t : pop.trajectories()) {
    open += t[0].gripper == kGripperOpen;
    closed += t[0].gripper == kGripperClosed;
    EXPECT_EQ(t[0].position.z(), 0.0);
    // In-plane orientation: the rotation axis is +Z (or identity).
    EXPECT_NEAR(std::abs(t[0].rotation(2, 2)), 1.0, 1e-15);
  }
  EXPECT_EQ(open, 3);
  EXPECT_EQ(closed, 3);
}

}  // namespace
}  // namespace kdpe
