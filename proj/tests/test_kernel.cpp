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
#include <random>

#include "kdpe/kernel.hpp"
#include "oracles.hpp"

namespace kdpe {
namespace {

using testing::random_rotation;

// (2 pi)^(-7/2) |H|^(-1/2) for (0.05, 0.25, 1.0), evaluated with 40-digit
// arithmetic.
constexpr double kPeak = 823.4560443664596316966608331209425142879;
constexpr double kLogPeak = 6.713510171588935644346755302337358256453;
constexpr double kPeakOneSigma = 499.4513378339442979939853536137901833621;

Action<double> random_action(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Action<double> a;
  a.position = {u(rng), u(rng), u(rng)};
  a.rotation = random_rotation(rng);
  a.gripper = u(rng);
  return a;
}

TEST(Kernel, DefaultBandwidthsFromHyperparameterTable) {
  const Bandwidths<double> h;
  EXPECT_EQ(h.sigma_pos, 0.05);
  EXPECT_EQ(h.sigma_rot, 0.25);
  EXPECT_EQ(h.sigma_grip, 1.0);
}

TEST(Kernel, SelfValueMatchesOracle) {
  const Action<double> a;
  const Bandwidths<double> h;
  EXPECT_NEAR(log_kernel(a, a, h), kLogPeak, 1e-12);
  EXPECT_NEAR(kernel(a, a, h) / kPeak, 1.0, 1e-12);
  EXPECT_NEAR(static_cast<double>(testing::kernel_peak(0.05L, 0.25L, 1.0L)) / kPeak, 1.0, 1e-15);
}

TEST(Kernel, OneSigmaStepsDropHalfANat) {
  const Bandwidths<double> h;
  const Action<double> a;
  Action<double> b = a;
  b.position.x() += h.sigma_pos;
  EXPECT_NEAR(log_kernel(a, b, h), kLogPeak - 0.5, 1e-12);
  EXPECT_NEAR(kernel(a, b, h) / kPeakOneSigma, 1.0, 1e-12);

  Action<double> c = a;
  c.rotation = so3::rot_z(h.sigma_rot);
  EXPECT_NEAR(log_kernel(a, c, h), kLogPeak - 0.5, 1e-12);

  Action<double> d = a;
  d.gripper += h.sigma_grip;
  EXPECT_NEAR(log_kernel(a, d, h), kLogPeak - 0.5, 1e-12);
}

TEST(Delta, Components) {
  Action<double> a;
  EXPECT_EQ(delta(a, a).dt, Vector3<double>::Zero());
  EXPECT_EQ(delta(a, a).drot, Vector3<double>::Zero());
  EXPECT_EQ(delta(a, a).dg, 0.0);

  Action<double> b = a;
  b.position.x() += 0.05;
  const auto d = delta(b, a);
  EXPECT_DOUBLE_EQ(d.dt.x(), 0.05);
  EXPECT_EQ(d.drot, Vector3<double>::Zero());

  Action<double> r5 = a;
  Action<double> r3 = a;
  r5.rotation = so3::rot_z(0.5);
  r3.rotation = so3::rot_z(0.3);
  EXPECT_LT((delta(r5, r3).drot - Vector3<double>(0, 0, 0.2)).norm(), 1e-15);
}

TEST(Kernel, ExactSymmetry) {
  std::mt19937_64 rng(21);
  const Bandwidths<double> h;
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_action(rng);
    const auto b = random_action(rng);
    EXPECT_EQ(log_kernel(a, b, h), log_kernel(b, a, h));
    EXPECT_EQ(kernel(a, b, h), kernel(b, a, h));
  }
}

TEST(Kernel, MaximumAtCoincidence) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> n(0.0, 1.0);
  const Bandwidths<double> h;
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_action(rng);
    Action<double> b = a;
    switch (i % 3) {
      case 0: b.position.y() += 2e-6; break;
      case 1: b.rotation = a.rotation * so3::rot_z(2e-6); break;
      default: b.gripper -= 2e-6; break;
    }
    EXPECT_LT(log_kernel(a, b, h), log_kernel(a, a, h));
    EXPECT_LT(log_kernel(a, random_action(rng), h), log_kernel(a, a, h));
  }
}

TEST(Kernel, WiderBandwidthsRaiseTheExponent) {
  std::mt19937_64 rng(23);
  const Bandwidths<double> h;
  for (int i = 0; i < 500; ++i) {
    const auto a = random_action(rng);
    const auto b = random_action(rng);
    const double base = log_kernel(a, b, h, Normalization::kUnnormalized);
    for (int c = 0; c < 3; ++c) {
      Bandwidths<double> wide = h;
      (c == 0 ? wide.sigma_pos : c == 1 ? wide.sigma_rot : wide.sigma_grip) *= 1.5;
      EXPECT_GT(log_kernel(a, b, wide, Normalization::kUnnormalized), base);
    }
  }
}

TEST(Kernel, SeparatesIntoComponentTerms) {
  std::mt19937_64 rng(24);
  const Bandwidths<double> h;
  for (int i = 0; i < 500; ++i) {
    const auto a = random_action(rng);
    const auto b = random_action(rng);
    const auto full = mahalanobis_terms(a, b, h);

    Action<double> same_pos = b;
    same_pos.position = a.position;
    Action<double> same_rot = b;
    same_rot.rotation = a.rotation;
    Action<double> same_grip = b;
    same_grip.gripper = a.gripper;

    const double lc = log_normalizer(h);
    EXPECT_NEAR(log_kernel(a, same_pos, h), lc - 0.5 * (full.rot + full.grip), 1e-12);
    EXPECT_NEAR(log_kernel(a, same_rot, h), lc - 0.5 * (full.pos + full.grip), 1e-12);
    EXPECT_NEAR(log_kernel(a, same_grip, h), lc - 0.5 * (full.pos + full.rot), 1e-12);
    EXPECT_NEAR(log_kernel(a, b, h), lc - 0.5 * full.sum(), 1e-12);
  }
}

TEST(Kernel, InvariantToCommonRotationFrame) {
  std::mt19937_64 rng(25);
  const Bandwidths<double> h;
  for (int i = 0; i < 1000; ++i) {
    auto a = random_action(rng);
    auto b = random_action(rng);
    const double before = log_kernel(a, b, h);
    const double drot = delta(a, b).drot.norm();
    const Eigen::Matrix3d q = random_rotation(rng);
    a.rotation = q * a.rotation;
    b.rotation = q * b.rotation;
    EXPECT_NEAR(delta(a, b).drot.norm(), drot, 1e-9);
    EXPECT_NEAR(log_kernel(a, b, h), before, 1e-9);
  }
}

TEST(Kernel, MatchesLongDoubleOracle) {
  std::mt19937_64 rng(26);
  const Bandwidths<double> h{0.1, 0.4, 0.7};
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_action(rng);
    const auto b = random_action(rng);
    const double oracle = std::log(static_cast<double>(testing::kernel_ld(a, b, h)));
    EXPECT_NEAR(log_kernel(a, b, h), oracle, 1e-9 * std::max(1.0, std::abs(oracle)));
  }
}

TEST(Bandwidths, Validation) {
  EXPECT_TRUE((Bandwidths<double>{}).valid());
  EXPECT_FALSE((Bandwidths<double>{0.0, 0.25, 1.0}).valid());
  EXPECT_FALSE((Bandwidths<double>{0.05, -1.0, 1.0}).valid());
  EXPECT_FALSE((Bandwidths<double>{0.05, 0.25, std::nan("")}).valid());
  EXPECT_THROW((Bandwidths<double>{0.05, 0.25, 0.0}).check(), Error);
}

TEST(Kernel, WorksInSinglePrecision) {
  Action<float> a;
  Action<float> b;
  b.position.x() = 0.05f;
  const Bandwidths<float> h;
  EXPECT_NEAR(log_kernel(a, b, h), static_cast<float>(kLogPeak - 0.5), 1e-5f);
}

}  // namespace
}  // namespace kdpe
