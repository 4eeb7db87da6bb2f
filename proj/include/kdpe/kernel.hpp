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
#include <numbers>

#include "kdpe/error.hpp"
#include "kdpe/geometry.hpp"

namespace kdpe {

/// One end-effector command: position, orientation and gripper aperture.
template <typename Scalar>
struct Action {
  Vector3<Scalar> position = Vector3<Scalar>::Zero();
  Matrix3<Scalar> rotation = Matrix3<Scalar>::Identity();
  Scalar gripper = Scalar(0);

  bool valid() const {
    return position.allFinite() && std::isfinite(gripper) && so3::is_rotation(rotation);
  }
};

/// Per-component kernel scales; H = diag(pos^2 I3, rot^2 I3, grip^2).
template <typename Scalar>
struct Bandwidths {
  Scalar sigma_pos = Scalar(0.05);
  Scalar sigma_rot = Scalar(0.25);
  Scalar sigma_grip = Scalar(1.0);

  bool valid() const {
    return std::isfinite(sigma_pos) && std::isfinite(sigma_rot) &&
           std::isfinite(sigma_grip) && sigma_pos > 0 && sigma_rot > 0 && sigma_grip > 0;
  }

  void check() const {
    if (!valid()) throw Error(ErrorKind::kInvalidArgument, "bandwidths must be finite and > 0");
  }

  friend bool operator==(const Bandwidths&, const Bandwidths&) = default;
};

/// Manifold difference between two actions.
template <typename Scalar>
struct Delta {
  Vector3<Scalar> dt = Vector3<Scalar>::Zero();
  Vector3<Scalar> drot = Vector3<Scalar>::Zero();
  Scalar dg = Scalar(0);
};

/// Whether the Gaussian normalizer is part of the kernel. Selection is
/// invariant to it; kUnnormalized exists so that can be checked.
enum class Normalization { kFull, kUnnormalized };

/// Dimension of the difference vector (3 position + 3 rotation + 1 gripper).
inline constexpr int kDeltaDim = 7;

template <typename Scalar>
Delta<Scalar> delta(const Action<Scalar>& a, const Action<Scalar>& b) {
  return {a.position - b.position, so3::logmap<Scalar>(so3::relative(a.rotation, b.rotation)),
          a.gripper - b.gripper};
}

/// log C(h) = -1/2 (7 ln(2 pi) + ln|H|).
template <typename Scalar>
Scalar log_normalizer(const Bandwidths<Scalar>& h) {
  using std::log;
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar log_det =
      Scalar(6) * log(h.sigma_pos) + Scalar(6) * log(h.sigma_rot) + Scalar(2) * log(h.sigma_grip);
  return Scalar(-0.5) * (Scalar(kDeltaDim) * log(two_pi) + log_det);
}

/// The three Mahalanobis terms of -1/2 Delta^T H^-1 Delta, before the -1/2.
template <typename Scalar>
struct MahalanobisTerms {
  Scalar pos;
  Scalar rot;
  Scalar grip;

  Scalar sum() const { return pos + rot + grip; }
};

template <typename Scalar>
MahalanobisTerms<Scalar> mahalanobis_terms(const Action<Scalar>& a, const Action<Scalar>& b,
                                           const Bandwidths<Scalar>& h) {
  const Scalar dx = a.position.x() - b.position.x();
  const Scalar dy = a.position.y() - b.position.y();
  const Scalar dz = a.position.z() - b.position.z();
  const Scalar theta = so3::geodesic_distance(a.rotation, b.rotation);
  const Scalar dg = a.gripper - b.gripper;
  return {(dx * dx + dy * dy + dz * dz) / (h.sigma_pos * h.sigma_pos),
          theta * theta / (h.sigma_rot * h.sigma_rot),
          dg * dg / (h.sigma_grip * h.sigma_grip)};
}

/// Natural log of the manifold-aware Gaussian kernel. Bitwise symmetric:
/// squared differences and the geodesic angle do not depend on order.
template <typename Scalar>
Scalar log_kernel(const Action<Scalar>& a, const Action<Scalar>& b, const Bandwidths<Scalar>& h,
                  Normalization norm = Normalization::kFull) {
  const Scalar quad = Scalar(-0.5) * mahalanobis_terms(a, b, h).sum();
  return norm == Normalization::kFull ? log_normalizer(h) + quad : quad;
}

template <typename Scalar>
Scalar kernel(const Action<Scalar>& a, const Action<Scalar>& b, const Bandwidths<Scalar>& h) {
  return std::exp(log_kernel(a, b, h));
}

}  // namespace kdpe
