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

// SO(3) utilities: 6D <-> matrix conversion, hat/vee, exp/log maps and the
// geodesic angle. Rotations are stored as 3x3 matrices; the 6D form (first
// two columns) only appears at I/O boundaries.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "kdpe/error.hpp"

namespace kdpe {

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
/// Two stacked matrix columns, col1 then col2. Not necessarily orthonormal.
template <typename Scalar>
using Rotation6D = Eigen::Matrix<Scalar, 6, 1>;

namespace so3 {

template <typename Scalar>
inline constexpr Scalar kSmallAngle = Scalar(1e-7);
template <typename Scalar>
inline constexpr Scalar kNearPi = Scalar(1e-6);
template <typename Scalar>
inline constexpr Scalar kMinColumnNorm = Scalar(1e-8);

template <typename Scalar>
Matrix3<Scalar> hat(const Vector3<Scalar>& w) {
  Matrix3<Scalar> m;
  m << Scalar(0), -w.z(), w.y(),
       w.z(), Scalar(0), -w.x(),
       -w.y(), w.x(), Scalar(0);
  return m;
}

/// Inverse of hat; reads the generators off the lower/upper off-diagonals.
template <typename Derived>
Vector3<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& m) {
  return {m(2, 1), m(0, 2), m(1, 0)};
}

// Relative rotation b^T * a with a fixed summation order so that the
// result for (b, a) is exactly the transpose of the result for (a, b).
template <typename Scalar>
Matrix3<Scalar> relative(const Matrix3<Scalar>& a, const Matrix3<Scalar>& b) {
  Matrix3<Scalar> m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m(i, j) = b(0, i) * a(0, j) + b(1, i) * a(1, j) + b(2, i) * a(2, j);
    }
  }
  return m;
}

// Rotation angle from the symmetric and antisymmetric parts; accurate to
// rounding over the whole range [0, pi], unlike acos of the trace.
template <typename Scalar>
Scalar angle(const Matrix3<Scalar>& r) {
  using std::atan2;
  using std::sqrt;
  const Scalar s0 = r(2, 1) - r(1, 2);
  const Scalar s1 = r(0, 2) - r(2, 0);
  const Scalar s2 = r(1, 0) - r(0, 1);
  const Scalar sin_theta = Scalar(0.5) * sqrt(s0 * s0 + s1 * s1 + s2 * s2);
  const Scalar cos_theta = Scalar(0.5) * (r(0, 0) + r(1, 1) + r(2, 2) - Scalar(1));
  return atan2(sin_theta, cos_theta);
}

template <typename Scalar>
bool is_rotation(const Matrix3<Scalar>& r, Scalar tol = Scalar(1e-9)) {
  if (!r.allFinite()) return false;
  const Scalar ortho = (r.transpose() * r - Matrix3<Scalar>::Identity()).norm();
  return ortho <= tol && std::abs(r.determinant() - Scalar(1)) <= tol;
}

/// Rodrigues' formula.
template <typename Scalar>
Matrix3<Scalar> expmap(const Vector3<Scalar>& w) {
  const Scalar theta = w.norm();
  const Matrix3<Scalar> k = hat<Scalar>(w);
  Scalar a;
  Scalar b;
  if (theta < kSmallAngle<Scalar>) {
    const Scalar t2 = theta * theta;
    a = Scalar(1) - t2 / Scalar(6);
    b = Scalar(0.5) - t2 / Scalar(24);
  } else {
    a = std::sin(theta) / theta;
    b = (Scalar(1) - std::cos(theta)) / (theta * theta);
  }
  return Matrix3<Scalar>::Identity() + a * k + b * k * k;
}

/// Principal logarithm, returned as an axis-angle vector of norm in [0, pi].
/// At exactly pi the axis sign is fixed so its first nonzero component is
/// positive.
template <typename Scalar>
Vector3<Scalar> logmap(const Matrix3<Scalar>& r) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar theta = angle(r);
  const Vector3<Scalar> v = vee(r - r.transpose());  // 2 sin(theta) * axis

  if (theta < kSmallAngle<Scalar>) {
    return Scalar(0.5) * v * (Scalar(1) + theta * theta / Scalar(6));
  }
  if (pi - theta >= kNearPi<Scalar>) {
    return v * (theta / (Scalar(2) * std::sin(theta)));
  }

  // Near pi: the symmetric part is cos(theta) I + (1 - cos(theta)) k k^T.
  const Scalar c = std::cos(theta);
  const Matrix3<Scalar> kkt =
      (Scalar(0.5) * (r + r.transpose()) - c * Matrix3<Scalar>::Identity()) /
      (Scalar(1) - c);
  Eigen::Index col = 0;
  kkt.diagonal().maxCoeff(&col);
  Vector3<Scalar> axis = kkt.col(col).normalized();

  const Scalar along = axis.dot(v);
  if (std::abs(along) > Scalar(64) * std::numeric_limits<Scalar>::epsilon()) {
    if (along < Scalar(0)) axis = -axis;
  } else {
    for (int i = 0; i < 3; ++i) {
      if (std::abs(axis(i)) > Scalar(64) * std::numeric_limits<Scalar>::epsilon()) {
        if (axis(i) < Scalar(0)) axis = -axis;
        break;
      }
    }
  }
  return theta * axis;
}

/// Minimal rotation angle between a and b, i.e. |log(b^T a)|. Bitwise
/// symmetric in its arguments.
template <typename Scalar>
Scalar geodesic_distance(const Matrix3<Scalar>& a, const Matrix3<Scalar>& b) {
  return angle(relative(a, b));
}

/// Gram-Schmidt recovery of a rotation matrix from the 6D representation.
/// Throws DegenerateRotation for vanishing or parallel columns.
template <typename Scalar>
Matrix3<Scalar> from6d(const Rotation6D<Scalar>& r) {
  if (!r.allFinite()) {
    throw Error(ErrorKind::kDegenerateRotation, "6D rotation has non-finite entries");
  }
  const Vector3<Scalar> a1 = r.template head<3>();
  const Vector3<Scalar> a2 = r.template tail<3>();
  const Scalar n1 = a1.norm();
  const Scalar n2 = a2.norm();
  if (n1 < kMinColumnNorm<Scalar> || n2 < kMinColumnNorm<Scalar>) {
    throw Error(ErrorKind::kDegenerateRotation, "6D rotation column has vanishing norm");
  }
  const Vector3<Scalar> b1 = a1 / n1;
  if (b1.cross(a2 / n2).norm() < kMinColumnNorm<Scalar>) {
    throw Error(ErrorKind::kDegenerateRotation, "6D rotation columns are parallel");
  }
  const Vector3<Scalar> u2 = a2 - b1.dot(a2) * b1;
  const Vector3<Scalar> b2 = u2 / u2.norm();
  Matrix3<Scalar> m;
  m.col(0) = b1;
  m.col(1) = b2;
  m.col(2) = b1.cross(b2);
  return m;
}

template <typename Scalar>
Rotation6D<Scalar> to6d(const Matrix3<Scalar>& r) {
  Rotation6D<Scalar> out;
  out << r.col(0), r.col(1);
  return out;
}

/// Rotation by `angle` radians about +Z.
template <typename Scalar>
Matrix3<Scalar> rot_z(Scalar angle) {
  return Eigen::AngleAxis<Scalar>(angle, Vector3<Scalar>::UnitZ()).toRotationMatrix();
}

}  // namespace so3
}  // namespace kdpe
