// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fieldlab {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Spinor = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4cd;
using Mat3 = Eigen::Matrix3cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

using ScalarField = std::vector<double>;
using VectorField = std::vector<Vec3>;
using ComplexVectorField = std::vector<CVec3>;

/// Thrown when an operation's precondition on its inputs is violated.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a state leaves a truncated space (bosonic cap, Hermite depth).
class truncation_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Physical constants. Natural units by default; `charge` is the positive
/// elementary charge e, the electron carries -e.
struct PhysicalConstants {
  double hbar = 1.0;
  double c = 1.0;
  double mass = 1.0;
  double charge = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !(c > 0.0) || !(mass > 0.0) || !(charge > 0.0)) {
      throw domain_error("physical constants must be strictly positive");
    }
  }

  /// Rest energy m c^2.
  double rest_energy() const { return mass * c * c; }
};

/// Complex cross product without the conjugation Eigen applies to complex operands.
inline CVec3 cross(const CVec3& a, const CVec3& b) {
  return CVec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

inline double l2_norm(const VectorField& f) {
  double s = 0.0;
  for (const auto& v : f) s += v.squaredNorm();
  return std::sqrt(s);
}

inline double l2_distance(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).squaredNorm();
  return std::sqrt(s);
}

}  // namespace fieldlab
