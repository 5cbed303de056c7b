// Copyright 2026 The Chroma Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Geometry of the round sphere S^n_R embedded in R^{n+1}: points, angular
// and chord metrics, caps, the normalized cap measure and Haar sampling.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "chroma/error.hpp"
#include "chroma/rng.hpp"

namespace chroma {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kOnSphereTolerance = 1e-12;
inline constexpr double kOrthogonalityTolerance = 1e-10;

struct SphereSpec {
  int n = 2;
  double R = 1.0;

  SphereSpec() = default;
  SphereSpec(int dimension, double radius) : n(dimension), R(radius) {
    if (n < 2) throw DomainError("sphere dimension must be >= 2, got " + std::to_string(n));
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("sphere radius must be positive");
  }

  // Dimension of the ambient Euclidean space.
  int dim() const noexcept { return n + 1; }
};

// Relative deviation of |v| from R.
inline double radius_defect(const SphereSpec& spec, const Eigen::Ref<const Vector>& v) {
  return std::abs(v.norm() - spec.R) / spec.R;
}

class SpherePoint {
 public:
  // Inputs within the on-sphere tolerance are renormalized onto the sphere;
  // anything further off is rejected.
  SpherePoint(const SphereSpec& spec, Vector coords) : coords_(std::move(coords)) {
    if (coords_.size() != spec.dim()) {
      throw InvalidPointError("point has " + std::to_string(coords_.size()) +
                              " coordinates, sphere needs " + std::to_string(spec.dim()));
    }
    if (!(radius_defect(spec, coords_) <= kOnSphereTolerance)) {
      throw InvalidPointError("point is off the sphere of radius " + std::to_string(spec.R));
    }
    coords_ *= spec.R / coords_.norm();
  }

  // Radial projection of any nonzero vector.
  static SpherePoint project(const SphereSpec& spec, const Vector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0)) throw InvalidPointError("cannot project the zero vector onto a sphere");
    return SpherePoint(spec, v * (spec.R / norm));
  }

  const Vector& coords() const noexcept { return coords_; }
  double operator[](Eigen::Index i) const { return coords_[i]; }
  Eigen::Index size() const noexcept { return coords_.size(); }

 private:
  Vector coords_;
};

namespace detail {

inline void require_on_sphere(const SphereSpec& spec, const Eigen::Ref<const Vector>& v) {
  if (v.size() != spec.dim() || !(radius_defect(spec, v) <= kOnSphereTolerance)) {
    throw InvalidPointError("point is not on the sphere of radius " + std::to_string(spec.R));
  }
}

// Angle between two vectors; accurate near 0 and pi where acos is not.
inline double angle_between(const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q) {
  return 2.0 * std::atan2((p - q).norm(), (p + q).norm());
}

}  // namespace detail

inline double angular_distance(const SphereSpec& spec, const SpherePoint& p, const SpherePoint& q) {
  detail::require_on_sphere(spec, p.coords());
  detail::require_on_sphere(spec, q.coords());
  return detail::angle_between(p.coords(), q.coords());
}

inline double chord_distance(const SphereSpec& spec, const SpherePoint& p, const SpherePoint& q) {
  return 2.0 * spec.R * std::sin(0.5 * angular_distance(spec, p, q));
}

struct Cap {
  SpherePoint center;
  double angular_radius;

  Cap(SpherePoint c, double radius) : center(std::move(c)), angular_radius(radius) {
    if (!(radius > 0.0 && radius <= std::numbers::pi)) {
      throw DomainError("cap angular radius must lie in (0, pi]");
    }
  }

  bool contains(const SphereSpec& spec, const SpherePoint& p) const {
    return angular_distance(spec, center, p) <= angular_radius;
  }
};

namespace detail {

// Integral of sin^{n-1}(t) over [0, upper], upper <= pi/2.
inline double sine_power_integral(int n, double upper) {
  if (upper <= 0.0) return 0.0;
  auto integrand = [n](double t) { return std::pow(std::sin(t), n - 1); };
  // The integrand is smooth and monotone on [0, pi/2]; a 1e-13 relative target
  // is reachable in double precision and the depth cap bounds the work.
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, upper, 12,
                                                                       1e-13);
}

}  // namespace detail

// Normalized measure Theta(phi) of a cap of angular radius phi on S^n.
inline double cap_measure(int n, double phi) {
  if (n < 1) throw DomainError("cap_measure needs n >= 1");
  if (!(phi > 0.0 && phi <= std::numbers::pi)) {
    throw DomainError("cap_measure: phi must lie in (0, pi]");
  }
  constexpr double half_pi = std::numbers::pi / 2;
  const double half_sphere = 2.0 * detail::sine_power_integral(n, half_pi);
  if (phi <= half_pi) return detail::sine_power_integral(n, phi) / half_sphere;
  return 1.0 - detail::sine_power_integral(n, std::numbers::pi - phi) / half_sphere;
}

inline double cap_measure(const SphereSpec& spec, double phi) { return cap_measure(spec.n, phi); }

// Uniform point: isotropic Gaussian, normalized, scaled by R.
inline SpherePoint random_point(const SphereSpec& spec, Rng& rng) {
  Vector v(spec.dim());
  for (;;) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
    const double norm = v.norm();
    if (norm > 1e-300) return SpherePoint(spec, v * (spec.R / norm));
  }
}

inline SpherePoint random_point(const SphereSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return random_point(spec, rng);
}

// Point at angular distance `angle` from p in a uniformly random direction.
inline SpherePoint point_at_angle(const SphereSpec& spec, const SpherePoint& p, double angle,
                                  Rng& rng) {
  const Vector& c = p.coords();
  Vector t(spec.dim());
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = rng.normal();
    t -= (t.dot(c) / c.squaredNorm()) * c;
    norm = t.norm();
  } while (norm < 1e-12);
  return SpherePoint::project(spec, std::cos(angle) * c + std::sin(angle) * spec.R * (t / norm));
}

class Rotation {
 public:
  explicit Rotation(Matrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols()) throw DomainError("rotation matrix must be square");
    const Matrix defect = matrix_.transpose() * matrix_ - Matrix::Identity(dim(), dim());
    if (defect.cwiseAbs().maxCoeff() > kOrthogonalityTolerance) {
      throw DomainError("rotation matrix is not orthogonal");
    }
    if (!(matrix_.determinant() > 0.0)) throw DomainError("rotation matrix has determinant <= 0");
  }

  static Rotation identity(int dim) { return Rotation(Matrix::Identity(dim, dim)); }

  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

  SpherePoint apply(const SphereSpec& spec, const SpherePoint& p) const {
    return SpherePoint::project(spec, matrix_ * p.coords());
  }
  SpherePoint apply_inverse(const SphereSpec& spec, const SpherePoint& p) const {
    return SpherePoint::project(spec, matrix_.transpose() * p.coords());
  }
  Rotation inverse() const { return Rotation(matrix_.transpose()); }

 private:
  Matrix matrix_;
};

// Haar-distributed rotation. A Gaussian matrix is QR-factored and Q is fixed
// up to signs by making diag(R) positive, which makes Q Haar on O(n+1);
// negating the first column when det Q < 0 maps that onto SO(n+1).
inline Rotation random_rotation(int dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return Rotation(std::move(q));
}

inline Rotation random_rotation(const SphereSpec& spec, Rng& rng) {
  return random_rotation(spec.dim(), rng);
}

inline Rotation random_rotation(const SphereSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return random_rotation(spec.dim(), rng);
}

}  // namespace chroma
