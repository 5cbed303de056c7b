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

// Closed-form parameters of the forbidden-set construction.
//
// For R > sqrt(5)/2 the packing angle phi and the critical shrink
// coefficient lambda0 are the unique solution with phi < pi/4 of
//
//   2 R lambda0 sin(2 phi) = 1,  sin(alpha) = lambda0 sin(phi),
//   2 R sin(phi - alpha) = 1,
//
// i.e. the largest shrink for which pieces have chord diameter <= 1 and
// distinct pieces stay >= 1 apart. The base of the color bound is
// x(R) = 1 / lambda0(R), and 2R below the threshold.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "chroma/error.hpp"

namespace chroma {

inline const double kRegimeThreshold = std::sqrt(5.0) / 2.0;

enum class Regime { kLargeR, kSmallR };

inline const char* to_string(Regime r) { return r == Regime::kLargeR ? "LargeR" : "SmallR"; }

struct RadiusParams {
  double R = 0.0;
  double phi = 0.0;
  // Large-R: the critical coefficient. Small-R: the coefficient
  // 1 / (2 R sin 2phi + eps) actually used.
  double lambda0 = 0.0;
  double alpha = 0.0;  // sin(alpha) = lambda0 sin(phi)
  double gamma = 0.0;  // sin(gamma) = lambda0 sin(2 phi)
  double x = 0.0;      // x(R)
  double eps = 0.0;    // Small-R margin; zero for Large-R
  Regime regime = Regime::kLargeR;
};

// Chord-distance margins of a forbidden set with packing angle phi and
// shrink lambda on a sphere of radius R: pieces have diameter <= diameter,
// and points of distinct pieces are >= separation apart.
struct ForbiddenMargins {
  double diameter = 0.0;
  double separation = 0.0;
};

inline ForbiddenMargins forbidden_margins(double R, double phi, double lambda) {
  return {2.0 * R * lambda * std::sin(2.0 * phi),
          2.0 * R * std::sin(phi - std::asin(lambda * std::sin(phi)))};
}

namespace detail {

// sin^2(phi) for the plus-sign root. In s = sin^2 phi the defining equation
// 1 + 8 cos^2 = 16 R^2 sin^2 cos^2 reads 16R^2 s^2 - (16R^2 + 8) s + 9 = 0;
// the small root is taken through the product of roots to avoid
// cancellation when R is large.
inline double sin2_phi(double R) {
  const double r2 = R * R;
  const double b = 16.0 * r2 + 8.0;
  const double disc = 64.0 * (4.0 * r2 - 1.0) * (r2 - 1.0);
  return 18.0 / (b + std::sqrt(std::max(disc, 0.0)));
}

inline void require_large(double R, const char* what) {
  if (!(R > kRegimeThreshold)) {
    throw RegimeError(std::string(what) + ": R = " + std::to_string(R) +
                      " is not above sqrt(5)/2; use small_R_params");
  }
}

}  // namespace detail

// g(r) = cos^2 of the packing angle, for r >= 1.
inline double g_of_r(double r) {
  if (!(r >= 1.0)) throw DomainError("g(r) is only real for r >= 1");
  return 1.0 - detail::sin2_phi(r);
}

inline double solve_phi(double R) {
  detail::require_large(R, "solve_phi");
  return std::asin(std::sqrt(detail::sin2_phi(R)));
}

inline double lambda0(double R) {
  detail::require_large(R, "lambda0");
  const double c2 = 1.0 - detail::sin2_phi(R);
  return 1.0 / std::sqrt(1.0 + 8.0 * c2);
}

// The large-radius closed form of x(R); real for R >= 1 and R <= 1/2.
inline double x_large_formula(double R) {
  const double r2 = R * R;
  const double inner = 1.0 - (5.0 * r2 - 1.0) / (4.0 * r2 * r2);
  if (inner < 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(5.0 - 2.0 / r2 + 4.0 * std::sqrt(inner));
}

inline double x_of_R(double R) {
  if (!(R > 0.5) || !std::isfinite(R)) {
    throw DomainError("x(R) is defined for R > 1/2, got " + std::to_string(R));
  }
  return R > kRegimeThreshold ? x_large_formula(R) : 2.0 * R;
}

inline RadiusParams large_R_params(double R) {
  detail::require_large(R, "large_R_params");
  RadiusParams p;
  p.R = R;
  p.regime = Regime::kLargeR;
  p.phi = solve_phi(R);
  p.lambda0 = lambda0(R);
  p.alpha = std::asin(p.lambda0 * std::sin(p.phi));
  p.gamma = std::asin(p.lambda0 * std::sin(2.0 * p.phi));
  p.x = x_of_R(R);
  return p;
}

// Below the threshold the packing angle is free. Pieces then have chord
// diameter 2 R lambda sin 2phi < 1; the cross-piece separation bound is
// reported by forbidden_margins but does not exceed 1 in this regime.
inline RadiusParams small_R_params(double R, double phi, double eps) {
  if (!(R > 0.5 && R <= kRegimeThreshold)) {
    throw DomainError("small_R_params needs 1/2 < R <= sqrt(5)/2, got R = " + std::to_string(R));
  }
  if (!(phi > 0.0 && phi < std::numbers::pi / 4)) {
    throw DomainError("small_R_params needs 0 < phi < pi/4");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("small_R_params needs eps > 0");
  }
  RadiusParams p;
  p.R = R;
  p.regime = Regime::kSmallR;
  p.phi = phi;
  p.eps = eps;
  p.lambda0 = 1.0 / (2.0 * R * std::sin(2.0 * phi) + eps);
  p.alpha = std::asin(p.lambda0 * std::sin(phi));
  p.gamma = std::asin(p.lambda0 * std::sin(2.0 * phi));
  p.x = x_of_R(R);
  return p;
}

// Default packing angle below the threshold.
inline double default_small_phi(int n) {
  return std::numbers::pi / 4 - 1.0 / static_cast<double>(std::max(n, 2));
}

struct SystemResiduals {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;

  double max() const { return std::max({first, second, third}); }
  bool ok(double tol = 1e-10) const { return max() < tol; }
};

// Large-R: residuals of the three defining equations. Small-R: residuals of
// lambda (2R sin 2phi + eps) = 1, sin alpha = lambda sin phi and
// sin gamma = lambda sin 2phi.
inline SystemResiduals verify_system(const RadiusParams& p) {
  const double s1 = std::sin(p.phi);
  const double s2 = std::sin(2.0 * p.phi);
  SystemResiduals r;
  r.second = std::abs(std::sin(p.alpha) - p.lambda0 * s1);
  if (p.regime == Regime::kLargeR) {
    r.first = std::abs(2.0 * p.R * p.lambda0 * s2 - 1.0);
    r.third = std::abs(2.0 * p.R * std::sin(p.phi - p.alpha) - 1.0);
  } else {
    r.first = std::abs(p.lambda0 * (2.0 * p.R * s2 + p.eps) - 1.0);
    r.third = std::abs(std::sin(p.gamma) - p.lambda0 * s2);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Shell functions for the ball coloring.

// Which part of the forbidden set serves as one color class on a shell
// sphere. Above r* the full union of pieces is used; at or below r* the
// cross-piece separation bound drops under 1, so a single piece is used.
enum class PieceMode { kAllPieces, kSinglePiece };

inline const char* to_string(PieceMode m) {
  return m == PieceMode::kAllPieces ? "all_pieces" : "single_piece";
}

struct ShellParams {
  double r = 0.0;
  double eps = 0.0;
  double r_star = 0.0;
  double phi_r = 0.0;
  double lambda_r = 0.0;
  double delta_r = 0.0;
  double diameter_margin = 0.0;    // 1 - 2 r lambda sin 2phi
  double separation_margin = 0.0;  // 2 r sin(phi - asin(lambda sin phi)) - 1
  PieceMode mode = PieceMode::kAllPieces;
};

// Solves g(r*) = 1/2 + eps by bisection on (sqrt(5)/2, 1e9).
inline double r_star(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("eps must be positive");
  const double target = 0.5 + eps;
  double lo = kRegimeThreshold;
  double hi = 1e9;
  if (!(g_of_r(hi) > target)) {
    throw ParameterError("eps = " + std::to_string(eps) + " is too large: g(r) never reaches 1/2 + eps");
  }
  // g saturates at 1 in double precision long before 1e9, so the check on
  // a doubling grid is non-strict.
  for (double r = lo, prev = g_of_r(lo); r < hi; r *= 2.0) {
    const double g = g_of_r(r);
    if (g < prev) throw ParameterError("g is not increasing on the bisection bracket");
    prev = g;
  }
  while (hi - lo > 1e-12 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    (g_of_r(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// phi(r), lambda(r) and the forbidden half-width delta(r).
// lambda(r) = 1 / (sqrt(1 + 8 cos^2 phi(r)) + eps), so that 1/lambda = x + eps
// above r*.
inline ShellParams shell_functions(double r, double eps, double rstar) {
  if (!(r >= 0.5) || !std::isfinite(r)) {
    throw DomainError("shell_functions needs r >= 1/2, got " + std::to_string(r));
  }
  ShellParams s;
  s.r = r;
  s.eps = eps;
  s.r_star = rstar;
  double cos2 = 0.0;
  if (r > rstar) {
    const double sin2 = detail::sin2_phi(r);
    s.phi_r = std::asin(std::sqrt(sin2));
    cos2 = 1.0 - sin2;
    s.mode = PieceMode::kAllPieces;
  } else {
    cos2 = 0.5 + eps;
    s.phi_r = std::acos(std::sqrt(cos2));
    s.mode = PieceMode::kSinglePiece;
  }
  s.lambda_r = 1.0 / (std::sqrt(1.0 + 8.0 * cos2) + eps);
  const auto m = forbidden_margins(r, s.phi_r, s.lambda_r);
  s.diameter_margin = 1.0 - m.diameter;
  s.separation_margin = m.separation - 1.0;
  s.delta_r = s.mode == PieceMode::kAllPieces ? std::min(s.diameter_margin, s.separation_margin)
                                              : s.diameter_margin;
  if (!(s.delta_r > 0.0)) {
    throw ParameterError("delta(r) is not positive at r = " + std::to_string(r));
  }
  return s;
}

inline ShellParams shell_functions(double r, double eps) {
  return shell_functions(r, eps, r_star(eps));
}

// R_1 = R, R_{k+1} = R_k - delta(R_k)/2, stopping at the first R_k < 1/2
// (which is included as the last entry).
inline std::vector<double> shell_radii(double R, double eps, std::size_t max_shells = 10'000'000) {
  if (!(R > 0.5) || !std::isfinite(R)) {
    throw DomainError("shell_radii needs R > 1/2, got " + std::to_string(R));
  }
  const double rstar = r_star(eps);
  std::vector<double> radii{R};
  while (radii.back() >= 0.5) {
    if (radii.size() > max_shells) throw ParameterError("shell recursion did not terminate");
    const double r = radii.back();
    radii.push_back(r - 0.5 * shell_functions(r, eps, rstar).delta_r);
  }
  return radii;
}

}  // namespace chroma
