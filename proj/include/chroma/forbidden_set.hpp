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

// The distance-avoiding set: a saturated cap packing X, its spherical
// Voronoi cells psi_x, and the union of the cells shrunk towards their
// centers,
//
//   Psi'(lambda) = U_x f_{x,lambda}(psi_x),
//
// where f_{x,lambda} scales the component of a point tangent to x by lambda
// and lifts it back onto the sphere on x's side.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "chroma/error.hpp"
#include "chroma/parameters.hpp"
#include "chroma/point_index.hpp"
#include "chroma/rng.hpp"
#include "chroma/sphere.hpp"

namespace chroma {

// Greedy insertion stops after `max_rejections` consecutive rejected random
// candidates; a pass over `probes` fresh random points then inserts every
// probe still uncovered, so all probes end up within the doubled radius.
struct SaturationOptions {
  std::size_t max_rejections = 20'000;
  std::size_t probes = 100'000;  // per round
  std::size_t max_rounds = 64;
};

struct CapPacking {
  SphereSpec spec;
  double phi = 0.0;
  Matrix centers;  // one center per column
  std::size_t saturation_probes = 0;
  std::size_t saturation_insertions = 0;
  bool saturation_clean = false;

  std::size_t size() const noexcept { return static_cast<std::size_t>(centers.cols()); }
  SpherePoint center(std::size_t i) const {
    return SpherePoint(spec, centers.col(static_cast<Eigen::Index>(i)));
  }
};

namespace detail {

struct SaturatedSet {
  Matrix points;
  std::size_t probes = 0;
  std::size_t insertions = 0;
  bool clean = false;  // the last probe round inserted nothing
};

// Maximal set with pairwise angular distance > 2 * half_angle.
inline SaturatedSet greedy_saturated_set(const SphereSpec& spec, double half_angle,
                                         std::uint64_t seed, Stream candidates, Stream probes,
                                         const SaturationOptions& opts) {
  const double chord = 2.0 * spec.R * std::sin(half_angle);
  PointIndex index(spec.dim(), spec.R * (1.0 + 1e-9), chord);
  Rng cand_rng(seed, candidates);
  std::size_t rejections = 0;
  while (rejections < opts.max_rejections) {
    const SpherePoint c = random_point(spec, cand_rng);
    if (index.any_within(c.coords(), chord)) {
      ++rejections;
    } else {
      index.insert(c.coords());
      rejections = 0;
    }
  }
  // Probe in rounds until a full round inserts nothing; a clean round of M
  // probes bounds the uncovered fraction by about 3 / M at 95% confidence.
  SaturatedSet out;
  Rng probe_rng(seed, probes);
  for (std::size_t round = 0; round < opts.max_rounds; ++round) {
    std::size_t inserted = 0;
    for (std::size_t i = 0; i < opts.probes; ++i) {
      const SpherePoint q = random_point(spec, probe_rng);
      if (!index.any_within(q.coords(), chord)) {
        index.insert(q.coords());
        ++inserted;
      }
    }
    out.probes += opts.probes;
    out.insertions += inserted;
    if (inserted == 0) {
      out.clean = true;
      break;
    }
  }
  out.points.resize(spec.dim(), static_cast<Eigen::Index>(index.size()));
  for (std::size_t i = 0; i < index.size(); ++i) {
    out.points.col(static_cast<Eigen::Index>(i)) = index.point(i);
  }
  return out;
}

}  // namespace detail

inline CapPacking build_packing(const SphereSpec& spec, double phi, const SaturationOptions& strategy,
                                std::uint64_t seed) {
  if (!(phi > 0.0 && phi < std::numbers::pi / 4)) {
    throw DomainError("build_packing needs 0 < phi < pi/4");
  }
  auto set = detail::greedy_saturated_set(spec, phi, seed, Stream::kPacking, Stream::kSaturation,
                                          strategy);
  CapPacking p;
  p.spec = spec;
  p.phi = phi;
  p.centers = std::move(set.points);
  p.saturation_probes = set.probes;
  p.saturation_insertions = set.insertions;
  p.saturation_clean = set.clean;
  return p;
}

// Index of the center closest to p (largest inner product); ties go to the
// lowest index.
inline std::size_t nearest_center(const CapPacking& packing, const Eigen::Ref<const Vector>& p) {
  if (packing.size() == 0) throw StateError("nearest_center on an empty packing");
  const Vector dots = packing.centers.transpose() * p;
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < dots.size(); ++j) {
    if (dots[j] > dots[best]) best = j;
  }
  return static_cast<std::size_t>(best);
}

inline std::size_t nearest_center(const CapPacking& packing, const SpherePoint& p) {
  detail::require_on_sphere(packing.spec, p.coords());
  return nearest_center(packing, p.coords());
}

inline CapPacking rotate_packing(const CapPacking& packing, const Rotation& rotation) {
  CapPacking out = packing;
  out.centers = rotation.matrix() * packing.centers;
  return out;
}

// ---------------------------------------------------------------------------
// Shrink map.

inline SpherePoint shrink(const SphereSpec& spec, const SpherePoint& x, double lambda,
                          const SpherePoint& a) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("shrink coefficient must be in (0, 1]");
  detail::require_on_sphere(spec, x.coords());
  detail::require_on_sphere(spec, a.coords());
  const double r2 = spec.R * spec.R;
  const double h = a.coords().dot(x.coords()) / r2;
  if (h < -kOnSphereTolerance) throw DomainError("shrink: point lies outside the half-sphere of x");
  const Vector u = a.coords() - h * x.coords();
  const double axial = std::sqrt(std::max(0.0, r2 - lambda * lambda * u.squaredNorm()));
  return SpherePoint::project(spec, lambda * u + (axial / spec.R) * x.coords());
}

inline SpherePoint unshrink(const SphereSpec& spec, const SpherePoint& x, double lambda,
                            const SpherePoint& a_prime) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("shrink coefficient must be in (0, 1]");
  detail::require_on_sphere(spec, x.coords());
  detail::require_on_sphere(spec, a_prime.coords());
  const double r2 = spec.R * spec.R;
  const double h = a_prime.coords().dot(x.coords()) / r2;
  const Vector u = a_prime.coords() - h * x.coords();
  const double t = u.norm() / lambda;
  if (h < -kOnSphereTolerance || t > spec.R * (1.0 + kOnSphereTolerance)) {
    throw NoPreimageError("unshrink: tangential radius exceeds lambda * R");
  }
  const double axial = std::sqrt(std::max(0.0, r2 - t * t));
  return SpherePoint::project(spec, u / lambda + (axial / spec.R) * x.coords());
}

// ---------------------------------------------------------------------------

class ForbiddenSet {
 public:
  // With `single_piece` set, the color class is the one piece of that
  // center instead of the union over all centers.
  ForbiddenSet(CapPacking packing, double lambda, std::optional<std::size_t> single_piece = {})
      : packing_(std::move(packing)), lambda_(lambda), single_piece_(single_piece) {
    if (!(lambda_ > 0.0 && lambda_ < 1.0)) throw ParameterError("lambda must lie in (0, 1)");
    if (packing_.size() == 0) throw StateError("forbidden set over an empty packing");
    if (single_piece_ && *single_piece_ >= packing_.size()) {
      throw DomainError("single piece index out of range");
    }
    const double s = lambda_ * std::sin(2.0 * packing_.phi);
    if (!(s < 1.0)) throw ParameterError("lambda * sin(2 phi) must be < 1");
    gamma_ = std::asin(s);
    gram_ = packing_.centers.transpose() * packing_.centers;
    const double r2 = spec().R * spec().R;
    dot_threshold_ = r2 * std::cos(gamma_) - 1e-12 * r2;
  }

  const CapPacking& packing() const noexcept { return packing_; }
  const SphereSpec& spec() const noexcept { return packing_.spec; }
  double lambda() const noexcept { return lambda_; }
  double gamma() const noexcept { return gamma_; }
  double phi() const noexcept { return packing_.phi; }
  std::optional<std::size_t> single_piece() const noexcept { return single_piece_; }
  bool is_active_piece(std::size_t i) const noexcept { return !single_piece_ || *single_piece_ == i; }

  ForbiddenSet with_lambda(double lambda) const { return ForbiddenSet(packing_, lambda, single_piece_); }
  ForbiddenSet rotated(const Rotation& r) const {
    return ForbiddenSet(rotate_packing(packing_, r), lambda_, single_piece_);
  }

  // Piece containing p given dots[j] = <p, x_j> for every center; p is
  // assumed to lie on the sphere.
  std::optional<std::size_t> piece_of_dots(const double* dots) const {
    if (single_piece_) {
      return in_piece(*single_piece_, dots) ? single_piece_ : std::nullopt;
    }
    for (std::size_t i = 0; i < packing_.size(); ++i) {
      if (in_piece(i, dots)) return i;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> piece_of(const Eigen::Ref<const Vector>& p) const {
    const Vector dots = packing_.centers.transpose() * p;
    return piece_of_dots(dots.data());
  }

  bool contains(const SpherePoint& p) const {
    detail::require_on_sphere(spec(), p.coords());
    return piece_of(p.coords()).has_value();
  }

 private:
  // p lies in f(psi_i) iff it is within gamma of x_i and its preimage a has
  // x_i as nearest center. With h = <p,x_i>/R^2 and u = p - h x_i,
  // a = c x_i + u / lambda where c = sqrt(R^2 - |u|^2/lambda^2) / R, so
  // <a, x_j> = c G_ij + (<p,x_j> - h G_ij) / lambda.
  bool in_piece(std::size_t i, const double* dots) const {
    const double d = dots[i];
    if (d < dot_threshold_) return false;
    const double r2 = spec().R * spec().R;
    const double h = d / r2;
    const double u2 = std::max(0.0, r2 - d * h);
    const double t2 = u2 / (lambda_ * lambda_);
    if (t2 > r2) return false;
    const double c = std::sqrt(r2 - t2) / spec().R;
    const auto ii = static_cast<Eigen::Index>(i);
    const double own = c * gram_(ii, ii);
    for (Eigen::Index j = 0; j < gram_.rows(); ++j) {
      if (j == ii) continue;
      const double g = gram_(ii, j);
      const double other = c * g + (dots[j] - h * g) / lambda_;
      if (j < ii ? !(own > other) : !(own >= other)) return false;
    }
    return true;
  }

  CapPacking packing_;
  double lambda_;
  std::optional<std::size_t> single_piece_;
  double gamma_ = 0.0;
  double dot_threshold_ = 0.0;
  Matrix gram_;
};

// ---------------------------------------------------------------------------
// Density.

struct DensityEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::size_t hits = 0;
};

namespace detail {

inline constexpr Eigen::Index kBatch = 4096;

// Fills `out` with uniform points (columns) on the sphere.
inline void random_points(const SphereSpec& spec, Rng& rng, Matrix& out, Eigen::Index count) {
  out.resize(spec.dim(), count);
  for (Eigen::Index j = 0; j < count; ++j) out.col(j) = random_point(spec, rng).coords();
}

}  // namespace detail

inline DensityEstimate mc_density(const ForbiddenSet& fs, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed, Stream::kDensity);
  DensityEstimate e;
  Matrix batch;
  Matrix dots;
  std::size_t left = samples;
  while (left > 0) {
    const auto count = static_cast<Eigen::Index>(std::min<std::size_t>(left, detail::kBatch));
    detail::random_points(fs.spec(), rng, batch, count);
    dots.noalias() = fs.packing().centers.transpose() * batch;
    for (Eigen::Index j = 0; j < count; ++j) {
      if (fs.piece_of_dots(dots.col(j).data())) ++e.hits;
    }
    left -= static_cast<std::size_t>(count);
  }
  e.samples = samples;
  if (samples > 0) {
    e.estimate = static_cast<double>(e.hits) / static_cast<double>(samples);
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(samples));
  }
  return e;
}

// Lower bound lambda^n sqrt((1 - sin^2 2phi) / (1 - lambda^2 sin^2 2phi)) on
// the fraction of each Voronoi cell kept by the shrink. Degenerates to 0 at
// phi = pi/4.
inline double analytic_density_bound(double phi, double lambda, int n) {
  const double s2 = std::pow(std::sin(2.0 * phi), 2);
  if (!(lambda > 0.0) || !(lambda * lambda * s2 < 1.0)) {
    throw DomainError("analytic_density_bound needs 0 < lambda sin 2phi < 1");
  }
  if (s2 >= 1.0) return 0.0;
  return std::exp(n * std::log(lambda)) * std::sqrt((1.0 - s2) / (1.0 - lambda * lambda * s2));
}

// ---------------------------------------------------------------------------
// Forbidden-distance certificate.

struct ForbiddenCertificate {
  double target = 1.0;
  double tolerance = 1e-9;
  double diameter_bound = 0.0;
  // +inf for a single-piece class.
  double separation_bound = std::numeric_limits<double>::infinity();
  std::size_t pool_points = 0;
  std::size_t pairs = 0;
  std::size_t same_piece_pairs = 0;
  std::size_t cross_piece_pairs = 0;
  std::size_t gap_violations = 0;
  std::size_t diameter_violations = 0;
  double max_same_piece_chord = 0.0;
  double min_cross_piece_chord = std::numeric_limits<double>::infinity();

  bool passed() const { return gap_violations == 0 && diameter_violations == 0; }
};

// Analytic margins of fs; throws ParameterError unless
// diameter + tol < target < separation - tol.
inline ForbiddenMargins checked_margins(const ForbiddenSet& fs, double target, double tol) {
  ForbiddenMargins m = forbidden_margins(fs.spec().R, fs.phi(), fs.lambda());
  if (fs.single_piece()) m.separation = std::numeric_limits<double>::infinity();
  if (!(m.diameter + tol < target && target < m.separation - tol)) {
    throw ParameterError("forbidden margins do not bracket the target distance (diameter " +
                         std::to_string(m.diameter) + ", separation " +
                         std::to_string(m.separation) + ")");
  }
  return m;
}

namespace detail {

struct PiecePool {
  Matrix points;                     // columns
  std::vector<std::size_t> piece;    // piece of each column
  std::vector<std::vector<std::size_t>> by_piece;
};

// Uniform points of the forbidden set by rejection.
inline PiecePool sample_pool(const ForbiddenSet& fs, std::size_t count, Rng& rng) {
  PiecePool pool;
  pool.points.resize(fs.spec().dim(), static_cast<Eigen::Index>(count));
  pool.by_piece.resize(fs.packing().size());
  Matrix batch;
  Matrix dots;
  std::size_t filled = 0;
  std::size_t drawn = 0;
  while (filled < count) {
    detail::random_points(fs.spec(), rng, batch, kBatch);
    dots.noalias() = fs.packing().centers.transpose() * batch;
    for (Eigen::Index j = 0; j < batch.cols() && filled < count; ++j) {
      if (auto piece = fs.piece_of_dots(dots.col(j).data())) {
        pool.points.col(static_cast<Eigen::Index>(filled)) = batch.col(j);
        pool.piece.push_back(*piece);
        pool.by_piece[*piece].push_back(filled);
        ++filled;
      }
    }
    drawn += static_cast<std::size_t>(kBatch);
    if (filled == 0 && drawn > 100'000'000) throw StateError("forbidden set has no sampled points");
  }
  return pool;
}

}  // namespace detail

// Samples points of the forbidden set and checks that no pair has a chord
// length inside [diameter + tol, separation - tol]. Half of the pairs are
// uniform over the pool, the other half are drawn from the same or a nearby
// piece where the gap is tightest.
inline ForbiddenCertificate certify_forbidden(const ForbiddenSet& fs, double target_distance,
                                              std::size_t pair_samples, std::uint64_t seed,
                                              double tol = 1e-9) {
  const ForbiddenMargins m = checked_margins(fs, target_distance, tol);
  ForbiddenCertificate cert;
  cert.target = target_distance;
  cert.tolerance = tol;
  cert.diameter_bound = m.diameter;
  cert.separation_bound = m.separation;

  Rng rng(seed, Stream::kPairs);
  const std::size_t pool_size = std::clamp<std::size_t>(pair_samples / 50, 200, 20'000);
  const detail::PiecePool pool = detail::sample_pool(fs, pool_size, rng);
  cert.pool_points = pool_size;

  // Pieces whose centers are within 4 phi (cells are inside 2 phi caps).
  const auto& centers = fs.packing().centers;
  const double r2 = fs.spec().R * fs.spec().R;
  const double near_dot = r2 * std::cos(std::min(4.0 * fs.phi(), std::numbers::pi));
  std::vector<std::vector<std::size_t>> nearby(fs.packing().size());
  for (std::size_t i = 0; i < nearby.size(); ++i) {
    for (std::size_t j = 0; j < nearby.size(); ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (!pool.by_piece[j].empty() && centers.col(ii).dot(centers.col(jj)) >= near_dot) {
        nearby[i].push_back(j);
      }
    }
  }

  for (std::size_t k = 0; k < pair_samples; ++k) {
    const std::size_t a = rng.below(pool_size);
    std::size_t b = 0;
    if (k % 2 == 0) {
      b = rng.below(pool_size);
    } else {
      const auto& near = nearby[pool.piece[a]];
      const auto& members = pool.by_piece[near[rng.below(near.size())]];
      b = members[rng.below(members.size())];
    }
    if (a == b) continue;
    ++cert.pairs;
    const double chord = (pool.points.col(static_cast<Eigen::Index>(a)) -
                          pool.points.col(static_cast<Eigen::Index>(b))).norm();
    if (chord >= m.diameter + tol && chord <= m.separation - tol) ++cert.gap_violations;
    if (pool.piece[a] == pool.piece[b]) {
      ++cert.same_piece_pairs;
      cert.max_same_piece_chord = std::max(cert.max_same_piece_chord, chord);
      if (chord > m.diameter + tol) ++cert.diameter_violations;
    } else {
      ++cert.cross_piece_pairs;
      cert.min_cross_piece_chord = std::min(cert.min_cross_piece_chord, chord);
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Boundary clearance of shrunk pieces.

struct Proposition1Report {
  double threshold = 0.0;  // phi - alpha
  std::size_t samples = 0;
  std::size_t boundary_samples = 0;
  std::size_t active_facets = 0;
  std::size_t pieces_without_facets = 0;
  // Minimum over sampled points of the angular distance to the bisector
  // great spheres of active facets, and of all other centers.
  double min_active_clearance = std::numeric_limits<double>::infinity();
  double min_all_clearance = std::numeric_limits<double>::infinity();
  double min_cross_piece_angle = std::numeric_limits<double>::infinity();
  std::size_t cross_pairs = 0;

  bool passed(double tol = 1e-9) const {
    return pieces_without_facets == 0 && min_active_clearance >= threshold - tol &&
           min_cross_piece_angle >= 2.0 * threshold - tol;
  }
};

struct FacetProbeOptions {
  std::size_t probes_per_piece = 200;
  std::size_t pair_check_limit = 5'000;
};

namespace detail {

struct FacetScan {
  std::vector<std::vector<std::size_t>> active;  // per center: active neighbors
  std::vector<std::pair<std::size_t, Vector>> boundary_points;
};

// Walks geodesics out of each cell from random interior probes; the first
// step whose nearest center changes brackets a facet, and bisection along
// the arc gives a boundary point on the inner side.
inline FacetScan scan_facets(const CapPacking& packing, std::size_t probes_per_piece, Rng& rng) {
  const SphereSpec& spec = packing.spec;
  FacetScan scan;
  scan.active.resize(packing.size());
  const std::size_t total = probes_per_piece * packing.size();
  const double step = packing.phi / 16.0;
  const int max_steps = 4 * 16 + 8;
  for (std::size_t k = 0; k < total; ++k) {
    const SpherePoint q = random_point(spec, rng);
    const std::size_t x = nearest_center(packing, q.coords());
    const SpherePoint dir = point_at_angle(spec, q, std::numbers::pi / 2, rng);
    auto along = [&](double t) -> Vector {
      return std::cos(t) * q.coords() + std::sin(t) * dir.coords();
    };
    double inside = 0.0;
    for (int s = 1; s <= max_steps; ++s) {
      const double t = s * step;
      const std::size_t y = nearest_center(packing, along(t));
      if (y == x) {
        inside = t;
        continue;
      }
      double lo = inside;
      double hi = t;
      for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (nearest_center(packing, along(mid)) == x ? lo : hi) = mid;
      }
      const std::size_t neighbor = nearest_center(packing, along(hi));
      auto& list = scan.active[x];
      if (std::find(list.begin(), list.end(), neighbor) == list.end()) list.push_back(neighbor);
      scan.boundary_points.emplace_back(x, along(lo));
      break;
    }
  }
  for (auto& list : scan.active) std::sort(list.begin(), list.end());
  return scan;
}

}  // namespace detail

inline Proposition1Report check_proposition1(const ForbiddenSet& fs, std::size_t samples,
                                             std::uint64_t seed, const FacetProbeOptions& opts = {}) {
  const CapPacking& packing = fs.packing();
  const SphereSpec& spec = packing.spec;
  const double lambda = fs.lambda();
  Rng rng(seed, Stream::kFacets);
  const detail::FacetScan scan = detail::scan_facets(packing, opts.probes_per_piece, rng);

  Proposition1Report rep;
  rep.threshold = fs.phi() - std::asin(lambda * std::sin(fs.phi()));
  for (const auto& list : scan.active) {
    rep.active_facets += list.size();
    if (list.empty()) ++rep.pieces_without_facets;
  }

  // Shrunk boundary points first (the extremal case), then shrunk uniform
  // points of each cell.
  std::vector<std::pair<std::size_t, Vector>> points;
  points.reserve(samples);
  for (const auto& [x, b] : scan.boundary_points) {
    if (points.size() >= samples / 2) break;
    const SpherePoint a = SpherePoint::project(spec, b);
    points.emplace_back(x, shrink(spec, packing.center(x), lambda, a).coords());
  }
  rep.boundary_samples = points.size();
  while (points.size() < samples) {
    const SpherePoint q = random_point(spec, rng);
    const std::size_t x = nearest_center(packing, q.coords());
    points.emplace_back(x, shrink(spec, packing.center(x), lambda, q).coords());
  }
  rep.samples = points.size();

  const double r = spec.R;
  for (const auto& [x, p] : points) {
    const auto xi = static_cast<Eigen::Index>(x);
    for (std::size_t y = 0; y < packing.size(); ++y) {
      if (y == x) continue;
      const Vector normal = (packing.centers.col(xi) - packing.centers.col(static_cast<Eigen::Index>(y))).normalized();
      const double clearance = std::asin(std::clamp(p.dot(normal) / r, -1.0, 1.0));
      rep.min_all_clearance = std::min(rep.min_all_clearance, clearance);
      if (std::binary_search(scan.active[x].begin(), scan.active[x].end(), y)) {
        rep.min_active_clearance = std::min(rep.min_active_clearance, clearance);
      }
    }
  }

  const std::size_t limit = std::min(points.size(), opts.pair_check_limit);
  for (std::size_t i = 0; i < limit; ++i) {
    for (std::size_t j = i + 1; j < limit; ++j) {
      if (points[i].first == points[j].first) continue;
      ++rep.cross_pairs;
      rep.min_cross_piece_angle =
          std::min(rep.min_cross_piece_angle, detail::angle_between(points[i].second, points[j].second));
    }
  }
  return rep;
}

}  // namespace chroma
