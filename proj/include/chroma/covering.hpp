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

// Covering the sphere by rotated copies of the forbidden set.
//
// A maximal 2beta-separated net W is covered by rotated copies of the
// tighter set Psi'' (shrink (1 - delta) lambda); with sin 2beta =
// lambda delta sin phi every such cover of W is also a cover of the whole
// sphere by the same rotations applied to Psi'. Rotations are sampled from
// the Haar measure, each one inducing the hypergraph edge W cap A Psi'',
// and the cover is chosen greedily.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "chroma/error.hpp"
#include "chroma/forbidden_set.hpp"
#include "chroma/hypergraph.hpp"
#include "chroma/parallel.hpp"
#include "chroma/parameters.hpp"
#include "chroma/rng.hpp"
#include "chroma/sphere.hpp"

namespace chroma {

struct Net {
  SphereSpec spec;
  double beta = 0.0;
  Matrix points;  // columns
  std::size_t saturation_probes = 0;
  std::size_t saturation_insertions = 0;
  bool saturation_clean = false;

  std::size_t size() const noexcept { return static_cast<std::size_t>(points.cols()); }
};

inline Net build_net(const SphereSpec& spec, double beta, std::uint64_t seed,
                     const SaturationOptions& opts = {}) {
  if (!(beta > 0.0 && beta < std::numbers::pi / 4)) throw DomainError("build_net needs 0 < beta < pi/4");
  auto set = detail::greedy_saturated_set(spec, beta, seed, Stream::kNet, Stream::kSaturation, opts);
  Net net;
  net.spec = spec;
  net.beta = beta;
  net.points = std::move(set.points);
  net.saturation_probes = set.probes;
  net.saturation_insertions = set.insertions;
  net.saturation_clean = set.clean;
  return net;
}

// 1 / (2 n ln n), clamped to (0, 0.9].
inline double default_cover_delta(int n) {
  if (n < 2) throw DomainError("cover delta needs n >= 2");
  const double d = 1.0 / (2.0 * n * std::log(static_cast<double>(n)));
  return std::min(d, 0.9);
}

// sin 2beta = lambda delta sin phi.
inline double net_beta(double phi, double lambda, double delta) {
  return 0.5 * std::asin(lambda * delta * std::sin(phi));
}

struct CoverInstance {
  Net net;
  ForbiddenSet outer;  // Psi'
  ForbiddenSet inner;  // Psi''
  double delta = 0.0;
  double beta = 0.0;
  std::vector<Rotation> rotations;
  Hypergraph graph;  // vertices: net points; one edge per rotation
};

inline CoverInstance make_cover_instance(const ForbiddenSet& outer, double delta, std::uint64_t seed,
                                         const SaturationOptions& net_opts = {}) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("cover delta must lie in (0, 1)");
  const double beta = net_beta(outer.phi(), outer.lambda(), delta);
  Net net = build_net(outer.spec(), beta, seed, net_opts);
  ForbiddenSet inner = outer.with_lambda((1.0 - delta) * outer.lambda());
  CoverInstance ci{std::move(net), outer, std::move(inner), delta, beta, {}, {}};
  ci.graph.vertices = ci.net.size();
  return ci;
}

// Extends the instance to m rotations: rotation 0 is the identity and
// rotation i > 0 is drawn from its own derived stream, so growing m never
// changes earlier edges. edge_A = { w : A^{-1} w in Psi'' }.
inline void sample_edges(CoverInstance& ci, std::size_t m, std::uint64_t seed, unsigned threads = 1) {
  const SphereSpec& spec = ci.net.spec;
  const std::size_t start = ci.rotations.size();
  if (m <= start) return;
  for (std::size_t i = start; i < m; ++i) {
    if (i == 0) {
      ci.rotations.push_back(Rotation::identity(spec.dim()));
    } else {
      Rng rng(seed, Stream::kRotations, i);
      ci.rotations.push_back(random_rotation(spec, rng));
    }
  }
  ci.graph.edges.resize(m);
  const Matrix& centers = ci.inner.packing().centers;
  parallel_for(m - start, threads, [&](std::size_t k) {
    const std::size_t i = start + k;
    // <A^T w, x_j> = <w, A x_j>
    const Matrix rotated = ci.rotations[i].matrix() * centers;
    const Matrix dots = rotated.transpose() * ci.net.points;
    auto& edge = ci.graph.edges[i];
    for (Eigen::Index w = 0; w < dots.cols(); ++w) {
      if (ci.inner.piece_of_dots(dots.col(w).data())) edge.push_back(static_cast<std::uint32_t>(w));
    }
  });
}

struct CoverResult {
  std::vector<std::size_t> chosen;  // rotation indices, in color order
  std::vector<Rotation> chosen_rotations;
  std::size_t cover_size = 0;
  bool verified_net = false;
  std::size_t verified_sphere_samples = 0;
  std::size_t violations = 0;
};

inline CoverResult greedy_cover(const CoverInstance& ci) {
  CoverResult res;
  res.chosen = greedy_cover(ci.graph);
  for (auto i : res.chosen) res.chosen_rotations.push_back(ci.rotations[i]);
  res.cover_size = res.chosen.size();
  res.verified_net = true;
  return res;
}

// ---------------------------------------------------------------------------
// Coloring of the sphere by a finite family of rotated forbidden sets.

class SphereColoring {
 public:
  SphereColoring(ForbiddenSet fs, std::vector<Rotation> rotations)
      : fs_(std::move(fs)), rotations_(std::move(rotations)) {
    const Matrix& centers = fs_.packing().centers;
    const Eigen::Index k = centers.cols();
    stacked_.resize(centers.rows(), k * static_cast<Eigen::Index>(rotations_.size()));
    for (std::size_t i = 0; i < rotations_.size(); ++i) {
      stacked_.middleCols(static_cast<Eigen::Index>(i) * k, k) = rotations_[i].matrix() * centers;
    }
  }

  const ForbiddenSet& forbidden_set() const noexcept { return fs_; }
  const std::vector<Rotation>& rotations() const noexcept { return rotations_; }
  std::size_t color_count() const noexcept { return rotations_.size(); }
  const SphereSpec& spec() const noexcept { return fs_.spec(); }

  // Smallest i with p in A_i Psi'; nullopt if no copy contains p. p must lie
  // on the sphere.
  std::optional<std::size_t> color(const Eigen::Ref<const Vector>& p) const {
    const Vector dots = stacked_.transpose() * p;
    const std::size_t k = fs_.packing().size();
    for (std::size_t i = 0; i < rotations_.size(); ++i) {
      if (fs_.piece_of_dots(dots.data() + i * k)) return i;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> color(const SpherePoint& p) const {
    detail::require_on_sphere(spec(), p.coords());
    return color(p.coords());
  }

 private:
  ForbiddenSet fs_;
  std::vector<Rotation> rotations_;
  Matrix stacked_;  // rotated centers, k columns per rotation
};

struct TransferReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t net_points_checked = 0;
  std::size_t net_violations = 0;

  bool passed() const { return violations == 0 && net_violations == 0; }
};

// Checks that the rotations chosen for the net cover uniformly sampled
// sphere points with copies of Psi'. When `net` is given its points are
// checked too.
inline TransferReport transfer_cover(CoverResult& result, const ForbiddenSet& outer, std::size_t samples,
                                     std::uint64_t seed, const Net* net = nullptr) {
  if (!result.verified_net || result.chosen_rotations.empty()) {
    throw StateError("transfer_cover needs a verified, nonempty net cover");
  }
  const SphereColoring coloring(outer, result.chosen_rotations);
  TransferReport rep;
  Rng rng(seed, Stream::kSaturation, 0x7f);
  for (std::size_t s = 0; s < samples; ++s) {
    if (!coloring.color(random_point(outer.spec(), rng).coords())) ++rep.violations;
  }
  rep.samples = samples;
  if (net) {
    for (Eigen::Index w = 0; w < net->points.cols(); ++w) {
      if (!coloring.color(net->points.col(w))) ++rep.net_violations;
    }
    rep.net_points_checked = net->size();
  }
  result.verified_sphere_samples = rep.samples;
  result.violations = rep.violations;
  return rep;
}

// ---------------------------------------------------------------------------
// Explicit bounds.

// log of the upper bound
//   lambda^-n (1-delta)^-n sqrt((1 - lambda^2 (1-delta)^2 sin^2 2phi) / (1 - sin^2 2phi))
//   * (1 + n ln(1 + gamma'/beta) - n ln sin phi + ln(2 pi (n+1)) / 2)
// on the number of rotated copies of Psi' needed to cover the sphere, with
// sin gamma' = lambda (1-delta) sin 2phi and sin 2beta = lambda delta sin phi.
// +inf when phi = pi/4 makes the square root blow up.
inline double log_bound_pre(double phi, double lambda, int n, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("bound_pre needs delta in (0, 1)");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("bound_pre needs lambda in (0, 1)");
  const double s2 = std::pow(std::sin(2.0 * phi), 2);
  if (s2 >= 1.0) return std::numeric_limits<double>::infinity();
  const double inner = lambda * (1.0 - delta);
  const double gamma_p = std::asin(inner * std::sin(2.0 * phi));
  const double beta = net_beta(phi, lambda, delta);
  const double nd = static_cast<double>(n);
  const double log_factor = 1.0 + nd * std::log1p(gamma_p / beta) - nd * std::log(std::sin(phi)) +
                            0.5 * std::log(2.0 * std::numbers::pi * (nd + 1.0));
  return -nd * std::log(lambda) - nd * std::log1p(-delta) +
         0.5 * std::log((1.0 - inner * inner * s2) / (1.0 - s2)) + std::log(log_factor);
}

inline double bound_pre(double phi, double lambda, int n, double delta) {
  return std::exp(log_bound_pre(phi, lambda, n, delta));
}

// Uses the critical coefficient lambda0 of the parameters.
inline double bound_pre(const RadiusParams& params, int n, double delta) {
  return bound_pre(params.phi, params.lambda0, n, delta);
}

// Upper bound (1 + gamma'/beta)^n sqrt(2 pi (n+1)) / sin^n phi on the number
// of net points inside one rotated copy of Psi''.
inline double edge_size_bound(double phi, double lambda, int n, double delta) {
  const double gamma_p = std::asin(lambda * (1.0 - delta) * std::sin(2.0 * phi));
  const double beta = net_beta(phi, lambda, delta);
  return std::pow(1.0 + gamma_p / beta, n) * std::sqrt(2.0 * std::numbers::pi * (n + 1)) /
         std::pow(std::sin(phi), n);
}

// ---------------------------------------------------------------------------
// Haar invariance: P(A w in Psi'') = rho(Psi'') for any fixed w.

struct HaarReport {
  std::size_t rotations = 0;
  double fraction = 0.0;
  double fraction_se = 0.0;
  DensityEstimate density;
  double z = 0.0;  // |fraction - density| / combined standard error

  bool passed(double sigmas = 3.0) const { return z <= sigmas; }
};

inline HaarReport haar_check(const ForbiddenSet& fs, const SpherePoint& w, std::size_t m,
                             std::uint64_t seed) {
  detail::require_on_sphere(fs.spec(), w.coords());
  HaarReport rep;
  rep.rotations = m;
  std::size_t hits = 0;
  Rng rng(seed, Stream::kHaar);
  for (std::size_t i = 0; i < m; ++i) {
    const Rotation a = random_rotation(fs.spec(), rng);
    if (fs.piece_of(a.matrix() * w.coords())) ++hits;
  }
  rep.fraction = m ? static_cast<double>(hits) / static_cast<double>(m) : 0.0;
  rep.fraction_se = m ? std::sqrt(rep.fraction * (1.0 - rep.fraction) / static_cast<double>(m)) : 0.0;
  rep.density = mc_density(fs, m, derive_seed(seed, Stream::kHaar, 1));
  const double se = std::hypot(rep.fraction_se, rep.density.std_error);
  const double diff = std::abs(rep.fraction - rep.density.estimate);
  rep.z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return rep;
}

// ---------------------------------------------------------------------------
// End-to-end sphere coloring.

// The color class on one sphere: packing angle, shrink and piece mode.
struct ColoringPlan {
  SphereSpec spec;
  double phi = 0.0;
  double lambda = 0.0;
  PieceMode mode = PieceMode::kAllPieces;
};

struct SphereColoringConfig {
  double lambda_fraction = 0.95;  // large R: lambda = fraction * lambda0
  double eps = 0.01;              // small R: lambda = 1 / (2R sin 2phi + eps)
  std::optional<double> phi;      // small R packing angle; default pi/4 - 1/n
  std::optional<double> delta;    // default 1 / (2 n ln n)
  std::size_t rotations = 512;
  std::size_t max_rotations = std::size_t{1} << 16;
  SaturationOptions packing{};
  SaturationOptions net{};
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Large R: all pieces with lambda = fraction * lambda0. Small R: the
// cross-piece separation bound is below 1, so one piece of the packing is
// the color class.
inline ColoringPlan plan_for_sphere(const SphereSpec& spec, const SphereColoringConfig& cfg) {
  if (!(spec.R > 0.5)) throw DomainError("sphere coloring needs R > 1/2");
  ColoringPlan plan;
  plan.spec = spec;
  if (spec.R > kRegimeThreshold) {
    if (!(cfg.lambda_fraction > 0.0 && cfg.lambda_fraction <= 1.0)) {
      throw DomainError("lambda fraction must lie in (0, 1]");
    }
    const RadiusParams p = large_R_params(spec.R);
    plan.phi = p.phi;
    plan.lambda = cfg.lambda_fraction * p.lambda0;
    plan.mode = PieceMode::kAllPieces;
  } else {
    const RadiusParams p = small_R_params(spec.R, cfg.phi.value_or(default_small_phi(spec.n)), cfg.eps);
    plan.phi = p.phi;
    plan.lambda = p.lambda0;
    plan.mode = PieceMode::kSinglePiece;
  }
  return plan;
}

struct SphereColoringRun {
  ColoringPlan plan;
  double delta = 0.0;
  double beta = 0.0;
  std::size_t packing_size = 0;
  std::size_t net_size = 0;
  std::size_t rotations_sampled = 0;
  std::size_t max_edge = 0;
  double mean_edge = 0.0;
  std::size_t net_probes = 0;  // saturation probes spent on the net
  bool net_clean = false;      // the net's last probe round inserted nothing
  CoverResult cover;
  SphereColoring coloring;
};

inline SphereColoringRun color_sphere(const ColoringPlan& plan, const SphereColoringConfig& cfg) {
  const SphereSpec& spec = plan.spec;
  const double delta = cfg.delta.value_or(default_cover_delta(spec.n));
  CapPacking packing = build_packing(spec, plan.phi, cfg.packing, cfg.seed);
  std::optional<std::size_t> single;
  if (plan.mode == PieceMode::kSinglePiece) single = 0;
  ForbiddenSet outer(std::move(packing), plan.lambda, single);
  CoverInstance ci = make_cover_instance(outer, delta, cfg.seed, cfg.net);

  std::size_t m = std::max<std::size_t>(cfg.rotations, 1);
  CoverResult cover;
  for (;;) {
    sample_edges(ci, m, cfg.seed, cfg.threads);
    try {
      cover = greedy_cover(ci);
      break;
    } catch (const IncompleteCoverError&) {
      if (m >= cfg.max_rotations) throw;
      m = std::min(2 * m, cfg.max_rotations);
    }
  }

  std::size_t max_edge = 0;
  double total = 0.0;
  for (const auto& e : ci.graph.edges) {
    max_edge = std::max(max_edge, e.size());
    total += static_cast<double>(e.size());
  }
  SphereColoring coloring(outer, cover.chosen_rotations);
  return SphereColoringRun{plan,
                           delta,
                           ci.beta,
                           outer.packing().size(),
                           ci.net.size(),
                           ci.rotations.size(),
                           max_edge,
                           total / static_cast<double>(ci.graph.edges.size()),
                           ci.net.saturation_probes,
                           ci.net.saturation_clean,
                           std::move(cover),
                           std::move(coloring)};
}

inline SphereColoringRun color_sphere(const SphereSpec& spec, const SphereColoringConfig& cfg) {
  return color_sphere(plan_for_sphere(spec, cfg), cfg);
}

// Pairs at chord distance exactly `distance` built by moving a random point
// along a random geodesic; counts pairs that share a color (and pairs with
// an uncolored endpoint).
struct MonochromaticReport {
  std::size_t pairs = 0;
  std::size_t monochromatic = 0;
  std::size_t uncolored = 0;
  double max_chord_error = 0.0;

  bool passed() const { return monochromatic == 0 && uncolored == 0; }
};

inline MonochromaticReport certify_unit_pairs(const SphereColoring& coloring, std::size_t pairs,
                                              std::uint64_t seed, double distance = 1.0) {
  const SphereSpec& spec = coloring.spec();
  if (!(distance <= 2.0 * spec.R)) throw DomainError("distance exceeds the sphere diameter");
  const double angle = 2.0 * std::asin(distance / (2.0 * spec.R));
  MonochromaticReport rep;
  Rng rng(seed, Stream::kPairs, 0x51);
  for (std::size_t k = 0; k < pairs; ++k) {
    const SpherePoint p = random_point(spec, rng);
    const SpherePoint q = point_at_angle(spec, p, angle, rng);
    rep.max_chord_error = std::max(rep.max_chord_error, std::abs((p.coords() - q.coords()).norm() - distance));
    const auto cp = coloring.color(p.coords());
    const auto cq = coloring.color(q.coords());
    ++rep.pairs;
    if (!cp || !cq) {
      ++rep.uncolored;
    } else if (*cp == *cq) {
      ++rep.monochromatic;
    }
  }
  return rep;
}

}  // namespace chroma
