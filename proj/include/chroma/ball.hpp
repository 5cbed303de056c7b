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

// Coloring of the ball B^{n+1}_R by nested shells.
//
// Radii R_1 = R > R_2 > ... with R_{j+1} = R_j - delta(R_j)/2. The shell
// (R_{j+1}, R_j] takes the color of the radial projection onto S^n_{R_j},
// colored with its own palette by rotated copies of a forbidden set that
// avoids every distance in (1 - delta(R_j), 1 + delta(R_j)). Projection
// moves each point by less than delta/2, so unit-distance pairs inside one
// shell land in the forbidden window; pairs in different shells use
// disjoint palettes. The innermost ball has diameter < 1 and one color.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chroma/covering.hpp"
#include "chroma/error.hpp"
#include "chroma/parallel.hpp"
#include "chroma/parameters.hpp"
#include "chroma/rng.hpp"
#include "chroma/sphere.hpp"

namespace chroma {

struct ShellPlan {
  int n = 2;
  double R = 0.0;
  double eps = 0.0;
  double r_star = 0.0;
  std::vector<double> radii;        // R_1 > ... > R_k, R_k < 1/2
  std::vector<ShellParams> shells;  // parameters at R_1 .. R_{k-1}

  std::size_t shell_count() const noexcept { return shells.size(); }
  double inner_radius() const { return std::max(0.0, radii.back()); }
};

inline ShellPlan plan_shells(int n, double R, double eps) {
  if (n < 2) throw DomainError("plan_shells needs n >= 2");
  ShellPlan plan;
  plan.n = n;
  plan.R = R;
  plan.eps = eps;
  plan.radii = shell_radii(R, eps);
  plan.r_star = r_star(eps);
  plan.shells.reserve(plan.radii.size() - 1);
  for (std::size_t j = 0; j + 1 < plan.radii.size(); ++j) {
    plan.shells.push_back(shell_functions(plan.radii[j], eps, plan.r_star));
  }
  return plan;
}

class BallColoring {
 public:
  BallColoring(ShellPlan plan, std::vector<SphereColoringRun> runs)
      : plan_(std::move(plan)), runs_(std::move(runs)) {
    if (runs_.size() != plan_.shells.size()) throw StateError("one sphere coloring per shell expected");
    std::size_t base = 0;
    for (const auto& run : runs_) {
      bases_.push_back(base);
      base += run.coloring.color_count();
    }
    reserved_ = base;
  }

  const ShellPlan& plan() const noexcept { return plan_; }
  const std::vector<SphereColoringRun>& runs() const noexcept { return runs_; }
  const std::vector<std::size_t>& color_bases() const noexcept { return bases_; }
  std::size_t reserved_color() const noexcept { return reserved_; }

  // Shell holding radius r: the j with R_{j+1} < r <= R_j, or nullopt for
  // the inner ball.
  std::optional<std::size_t> shell_of(double r) const {
    const auto& radii = plan_.radii;
    if (r <= radii.back()) return std::nullopt;
    // First index whose radius is < r; the shell is the one before it.
    const auto it = std::upper_bound(radii.begin(), radii.end(), r, std::greater<>());
    return static_cast<std::size_t>(it - radii.begin()) - 1;
  }

 private:
  ShellPlan plan_;
  std::vector<SphereColoringRun> runs_;
  std::vector<std::size_t> bases_;
  std::size_t reserved_ = 0;
};

// One sphere coloring per shell radius. Shell j uses the master seed
// derived with index j; the shells are independent and built in parallel.
// `on_shell` is called from worker threads as each shell finishes.
inline BallColoring build_ball_coloring(const ShellPlan& plan, const SphereColoringConfig& cfg,
                                        const std::function<void(std::size_t)>& on_shell = {}) {
  std::vector<std::optional<SphereColoringRun>> slots(plan.shells.size());
  parallel_for(plan.shells.size(), cfg.threads, [&](std::size_t j) {
    const ShellParams& s = plan.shells[j];
    ColoringPlan cp{SphereSpec(plan.n, s.r), s.phi_r, s.lambda_r, s.mode};
    SphereColoringConfig shell_cfg = cfg;
    shell_cfg.seed = derive_seed(cfg.seed, Stream::kShells, j);
    shell_cfg.threads = 1;
    slots[j].emplace(color_sphere(cp, shell_cfg));
    if (on_shell) on_shell(j);
  });
  std::vector<SphereColoringRun> runs;
  runs.reserve(slots.size());
  for (auto& s : slots) runs.push_back(std::move(*s));
  return BallColoring(plan, std::move(runs));
}

inline BallColoring color_ball(int n, double R, double eps, const SphereColoringConfig& cfg) {
  return build_ball_coloring(plan_shells(n, R, eps), cfg);
}

// Color of a point of the ball; nullopt only if the projected point is
// uncovered by its shell's coloring.
inline std::optional<std::size_t> color_ball_point(const BallColoring& bc, const Eigen::Ref<const Vector>& p) {
  const ShellPlan& plan = bc.plan();
  if (p.size() != plan.n + 1) throw DomainError("point dimension does not match the ball");
  const double r = p.norm();
  if (r > plan.R * (1.0 + kOnSphereTolerance)) throw DomainError("point lies outside the ball");
  const auto shell = bc.shell_of(std::min(r, plan.R));
  if (!shell) return bc.reserved_color();
  const double radius = plan.radii[*shell];
  const Vector q = p * (radius / r);
  const auto c = bc.runs()[*shell].coloring.color(q);
  if (!c) return std::nullopt;
  return bc.color_bases()[*shell] + *c;
}

inline std::size_t total_colors(const BallColoring& bc) { return bc.reserved_color() + 1; }

struct BallCertificate {
  std::size_t pairs = 0;
  std::size_t monochromatic = 0;
  std::size_t uncolored = 0;
  std::size_t same_shell_pairs = 0;
  std::size_t cross_shell_pairs = 0;
  std::size_t inner_pairs = 0;  // both endpoints in the inner ball
  std::size_t thickness_violations = 0;
  double max_distance_error = 0.0;

  bool passed() const {
    return monochromatic == 0 && uncolored == 0 && inner_pairs == 0 && thickness_violations == 0;
  }
};

// Pairs at Euclidean distance exactly 1 with both endpoints inside the
// ball: a uniform point of the ball plus a uniform unit direction, resampled
// until the endpoint falls inside.
inline BallCertificate certify_ball(const BallColoring& bc, std::size_t pair_samples, std::uint64_t seed) {
  const ShellPlan& plan = bc.plan();
  BallCertificate cert;
  for (std::size_t j = 0; j < plan.shells.size(); ++j) {
    const double gap = plan.radii[j] - plan.radii[j + 1];
    const double delta = plan.shells[j].delta_r;
    if (!(gap < delta) || std::abs(gap - 0.5 * delta) > 1e-12 * plan.R) ++cert.thickness_violations;
  }
  const int dim = plan.n + 1;
  Rng rng(seed, Stream::kPairs, 0xba11);
  Vector p(dim);
  Vector d(dim);
  while (cert.pairs < pair_samples) {
    for (int i = 0; i < dim; ++i) p[i] = rng.normal();
    p *= plan.R * std::pow(rng.uniform(), 1.0 / dim) / p.norm();
    for (int i = 0; i < dim; ++i) d[i] = rng.normal();
    d.normalize();
    const Vector q = p + d;
    if (q.norm() > plan.R) continue;
    ++cert.pairs;
    cert.max_distance_error = std::max(cert.max_distance_error, std::abs((q - p).norm() - 1.0));
    const auto sp = bc.shell_of(p.norm());
    const auto sq = bc.shell_of(q.norm());
    if (!sp && !sq) ++cert.inner_pairs;
    (sp == sq ? cert.same_shell_pairs : cert.cross_shell_pairs) += 1;
    const auto cp = color_ball_point(bc, p);
    const auto cq = color_ball_point(bc, q);
    if (!cp || !cq) {
      ++cert.uncolored;
    } else if (*cp == *cq) {
      ++cert.monochromatic;
    }
  }
  return cert;
}

}  // namespace chroma
