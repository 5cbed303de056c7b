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

// Acceptance gate: one PASS/FAIL line per criterion. Every tolerance and
// runtime budget is fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "chroma/chroma.hpp"
#include "chroma/io.hpp"

namespace {

using namespace chroma;

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [violated: " << what << "]";
    }
  }
};

// Shared by criteria 6 and 9.
SphereColoringConfig sphere_config() {
  SphereColoringConfig cfg;
  cfg.seed = kSeed;
  return cfg;
}

void parameters(Outcome& o) {
  const double thr = std::sqrt(5.0) / 2;
  double worst = 0.0;
  for (double R : {0.75, 1.0, thr + 1e-9, 1.2, 1.5, 2.0, 5.0, 100.0}) {
    const RadiusParams p = R > thr ? large_R_params(R) : small_R_params(R, default_small_phi(2), 0.01);
    worst = std::max(worst, verify_system(p).max());
  }
  o.require(worst < 1e-10, "residual < 1e-10");
  const double gap = std::abs(x_large_formula(thr) - x_of_R(thr));
  o.require(gap < 1e-10, "branch continuity at sqrt(5)/2");
  const double sq5 = std::abs(x_of_R(thr) - std::sqrt(5.0));
  o.require(sq5 < 1e-10, "x(sqrt(5)/2) = sqrt(5)");
  std::size_t grid = 0, bad = 0;
  for (int k = 1; k < 10'000; ++k) {
    const double R = thr + (1.5 - thr) * k / 10'000.0;
    ++grid;
    if (!(x_of_R(R) < 2 * R) || !(x_of_R(R) < 3.0)) ++bad;
  }
  for (double R = thr * 1.0001; R < 1e6; R *= 1.01) {
    ++grid;
    if (!(x_of_R(R) < 3.0)) ++bad;
  }
  o.require(bad == 0, "x < 2R on (sqrt(5)/2, 1.5) and x < 3");
  o.detail << "max residual " << worst << ", branch gap " << gap << ", |x - sqrt5| " << sq5 << ", grid " << grid
           << " points, " << bad << " bad";
}

void lemma1(Outcome& o) {
  std::size_t checks = 0, bad = 0;
  for (int n = 2; n <= 10; ++n) {
    for (int k = 1; k <= 20; ++k) {
      const double phi = 0.05 * k;
      const double theta = cap_measure(n, phi);
      ++checks;
      if (!(theta > std::pow(std::sin(phi), n) / std::sqrt(2 * kPi * (n + 1)))) ++bad;
      for (double t : {1.1, 1.5, 2.0, 3.0}) {
        if (t * phi >= kPi / 2) continue;
        ++checks;
        if (!(cap_measure(n, t * phi) < std::pow(t, n) * theta)) ++bad;
      }
    }
  }
  o.require(bad == 0, "both Lemma 1 inequalities");
  o.detail << checks << " inequalities, " << bad << " violations";
}

void stein_lovasz(Outcome& o) {
  Rng rng(kSeed, Stream::kUser);
  std::size_t ratio_bad = 0, order_bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Hypergraph g;
    g.vertices = 2 + rng.below(11);
    const std::size_t ne = 1 + rng.below(30);
    for (std::size_t e = 0; e < ne; ++e) {
      std::vector<std::uint32_t> edge;
      const double p = 0.1 + 0.5 * rng.uniform();
      for (std::uint32_t v = 0; v < g.vertices; ++v) {
        if (rng.uniform() < p) edge.push_back(v);
      }
      if (edge.empty()) edge.push_back(static_cast<std::uint32_t>(rng.below(g.vertices)));
      g.edges.push_back(std::move(edge));
    }
    for (std::uint32_t v = 0; v < g.vertices; ++v) {
      bool seen = false;
      for (const auto& e : g.edges) seen = seen || std::find(e.begin(), e.end(), v) != e.end();
      if (!seen) g.edges[rng.below(g.edges.size())].push_back(v);
    }
    const double tau_star = fractional_cover_exact(g).value;
    const auto tau = static_cast<double>(exact_cover_number(g));
    const auto greedy = static_cast<double>(greedy_cover(g).size());
    const double bound = (1.0 + std::log(static_cast<double>(g.max_edge_size()))) * tau_star;
    if (greedy > bound + 1e-9) ++ratio_bad;
    if (tau_star > tau + 1e-9 || tau > greedy) ++order_bad;
    worst = std::max(worst, greedy / bound);
  }
  o.require(ratio_bad == 0, "greedy <= (1 + ln max|E|) tau*");
  o.require(order_bad == 0, "tau* <= tau <= greedy");
  o.detail << "100 instances, worst greedy/bound " << worst << ", " << ratio_bad + order_bad << " violations";
}

ForbiddenSet outer_r2() {
  const SphereSpec spec(2, 2.0);
  return ForbiddenSet(build_packing(spec, solve_phi(2.0), {}, kSeed), 0.95 * lambda0(2.0));
}

void forbidden(Outcome& o) {
  const ForbiddenSet fs = outer_r2();
  const auto m = forbidden_margins(2.0, fs.phi(), fs.lambda());
  o.require(m.diameter < 1.0 && 1.0 < m.separation, "D < 1 < S");
  const ForbiddenCertificate c = certify_forbidden(fs, 1.0, 1'000'000, kSeed, 1e-9);
  o.require(c.pairs >= 999'000 && c.gap_violations == 0 && c.passed(), "no pair chord in [D+1e-9, S-1e-9]");
  const Proposition1Report p = check_proposition1(fs, 10'000, kSeed);
  o.require(p.samples == 10'000 && p.min_active_clearance >= p.threshold - 1e-9, "clearance >= phi - alpha - 1e-9");
  o.detail << "D " << m.diameter << ", S " << m.separation << ", " << c.pairs << " pairs (" << c.same_piece_pairs
           << " same piece), " << c.gap_violations << " gap violations, max same-piece chord "
           << c.max_same_piece_chord << ", min cross chord " << c.min_cross_piece_chord << "; clearance "
           << p.min_active_clearance << " vs phi-alpha " << p.threshold << " over " << p.samples << " points";
}

void density(Outcome& o) {
  const ForbiddenSet outer = outer_r2();
  const double delta = default_cover_delta(2);
  const ForbiddenSet inner = outer.with_lambda((1.0 - delta) * outer.lambda());
  const DensityEstimate d = mc_density(inner, 1'000'000, kSeed);
  const double den = analytic_density_bound(inner.phi(), inner.lambda(), 2);
  o.require(d.estimate >= den - 3 * d.std_error, "mc density >= den - 3 sigma");
  Rng rng(kSeed, Stream::kUser, 5);
  const HaarReport h = haar_check(inner, random_point(inner.spec(), rng), 100'000, kSeed);
  o.require(h.passed(3.0), "haar fraction within 3 sigma");
  o.detail << "rho(Psi'') " << d.estimate << " +- " << d.std_error << " vs den " << den << "; haar fraction "
           << h.fraction << ", z " << h.z;
}

void sphere(Outcome& o, std::string& cover_bytes) {
  const SphereSpec spec(2, 2.0);
  SphereColoringRun run = color_sphere(spec, sphere_config());
  o.require(run.net_clean, "net saturated by a clean probe round");
  o.require(run.cover.verified_net, "greedy cover of W completes");
  const TransferReport t = transfer_cover(run.cover, run.coloring.forbidden_set(), 100'000, kSeed);
  o.require(t.passed() && t.samples == 100'000, "0 transfer violations");
  const MonochromaticReport m = certify_unit_pairs(run.coloring, 100'000, kSeed);
  o.require(m.passed() && m.pairs == 100'000, "0 monochromatic unit pairs");
  const double bound = bound_pre(run.plan.phi, run.plan.lambda, 2, run.delta);
  cover_bytes = io::dump(io::cover_json(run, kSeed));
  o.detail << "|X| " << run.packing_size << ", |W| " << run.net_size << ", " << run.rotations_sampled
           << " rotations, " << run.coloring.color_count() << " colors, bound_pre " << bound << " (ratio "
           << static_cast<double>(run.coloring.color_count()) / bound << "), transfer violations " << t.violations
           << ", monochromatic " << m.monochromatic << ", uncolored " << m.uncolored;
}

void asymptotic(Outcome& o) {
  const RadiusParams p = large_R_params(2.0);
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  double last = 0.0;
  for (int n : {10, 100, 1000, 10000}) {
    const double root = std::exp(log_bound_pre(p.phi, p.lambda0, n, default_cover_delta(n)) / n);
    decreasing = decreasing && root < prev;
    prev = root;
    last = root;
    o.detail << "n=" << n << ": " << root << "  ";
  }
  const double rel = last * p.lambda0 - 1.0;
  o.require(decreasing, "root decreasing in n");
  o.require(rel < 0.05, "within 5% of 1/lambda at n = 1e4");
  o.detail << "1/lambda0 " << 1.0 / p.lambda0 << ", relative excess " << rel;
}

void ball(Outcome& o) {
  const ShellPlan plan = plan_shells(2, 2.0, 0.01);
  bool decreasing = true;
  for (std::size_t j = 0; j + 1 < plan.radii.size(); ++j) decreasing = decreasing && plan.radii[j + 1] < plan.radii[j];
  o.require(decreasing && plan.radii.back() < 0.5, "finite, strictly decreasing radii ending < 1/2");
  SphereColoringConfig cfg;
  cfg.seed = kSeed;
  // Per-shell saturation rounds of 2e4 probes, as in `chroma color-ball`.
  cfg.packing.probes = 20'000;
  cfg.net.probes = 20'000;
  const BallColoring bc = build_ball_coloring(plan, cfg);
  bool clean = true;
  for (const auto& run : bc.runs()) clean = clean && run.net_clean;
  o.require(clean, "every shell net saturated by a clean probe round");
  const BallCertificate c = certify_ball(bc, 100'000, kSeed);
  o.require(c.passed() && c.pairs == 100'000, "0 monochromatic unit pairs");
  std::size_t sum = 0;
  for (const auto& run : bc.runs()) sum += run.coloring.color_count();
  o.require(total_colors(bc) == sum + 1, "total colors = sum over shells + 1");
  o.detail << plan.shell_count() << " shells, inner radius " << plan.inner_radius() << ", total colors "
           << total_colors(bc) << " = " << sum << " + 1, " << c.pairs << " pairs (" << c.same_shell_pairs
           << " same shell), monochromatic " << c.monochromatic << ", uncolored " << c.uncolored;
}

}  // namespace

int main() {
  int failures = 0;
  std::string first_cover, second_cover;
  const auto run = [&](int id, const char* name, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < budget_s, "runtime budget");
    if (!o.passed) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s, budget %.0f s]\n", o.passed ? "PASS" : "FAIL", id, name,
                o.detail.str().c_str(), secs, budget_s);
    std::fflush(stdout);
  };

  run(1, "parameter exactness", 1, parameters);
  run(2, "Lemma 1 suite", 10, lemma1);
  run(3, "Stein-Lovasz suite", 60, stein_lovasz);
  run(4, "forbidden-set certificate", 120, forbidden);
  run(5, "density", 120, density);
  run(6, "end-to-end sphere coloring", 300, [&](Outcome& o) { sphere(o, first_cover); });
  run(7, "asymptotic base", 1, asymptotic);
  run(8, "ball coloring", 600, ball);
  run(9, "determinism", 300, [&](Outcome& o) {
    Outcome again;
    sphere(again, second_cover);
    o.require(!first_cover.empty() && first_cover == second_cover, "identical cover.json bytes");
    o.detail << "cover.json " << second_cover.size() << " bytes, identical " << (first_cover == second_cover);
  });
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
