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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "chroma/covering.hpp"

namespace chroma {
namespace {

const SphereSpec kSpec(2, 2.0);

const ForbiddenSet& outer_r2() {
  static const ForbiddenSet fs(build_packing(kSpec, solve_phi(2.0), {}, 1), 0.95 * lambda0(2.0));
  return fs;
}

const SphereColoringRun& run_r2() {
  static const SphereColoringRun run = color_sphere(kSpec, SphereColoringConfig{});
  return run;
}

TEST(Net, SeparatedAndSaturated) {
  const double beta = net_beta(solve_phi(2.0), 0.95 * lambda0(2.0), default_cover_delta(2));
  EXPECT_NEAR(beta, 0.023144243114288114, 1e-15);
  const Net net = build_net(kSpec, beta, 4);
  EXPECT_LE(static_cast<double>(net.size()), 1.0 / cap_measure(2, beta));
  for (Eigen::Index i = 0; i < net.points.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < net.points.cols(); ++j) {
      EXPECT_GT(detail::angle_between(net.points.col(i), net.points.col(j)), 2 * beta);
    }
  }
  // A clean round of M probes leaves an uncovered fraction below about 3 / M;
  // independent probes then miss at most a Poisson(0.6) count.
  EXPECT_TRUE(net.saturation_clean);
  const SaturationOptions defaults;
  const std::size_t probes = 20'000;
  const double mean_bound = 3.0 / static_cast<double>(defaults.probes) * static_cast<double>(probes);
  EXPECT_NEAR(mean_bound, 0.6, 1e-12);
  Rng rng(8);
  std::size_t misses = 0;
  for (std::size_t k = 0; k < probes; ++k) {
    const Vector q = random_point(kSpec, rng).coords();
    double best = 10.0;
    for (Eigen::Index i = 0; i < net.points.cols(); ++i) {
      best = std::min(best, detail::angle_between(q, net.points.col(i)));
    }
    if (best > 2 * beta) ++misses;
  }
  // P(Poisson(0.6) > 5) < 1e-4.
  EXPECT_LE(misses, 5u);
  EXPECT_THROW(build_net(kSpec, 0.0, 1), DomainError);
}

TEST(CoverDelta, Default) {
  EXPECT_NEAR(default_cover_delta(2), 0.36067376022224085, 1e-15);
  EXPECT_NEAR(default_cover_delta(100), 1.0 / (200 * std::log(100.0)), 1e-17);
  EXPECT_THROW(default_cover_delta(1), DomainError);
}

TEST(CoverInstance, InnerCoefficientAndEdges) {
  CoverInstance ci = make_cover_instance(outer_r2(), 0.36, 2);
  EXPECT_DOUBLE_EQ(ci.inner.lambda(), 0.64 * ci.outer.lambda());
  sample_edges(ci, 64, 2);
  ASSERT_EQ(ci.rotations.size(), 64u);
  EXPECT_EQ(ci.rotations[0].matrix(), Matrix::Identity(3, 3));
  // Identity edge = net points inside Psi''.
  std::vector<std::uint32_t> expected;
  for (Eigen::Index w = 0; w < ci.net.points.cols(); ++w) {
    if (ci.inner.contains(SpherePoint(kSpec, ci.net.points.col(w)))) expected.push_back(static_cast<std::uint32_t>(w));
  }
  EXPECT_EQ(ci.graph.edges[0], expected);
  // Spot check another edge through A^{-1} w.
  const Rotation& a = ci.rotations[17];
  for (Eigen::Index w = 0; w < ci.net.points.cols(); ++w) {
    const SpherePoint p = a.apply_inverse(kSpec, SpherePoint(kSpec, ci.net.points.col(w)));
    const auto& e = ci.graph.edges[17];
    EXPECT_EQ(ci.inner.contains(p), std::binary_search(e.begin(), e.end(), static_cast<std::uint32_t>(w)));
  }
  const double bound = edge_size_bound(ci.outer.phi(), ci.outer.lambda(), 2, 0.36);
  for (const auto& e : ci.graph.edges) EXPECT_LE(static_cast<double>(e.size()), bound);
}

TEST(CoverInstance, GrowingKeepsEarlierEdgesAndThreadsAgree) {
  CoverInstance a = make_cover_instance(outer_r2(), 0.36, 3);
  CoverInstance b = a;
  sample_edges(a, 40, 3, 1);
  sample_edges(b, 16, 3, 1);
  sample_edges(b, 40, 3, 3);
  EXPECT_EQ(a.graph.edges, b.graph.edges);
}

TEST(CoverInstance, RejectsBadDelta) {
  EXPECT_THROW(make_cover_instance(outer_r2(), 0.0, 1), DomainError);
  EXPECT_THROW(make_cover_instance(outer_r2(), 1.0, 1), DomainError);
}

TEST(CoverInstance, MeanEdgeFractionMatchesDensity) {
  CoverInstance ci = make_cover_instance(outer_r2(), 0.36, 5);
  sample_edges(ci, 512, 5);
  double mean = 0.0;
  for (std::size_t i = 1; i < ci.graph.edges.size(); ++i) mean += static_cast<double>(ci.graph.edges[i].size());
  mean /= static_cast<double>(ci.graph.edges.size() - 1) * static_cast<double>(ci.net.size());
  const DensityEstimate d = mc_density(ci.inner, 400'000, 6);
  // Edge fractions are correlated across net points; allow a generous band.
  EXPECT_NEAR(mean, d.estimate, 0.1 * d.estimate);
}

// Toy pipeline instance small enough for the exact LP: tau* of the sampled
// family sits between the weak-duality bound and 1/rho(Psi'').
TEST(CoverInstance, FractionalCoverBetweenBounds) {
  const SphereSpec spec(2, 1.2);
  const ForbiddenSet outer(build_packing(spec, solve_phi(1.2), {}, 1), 0.95 * lambda0(1.2));
  CoverInstance ci = make_cover_instance(outer, 0.8, 1);
  sample_edges(ci, 2048, 1);
  const double tau_star = fractional_cover_exact(ci.graph).value;
  const DensityEstimate d = mc_density(ci.inner, 1'000'000, 2);
  const auto widest = static_cast<double>(ci.graph.max_edge_size());
  EXPECT_LE(tau_star, (1.0 / d.estimate) * (1.0 + 3.0 * d.std_error / d.estimate));
  EXPECT_GE(tau_star, static_cast<double>(ci.net.size()) / widest - 1e-9);
  EXPECT_LE(static_cast<double>(greedy_cover(ci).cover_size), (1.0 + std::log(widest)) * tau_star);
}

TEST(Bound, Values) {
  const double phi = solve_phi(2.0), l = 0.95 * lambda0(2.0), d = default_cover_delta(2);
  EXPECT_NEAR(bound_pre(phi, l, 2, d) / 249.63863054007180, 1.0, 1e-12);
  EXPECT_NEAR(edge_size_bound(phi, l, 2, d) / 1744.3278438944400, 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(bound_pre(std::numbers::pi / 4, 0.5, 3, 0.1)));
  EXPECT_THROW(bound_pre(phi, l, 2, 0.0), DomainError);
}

TEST(Bound, RootTendsToInverseLambda) {
  const RadiusParams p = large_R_params(2.0);
  const std::pair<int, double> oracle[] = {
      {10, 1.5980225049447429}, {100, 1.0750185950323213}, {1000, 1.0098038101907684}, {10000, 1.0012245708681314}};
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [n, ratio] : oracle) {
    const double root = std::exp(log_bound_pre(p.phi, p.lambda0, n, default_cover_delta(n)) / n);
    EXPECT_NEAR(root * p.lambda0, ratio, 1e-10) << n;
    EXPECT_LT(root, prev);
    prev = root;
  }
}

TEST(ColorSphere, EndToEnd) {
  const SphereColoringRun& run = run_r2();
  EXPECT_TRUE(run.cover.verified_net);
  EXPECT_EQ(run.coloring.color_count(), run.cover.cover_size);
  EXPECT_LE(run.cover.cover_size, run.net_size);
  EXPECT_LE(static_cast<double>(run.max_edge), edge_size_bound(run.plan.phi, run.plan.lambda, 2, run.delta));
  std::vector<std::size_t> sorted = run.cover.chosen;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  EXPECT_LT(sorted.back(), run.rotations_sampled);
  const MonochromaticReport m = certify_unit_pairs(run.coloring, 20'000, 3);
  EXPECT_TRUE(m.passed());
  EXPECT_LT(m.max_chord_error, 1e-12);
}

TEST(ColorSphere, TransferCoversSphereAndNet) {
  SphereColoringRun run = run_r2();
  CoverInstance ci = make_cover_instance(run.coloring.forbidden_set(), run.delta, SphereColoringConfig{}.seed);
  const TransferReport t = transfer_cover(run.cover, run.coloring.forbidden_set(), 20'000, 4, &ci.net);
  EXPECT_TRUE(t.passed());
  EXPECT_EQ(t.net_points_checked, run.net_size);
  EXPECT_EQ(run.cover.violations, 0u);
  EXPECT_EQ(run.cover.verified_sphere_samples, 20'000u);
}

TEST(ColorSphere, TransferRefusesEmptyCover) {
  CoverResult empty;
  EXPECT_THROW(transfer_cover(empty, outer_r2(), 10, 1), StateError);
  empty.verified_net = true;
  EXPECT_THROW(transfer_cover(empty, outer_r2(), 10, 1), StateError);
}

TEST(ColorSphere, DeterministicUnderSeed) {
  SphereColoringConfig cfg;
  cfg.seed = 77;
  cfg.rotations = 128;
  const SphereSpec spec(2, 1.5);
  const auto a = color_sphere(spec, cfg);
  cfg.threads = 3;
  const auto b = color_sphere(spec, cfg);
  EXPECT_EQ(a.cover.chosen, b.cover.chosen);
}

TEST(ColorSphere, SmallRadiusUsesSinglePiece) {
  SphereColoringConfig cfg;
  cfg.rotations = 256;
  const auto run = color_sphere(SphereSpec(2, 1.0), cfg);
  EXPECT_EQ(run.plan.mode, PieceMode::kSinglePiece);
  EXPECT_TRUE(certify_unit_pairs(run.coloring, 20'000, 9).passed());
}

// The default delta at n = 3 needs a net of millions of points; a coarse
// delta keeps the instance small.
TEST(ColorSphere, ThreeSphere) {
  SphereColoringConfig cfg;
  cfg.rotations = 256;
  cfg.delta = 0.8;
  const auto run = color_sphere(SphereSpec(3, 1.2), cfg);
  EXPECT_TRUE(run.net_clean);
  EXPECT_TRUE(certify_unit_pairs(run.coloring, 10'000, 9).passed());
}

TEST(ColorSphere, RejectsSmallRadius) {
  EXPECT_THROW(plan_for_sphere(SphereSpec(2, 0.5), SphereColoringConfig{}), DomainError);
  SphereColoringConfig cfg;
  cfg.lambda_fraction = 1.5;
  EXPECT_THROW(plan_for_sphere(kSpec, cfg), DomainError);
}

TEST(Haar, FractionMatchesDensity) {
  const ForbiddenSet inner = outer_r2().with_lambda(0.64 * outer_r2().lambda());
  Rng rng(3);
  const HaarReport a = haar_check(inner, random_point(kSpec, rng), 50'000, 10);
  const HaarReport b = haar_check(inner, random_point(kSpec, rng), 50'000, 11);
  EXPECT_TRUE(a.passed());
  EXPECT_TRUE(b.passed());
  const double se = std::hypot(a.fraction_se, b.fraction_se);
  EXPECT_LE(std::abs(a.fraction - b.fraction), 3 * se);
  EXPECT_LT(haar_check(inner.with_lambda(1e-3), random_point(kSpec, rng), 10'000, 12).fraction, 1e-3);
}

}  // namespace
}  // namespace chroma
