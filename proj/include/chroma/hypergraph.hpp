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

// Finite hypergraph covering: greedy cover, exact fractional cover number by
// a dense simplex, and exact cover number by branch and bound.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chroma/error.hpp"

namespace chroma {

struct Hypergraph {
  std::size_t vertices = 0;
  std::vector<std::vector<std::uint32_t>> edges;

  std::size_t max_edge_size() const {
    std::size_t m = 0;
    for (const auto& e : edges) m = std::max(m, e.size());
    return m;
  }

  void validate() const {
    for (const auto& e : edges) {
      for (auto v : e) {
        if (v >= vertices) throw DomainError("edge references vertex " + std::to_string(v));
      }
    }
  }
};

// Repeatedly takes the edge covering the most uncovered vertices (lowest
// index on ties). Returns edge indices in pick order.
inline std::vector<std::size_t> greedy_cover(const Hypergraph& g) {
  g.validate();
  std::vector<char> covered(g.vertices, 0);
  std::size_t remaining = g.vertices;
  std::vector<std::size_t> chosen;
  std::vector<char> used(g.edges.size(), 0);
  while (remaining > 0) {
    std::size_t best = g.edges.size();
    std::size_t best_gain = 0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (used[e]) continue;
      std::size_t gain = 0;
      for (auto v : g.edges[e]) gain += covered[v] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = e;
      }
    }
    if (best == g.edges.size()) {
      std::vector<std::size_t> uncovered;
      for (std::size_t v = 0; v < g.vertices; ++v) {
        if (!covered[v]) uncovered.push_back(v);
      }
      const std::string what = "edges leave " + std::to_string(uncovered.size()) + " vertices uncovered";
      throw IncompleteCoverError(what, std::move(uncovered));
    }
    used[best] = 1;
    chosen.push_back(best);
    for (auto v : g.edges[best]) {
      if (!covered[v]) {
        covered[v] = 1;
        --remaining;
      }
    }
  }
  return chosen;
}

struct FractionalCover {
  double value = 0.0;
  std::vector<double> weights;  // per edge: an optimal fractional cover
  std::vector<double> dual;     // per vertex: an optimal fractional packing
};

// tau*(G) = min sum nu(E) s.t. sum_{E containing v} nu(E) >= 1, nu >= 0.
//
// Solved through its dual, max sum y_v s.t. sum_{v in E} y_v <= 1, y >= 0,
// whose slack basis is feasible, so no phase one is needed. The primal weights
// are read off the reduced costs of the slack columns.
inline FractionalCover fractional_cover_exact(const Hypergraph& g, double eps = 1e-12) {
  g.validate();
  const std::size_t nv = g.vertices;
  const std::size_t ne = g.edges.size();
  std::vector<char> seen(nv, 0);
  for (const auto& e : g.edges) {
    for (auto v : e) seen[v] = 1;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (!seen[v]) throw InfeasibleError("vertex " + std::to_string(v) + " lies in no edge");
  }
  FractionalCover out;
  out.weights.assign(ne, 0.0);
  out.dual.assign(nv, 0.0);
  if (nv == 0) return out;

  using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto rows = static_cast<Eigen::Index>(ne);
  const auto cols = static_cast<Eigen::Index>(nv + ne);  // y, then slacks
  Tableau start = Tableau::Zero(rows, cols + 1);
  Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(cols + 1);
  std::vector<Eigen::Index> basis(ne);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (auto v : g.edges[static_cast<std::size_t>(r)]) start(r, v) = 1.0;
    start(r, static_cast<Eigen::Index>(nv) + r) = 1.0;
    start(r, cols) = 1.0;
    basis[static_cast<std::size_t>(r)] = static_cast<Eigen::Index>(nv) + r;
  }
  cost.head(static_cast<Eigen::Index>(nv)).setConstant(-1.0);
  Tableau t = start;
  Eigen::RowVectorXd obj = cost;

  // Rebuilds the tableau from the original rows through the basis matrix,
  // discarding the roundoff accumulated by pivoting.
  auto reinvert = [&] {
    Eigen::MatrixXd b(rows, rows);
    Eigen::RowVectorXd cb(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
      b.col(k) = start.col(basis[static_cast<std::size_t>(k)]);
      cb(k) = cost(basis[static_cast<std::size_t>(k)]);
    }
    t = b.partialPivLu().solve(start);
    obj = cost - cb * t;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (std::abs(t(r, cols)) <= eps) t(r, cols) = 0.0;
    }
  };

  // Dantzig pricing, switching to Bland's rule while pivots stay degenerate.
  // Optimality is only accepted on a freshly reinverted tableau.
  constexpr std::size_t kDegenerateStreak = 50;
  constexpr double kPivotTol = 1e-9;
  const std::size_t reinvert_every = std::max<std::size_t>(ne, 100);
  const std::size_t max_pivots = 1000 * (ne + static_cast<std::size_t>(cols));
  std::size_t degenerate = 0;
  std::size_t since_reinvert = 0;
  bool fresh = true;
  for (std::size_t pivots = 0;;) {
    const bool bland = degenerate >= kDegenerateStreak;
    Eigen::Index enter = cols;
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (obj(c) < -eps && (enter == cols || (!bland && obj(c) < obj(enter)))) {
        enter = c;
        if (bland) break;
      }
    }
    if (enter == cols) {
      if (fresh) break;
      reinvert();
      fresh = true;
      since_reinvert = 0;
      continue;
    }
    if (++pivots == max_pivots) throw std::runtime_error("fractional packing LP did not converge");
    double min_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double a = t(r, enter);
      if (a > kPivotTol) min_ratio = std::min(min_ratio, t(r, cols) / a);
    }
    if (min_ratio == std::numeric_limits<double>::infinity()) {
      throw InfeasibleError("fractional packing LP is unbounded");
    }
    Eigen::Index leave = rows;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double a = t(r, enter);
      if (a <= kPivotTol || t(r, cols) / a > min_ratio + eps) continue;
      if (leave == rows ||
          (bland ? basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)]
                 : a > t(leave, enter))) {
        leave = r;
      }
    }
    degenerate = min_ratio <= eps ? degenerate + 1 : 0;
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double f = t(r, enter);
      if (r == leave || f == 0.0) continue;
      t.row(r) -= f * t.row(leave);
      t(r, enter) = 0.0;
      if (std::abs(t(r, cols)) <= eps) t(r, cols) = 0.0;
    }
    obj -= obj(enter) * t.row(leave);
    obj(enter) = 0.0;
    basis[static_cast<std::size_t>(leave)] = enter;
    fresh = false;
    if (++since_reinvert == reinvert_every) {
      reinvert();
      fresh = true;
      since_reinvert = 0;
    }
  }

  out.value = obj(cols);
  for (std::size_t e = 0; e < ne; ++e) out.weights[e] = std::max(0.0, obj(static_cast<Eigen::Index>(nv + e)));
  for (std::size_t r = 0; r < ne; ++r) {
    const auto k = static_cast<std::size_t>(basis[r]);
    if (k < nv) out.dual[k] = std::max(0.0, t(static_cast<Eigen::Index>(r), cols));
  }
  return out;
}

// Exact tau(G) by branch and bound for at most 64 vertices. Branches on the
// uncovered vertex contained in the fewest edges.
inline std::size_t exact_cover_number(const Hypergraph& g) {
  g.validate();
  if (g.vertices > 64) throw DomainError("exact_cover_number supports at most 64 vertices");
  if (g.vertices == 0) return 0;
  const std::uint64_t all = g.vertices == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.vertices) - 1;
  std::vector<std::uint64_t> masks;
  masks.reserve(g.edges.size());
  std::uint64_t reach = 0;
  for (const auto& e : g.edges) {
    std::uint64_t m = 0;
    for (auto v : e) m |= std::uint64_t{1} << v;
    masks.push_back(m);
    reach |= m;
  }
  if (reach != all) throw InfeasibleError("some vertex lies in no edge");
  const std::size_t widest = static_cast<std::size_t>(
      std::popcount(*std::max_element(masks.begin(), masks.end(),
                                      [](auto a, auto b) { return std::popcount(a) < std::popcount(b); })));

  std::size_t best = g.edges.size() + 1;
  auto search = [&](auto&& self, std::uint64_t covered, std::size_t depth) -> void {
    if (covered == all) {
      best = std::min(best, depth);
      return;
    }
    const auto open = static_cast<std::size_t>(std::popcount(all & ~covered));
    if (depth + (open + widest - 1) / widest >= best) return;
    int pick = -1;
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < g.vertices; ++v) {
      if (covered >> v & 1) continue;
      std::size_t count = 0;
      for (auto m : masks) count += (m >> v) & 1;
      if (count < fewest) {
        fewest = count;
        pick = static_cast<int>(v);
      }
    }
    for (auto m : masks) {
      if ((m >> pick & 1) && (m & ~covered)) self(self, covered | m, depth + 1);
    }
  };
  search(search, 0, 0);
  return best;
}

}  // namespace chroma
