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

// JSON artifacts. Reals are written with 17 significant digits so that
// every double round-trips; non-finite values become null.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "chroma/ball.hpp"
#include "chroma/covering.hpp"
#include "chroma/error.hpp"
#include "chroma/forbidden_set.hpp"
#include "chroma/hypergraph.hpp"
#include "chroma/parameters.hpp"
#include "chroma/sphere.hpp"

namespace chroma::io {

using json = nlohmann::json;

inline std::string format_real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void dump(const json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::dump(j, indent, 0, out);
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text << '\n';
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_file(path, dump(j)); }

inline json read_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  return json::parse(f);
}

inline json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Points and matrices as flat row-major arrays.
inline json flat(const Eigen::Ref<const Matrix>& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  }
  return a;
}

inline json columns(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(flat(m.col(j).transpose()));
  return a;
}

inline json to_json(const RadiusParams& p) {
  return {{"R", p.R},         {"regime", to_string(p.regime)}, {"phi", p.phi},     {"lambda0", p.lambda0},
          {"alpha", p.alpha}, {"gamma", p.gamma},             {"x", p.x},         {"eps", p.eps}};
}

inline json to_json(const SystemResiduals& r) {
  return {{"first", r.first}, {"second", r.second}, {"third", r.third}, {"ok", r.ok()}};
}

inline json to_json(const ShellParams& s) {
  return {{"r", s.r},
          {"eps", s.eps},
          {"r_star", s.r_star},
          {"phi_r", s.phi_r},
          {"lambda_r", s.lambda_r},
          {"delta_r", s.delta_r},
          {"diameter_margin", s.diameter_margin},
          {"separation_margin", s.separation_margin},
          {"mode", to_string(s.mode)}};
}

inline json to_json(const CapPacking& p) {
  return {{"n", p.spec.n},
          {"R", p.spec.R},
          {"phi", p.phi},
          {"saturation",
           {{"probes", p.saturation_probes}, {"insertions", p.saturation_insertions}, {"clean", p.saturation_clean}}},
          {"centers", columns(p.centers)}};
}

inline json to_json(const ForbiddenSet& fs) {
  json j = to_json(fs.packing());
  j["lambda"] = fs.lambda();
  j["gamma"] = fs.gamma();
  j["single_piece"] = fs.single_piece() ? json(*fs.single_piece()) : json(nullptr);
  return j;
}

inline CapPacking packing_from_json(const json& j) {
  CapPacking p;
  p.spec = SphereSpec(j.at("n").get<int>(), j.at("R").get<double>());
  p.phi = j.at("phi").get<double>();
  const auto& centers = j.at("centers");
  p.centers.resize(p.spec.dim(), static_cast<Eigen::Index>(centers.size()));
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const auto& v = centers[c];
    if (v.size() != static_cast<std::size_t>(p.spec.dim())) throw DomainError("center has wrong dimension");
    Vector x(p.spec.dim());
    for (int i = 0; i < p.spec.dim(); ++i) x[i] = v[static_cast<std::size_t>(i)].get<double>();
    SpherePoint(p.spec, x);  // validates; the stored values stay bit-exact
    p.centers.col(static_cast<Eigen::Index>(c)) = x;
  }
  return p;
}

inline ForbiddenSet forbidden_from_json(const json& j) {
  std::optional<std::size_t> single;
  if (j.contains("single_piece") && !j["single_piece"].is_null()) single = j["single_piece"].get<std::size_t>();
  return ForbiddenSet(packing_from_json(j), j.at("lambda").get<double>(), single);
}

inline Hypergraph hypergraph_from_json(const json& j) {
  Hypergraph g;
  g.vertices = j.at("vertices").get<std::size_t>();
  for (const auto& e : j.at("edges")) g.edges.push_back(e.get<std::vector<std::uint32_t>>());
  g.validate();
  return g;
}

inline json to_json(const Hypergraph& g) { return {{"vertices", g.vertices}, {"edges", g.edges}}; }

// Rotations of the chosen cover in color order; color i is A_i Psi'.
inline json cover_json(const SphereColoringRun& run, std::uint64_t seed) {
  json rotations = json::array();
  for (const auto& r : run.coloring.rotations()) rotations.push_back(flat(r.matrix()));
  return {{"n", run.plan.spec.n},
          {"R", run.plan.spec.R},
          {"seed", seed},
          {"rotations_sampled", run.rotations_sampled},
          {"chosen", run.cover.chosen},
          {"rotations", std::move(rotations)}};
}

inline json to_json(const ForbiddenCertificate& c) {
  return {{"target", c.target},
          {"tolerance", c.tolerance},
          {"diameter_bound", c.diameter_bound},
          {"separation_bound", real_or_null(c.separation_bound)},
          {"pool_points", c.pool_points},
          {"pairs", c.pairs},
          {"same_piece_pairs", c.same_piece_pairs},
          {"cross_piece_pairs", c.cross_piece_pairs},
          {"gap_violations", c.gap_violations},
          {"diameter_violations", c.diameter_violations},
          {"max_same_piece_chord", c.max_same_piece_chord},
          {"min_cross_piece_chord", real_or_null(c.min_cross_piece_chord)},
          {"passed", c.passed()}};
}

inline json to_json(const Proposition1Report& r) {
  return {{"threshold", r.threshold},
          {"samples", r.samples},
          {"boundary_samples", r.boundary_samples},
          {"active_facets", r.active_facets},
          {"pieces_without_facets", r.pieces_without_facets},
          {"min_active_clearance", real_or_null(r.min_active_clearance)},
          {"min_all_clearance", real_or_null(r.min_all_clearance)},
          {"min_cross_piece_angle", real_or_null(r.min_cross_piece_angle)},
          {"cross_pairs", r.cross_pairs},
          {"passed", r.passed()}};
}

inline json to_json(const DensityEstimate& d) {
  return {{"estimate", d.estimate}, {"std_error", d.std_error}, {"samples", d.samples}, {"hits", d.hits}};
}

inline json to_json(const HaarReport& h) {
  return {{"rotations", h.rotations},
          {"fraction", h.fraction},
          {"fraction_se", h.fraction_se},
          {"density", to_json(h.density)},
          {"z", h.z},
          {"passed", h.passed()}};
}

inline json to_json(const TransferReport& t) {
  return {{"samples", t.samples},
          {"violations", t.violations},
          {"net_points_checked", t.net_points_checked},
          {"net_violations", t.net_violations},
          {"passed", t.passed()}};
}

inline json to_json(const MonochromaticReport& m) {
  return {{"pairs", m.pairs},
          {"monochromatic", m.monochromatic},
          {"uncolored", m.uncolored},
          {"max_chord_error", m.max_chord_error},
          {"passed", m.passed()}};
}

inline json to_json(const BallCertificate& c) {
  return {{"pairs", c.pairs},
          {"monochromatic", c.monochromatic},
          {"uncolored", c.uncolored},
          {"same_shell_pairs", c.same_shell_pairs},
          {"cross_shell_pairs", c.cross_shell_pairs},
          {"inner_pairs", c.inner_pairs},
          {"thickness_violations", c.thickness_violations},
          {"max_distance_error", c.max_distance_error},
          {"passed", c.passed()}};
}

inline json run_summary(const SphereColoringRun& run) {
  return {{"R", run.plan.spec.R},
          {"phi", run.plan.phi},
          {"lambda", run.plan.lambda},
          {"mode", to_string(run.plan.mode)},
          {"delta", run.delta},
          {"beta", run.beta},
          {"packing_size", run.packing_size},
          {"net_size", run.net_size},
          {"net_probes", run.net_probes},
          {"net_clean", run.net_clean},
          {"rotations_sampled", run.rotations_sampled},
          {"max_edge", run.max_edge},
          {"mean_edge", run.mean_edge},
          {"color_count", run.coloring.color_count()}};
}

inline json plan_json(const ShellPlan& plan) {
  json shells = json::array();
  for (const auto& s : plan.shells) shells.push_back(to_json(s));
  return {{"n", plan.n},
          {"R", plan.R},
          {"eps", plan.eps},
          {"r_star", plan.r_star},
          {"radii", plan.radii},
          {"inner_radius", plan.inner_radius()},
          {"shells", std::move(shells)}};
}

}  // namespace chroma::io
