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

// Command-line front end. Exit codes: 0 when every certificate passes, 1 on
// a certificate failure, 2 on usage or domain errors.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "chroma/chroma.hpp"
#include "chroma/io.hpp"

namespace {

using chroma::io::json;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitCertificate = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Clock {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

void log(const std::string& msg) { std::cerr << "chroma: " << msg << '\n'; }

// Collects certificate outcomes; the first failure names the exit reason.
struct Verdict {
  std::optional<std::string> first_failure;

  void record(const std::string& name, bool passed) {
    if (!passed && !first_failure) first_failure = name;
  }
  int exit_code() const { return first_failure ? kExitCertificate : kExitPass; }
};

struct ExperimentConfig {
  int n = 2;
  double R = 2.0;
  double eps = 0.01;
  double lambda_fraction = 0.95;
  std::optional<double> phi;
  std::uint64_t seed = 1;
  std::size_t samples = 100'000;       // transfer and ball pair samples
  std::size_t pairs = 1'000'000;       // forbidden-set pairs
  std::size_t facet_samples = 10'000;  // Proposition 1 points
  std::size_t density_samples = 1'000'000;
  std::size_t rotations = 512;
  std::size_t max_rotations = std::size_t{1} << 16;
  std::size_t probes = 100'000;       // saturation probes per round
  std::size_t shell_probes = 20'000;  // the same for each ball shell
  std::string out_dir = "out";
  bool ball = false;
  unsigned threads = 1;

  void validate() const {
    chroma::SphereSpec(n, R);
    if (!(R > 0.5)) throw chroma::DomainError("R must exceed 1/2");
    if (!(lambda_fraction > 0.0 && lambda_fraction <= 1.0)) {
      throw chroma::DomainError("lambda fraction must lie in (0, 1]");
    }
    if (!(eps > 0.0)) throw chroma::DomainError("eps must be positive");
    if (rotations == 0 || max_rotations < rotations) throw chroma::DomainError("bad rotation counts");
    if (samples == 0 || pairs == 0 || facet_samples == 0 || density_samples == 0 || probes == 0 ||
        shell_probes == 0) {
      throw chroma::DomainError("sample counts must be positive");
    }
    if (threads == 0) throw chroma::DomainError("threads must be positive");
  }

  chroma::SphereColoringConfig sphere_config() const {
    chroma::SphereColoringConfig c;
    c.lambda_fraction = lambda_fraction;
    c.eps = eps;
    c.phi = phi;
    c.rotations = rotations;
    c.max_rotations = max_rotations;
    c.seed = seed;
    c.threads = threads;
    c.packing.probes = probes;
    c.net.probes = probes;
    return c;
  }

  chroma::SphereColoringConfig shell_config() const {
    chroma::SphereColoringConfig c = sphere_config();
    c.packing.probes = shell_probes;
    c.net.probes = shell_probes;
    return c;
  }

  json to_json() const {
    return {{"n", n},
            {"R", R},
            {"eps", eps},
            {"lambda_fraction", lambda_fraction},
            {"phi", phi ? json(*phi) : json(nullptr)},
            {"seed", seed},
            {"samples", samples},
            {"pairs", pairs},
            {"facet_samples", facet_samples},
            {"density_samples", density_samples},
            {"rotations", rotations},
            {"max_rotations", max_rotations},
            {"probes", probes},
            {"shell_probes", shell_probes},
            {"out_dir", out_dir},
            {"ball", ball}};
  }

  static ExperimentConfig from_json(const json& j) {
    ExperimentConfig c;
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("n", c.n);
    get("R", c.R);
    get("eps", c.eps);
    get("lambda_fraction", c.lambda_fraction);
    if (j.contains("phi") && !j.at("phi").is_null()) c.phi = j.at("phi").get<double>();
    get("seed", c.seed);
    get("samples", c.samples);
    get("pairs", c.pairs);
    get("facet_samples", c.facet_samples);
    get("density_samples", c.density_samples);
    get("rotations", c.rotations);
    get("max_rotations", c.max_rotations);
    get("probes", c.probes);
    get("shell_probes", c.shell_probes);
    get("out_dir", c.out_dir);
    get("ball", c.ball);
    return c;
  }
};

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("CHROMA_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(s, &used, 0);
    if (s[used] != '\0') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("CHROMA_SEED is not an unsigned integer: ") + s);
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
  } else {
    chroma::io::write_file(path, text);
  }
}

// ---------------------------------------------------------------------------
// params

int cmd_params(double R, double eps, int n, const std::string& out) {
  if (!(R > 0.5)) throw chroma::DomainError("params needs R > 1/2");
  json j;
  j["R"] = R;
  j["x"] = chroma::x_of_R(R);
  chroma::RadiusParams p;
  if (R > chroma::kRegimeThreshold) {
    p = chroma::large_R_params(R);
  } else {
    p = chroma::small_R_params(R, chroma::default_small_phi(n), eps);
  }
  j["radius"] = chroma::io::to_json(p);
  j["residuals"] = chroma::io::to_json(chroma::verify_system(p));
  const auto m = chroma::forbidden_margins(R, p.phi, p.lambda0);
  j["margins"] = {{"diameter", m.diameter}, {"separation", m.separation}};

  const double large = chroma::x_large_formula(R);
  const double gap = std::abs(large - 2.0 * R);
  j["branches"] = {{"large", chroma::io::real_or_null(large)},
                   {"two_R", 2.0 * R},
                   {"gap", chroma::io::real_or_null(gap)},
                   {"agree", std::isfinite(gap) && gap < 1e-8}};

  const double rs = chroma::r_star(eps);
  j["shell"] = chroma::io::to_json(chroma::shell_functions(R, eps, rs));
  emit(chroma::io::dump(j), out);
  return kExitPass;
}

// ---------------------------------------------------------------------------
// curve

int cmd_curve(double rmin, double rmax, std::size_t steps, const std::string& out) {
  if (!(rmin > 0.5 && rmin < rmax) || !std::isfinite(rmax)) {
    throw chroma::DomainError("curve needs 1/2 < rmin < rmax");
  }
  if (steps < 2) throw chroma::DomainError("curve needs at least 2 steps");
  std::ostringstream csv;
  csv << "R,x,two_R,three";
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
    const double R = i + 1 == steps ? rmax : rmin + (rmax - rmin) * t;
    csv << '\n'
        << chroma::io::format_real(R) << ',' << chroma::io::format_real(chroma::x_of_R(R)) << ','
        << chroma::io::format_real(2.0 * R) << ",3";
  }
  emit(csv.str(), out);
  return kExitPass;
}

// ---------------------------------------------------------------------------
// construct

struct ConstructStage {
  std::optional<chroma::ForbiddenSet> outer;
  json report;
};

ConstructStage run_construct(const ExperimentConfig& cfg, const chroma::ColoringPlan& plan, Verdict& verdict,
                             json& timings) {
  Clock clock;
  const auto scfg = cfg.sphere_config();
  chroma::CapPacking packing = chroma::build_packing(plan.spec, plan.phi, scfg.packing, cfg.seed);
  std::optional<std::size_t> single;
  if (plan.mode == chroma::PieceMode::kSinglePiece) single = 0;
  ConstructStage st;
  st.outer.emplace(std::move(packing), plan.lambda, single);
  const chroma::ForbiddenSet& fs = *st.outer;
  timings["packing"] = clock.lap();
  log("packing: " + std::to_string(fs.packing().size()) + " centers");

  json& r = st.report;
  r["packing_size"] = fs.packing().size();
  r["phi"] = fs.phi();
  r["lambda"] = fs.lambda();
  r["gamma"] = fs.gamma();
  r["mode"] = chroma::to_string(plan.mode);
  r["cap_count_bound"] = 1.0 / chroma::cap_measure(plan.spec.n, fs.phi());

  try {
    const auto cert = chroma::certify_forbidden(fs, 1.0, cfg.pairs, cfg.seed);
    r["forbidden"] = chroma::io::to_json(cert);
    verdict.record("forbidden", cert.passed());
  } catch (const chroma::ParameterError& e) {
    r["forbidden"] = {{"passed", false}, {"error", e.what()}};
    verdict.record("forbidden", false);
    log(std::string("forbidden certificate: ") + e.what());
  }
  timings["forbidden"] = clock.lap();

  const auto prop = chroma::check_proposition1(fs, cfg.facet_samples, cfg.seed);
  r["proposition1"] = chroma::io::to_json(prop);
  verdict.record("proposition1", prop.passed());
  timings["proposition1"] = clock.lap();

  // The density bound concerns the union of all pieces.
  if (plan.mode == chroma::PieceMode::kAllPieces) {
    const auto d = chroma::mc_density(fs, cfg.density_samples, cfg.seed);
    const double bound = chroma::analytic_density_bound(fs.phi(), fs.lambda(), plan.spec.n);
    const bool ok = d.estimate >= bound - 3.0 * d.std_error;
    r["density"] = {{"monte_carlo", chroma::io::to_json(d)}, {"analytic_bound", bound}, {"passed", ok}};
    verdict.record("density", ok);
  }
  timings["density"] = clock.lap();
  return st;
}

void write_construct(const fs::path& dir, const chroma::ForbiddenSet& outer) {
  chroma::io::write_json(dir / "packing.json", chroma::io::to_json(outer.packing()));
  chroma::io::write_json(dir / "forbidden.json", chroma::io::to_json(outer));
}

json config_echo(const ExperimentConfig& cfg, const chroma::ColoringPlan& plan) {
  json j = cfg.to_json();
  j["phi"] = plan.phi;
  j["lambda"] = plan.lambda;
  j["mode"] = chroma::to_string(plan.mode);
  return j;
}

int finish(const Verdict& v, json& report, const fs::path& dir) {
  report["passed"] = !v.first_failure;
  report["first_failure"] = v.first_failure ? json(*v.first_failure) : json(nullptr);
  chroma::io::write_json(dir / "report.json", report);
  if (v.first_failure) log("certificate failed: " + *v.first_failure);
  return v.exit_code();
}

int cmd_construct(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto plan = chroma::plan_for_sphere(chroma::SphereSpec(cfg.n, cfg.R), cfg.sphere_config());
  Verdict verdict;
  json timings;
  ConstructStage st = run_construct(cfg, plan, verdict, timings);
  const fs::path dir = cfg.out_dir;
  write_construct(dir, *st.outer);
  json report = {{"config", config_echo(cfg, plan)}, {"construct", st.report}, {"timings", timings}};
  return finish(verdict, report, dir);
}

// ---------------------------------------------------------------------------
// color-sphere

json run_color_sphere(const ExperimentConfig& cfg, const chroma::ColoringPlan& plan, Verdict& verdict,
                      json& timings, const fs::path& dir) {
  Clock clock;
  const auto run = chroma::color_sphere(plan, cfg.sphere_config());
  timings["cover"] = clock.lap();
  log("cover: " + std::to_string(run.coloring.color_count()) + " colors from " +
      std::to_string(run.rotations_sampled) + " rotations, net " + std::to_string(run.net_size));
  chroma::io::write_json(dir / "cover.json", chroma::io::cover_json(run, cfg.seed));

  json r = chroma::io::run_summary(run);
  chroma::CoverResult cover = run.cover;
  // The net is a pure function of the seed; rebuild it to check every point.
  const chroma::Net net = chroma::build_net(plan.spec, run.beta, cfg.seed, cfg.sphere_config().net);
  if (net.size() != run.net_size) throw std::logic_error("rebuilt net differs from the coloring run");
  const auto transfer =
      chroma::transfer_cover(cover, run.coloring.forbidden_set(), cfg.samples, cfg.seed, &net);
  r["transfer"] = chroma::io::to_json(transfer);
  verdict.record("transfer", transfer.passed());
  timings["transfer"] = clock.lap();

  const auto pairs = chroma::certify_unit_pairs(run.coloring, cfg.samples, cfg.seed);
  r["unit_pairs"] = chroma::io::to_json(pairs);
  verdict.record("unit_pairs", pairs.passed());
  timings["unit_pairs"] = clock.lap();

  const int n = plan.spec.n;
  const double bound = chroma::bound_pre(plan.phi, plan.lambda, n, run.delta);
  r["bound_pre"] = chroma::io::real_or_null(bound);
  r["colors_over_bound_pre"] = chroma::io::real_or_null(static_cast<double>(run.coloring.color_count()) / bound);
  const chroma::ForbiddenSet inner = run.coloring.forbidden_set().with_lambda((1.0 - run.delta) * plan.lambda);
  const auto density = chroma::mc_density(inner, cfg.density_samples, cfg.seed);
  r["inner_density"] = chroma::io::to_json(density);
  r["tau_star_proxy"] = density.estimate > 0.0 ? json(1.0 / density.estimate) : json(nullptr);
  r["tau_star_lower"] = static_cast<double>(run.net_size) / static_cast<double>(std::max<std::size_t>(run.max_edge, 1));
  timings["density"] = clock.lap();
  return r;
}

int cmd_color_sphere(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto plan = chroma::plan_for_sphere(chroma::SphereSpec(cfg.n, cfg.R), cfg.sphere_config());
  Verdict verdict;
  json timings;
  const fs::path dir = cfg.out_dir;
  json r = run_color_sphere(cfg, plan, verdict, timings, dir);
  json report = {{"config", config_echo(cfg, plan)}, {"color_sphere", r}, {"timings", timings}};
  return finish(verdict, report, dir);
}

// ---------------------------------------------------------------------------
// color-ball

json run_color_ball(const ExperimentConfig& cfg, const chroma::ShellPlan& plan, Verdict& verdict, json& timings,
                    const fs::path& dir) {
  Clock clock;
  chroma::io::write_json(dir / "plan.json", chroma::io::plan_json(plan));
  log("ball: " + std::to_string(plan.shell_count()) + " shells");
  std::mutex mu;
  std::size_t done = 0;
  const auto bc = chroma::build_ball_coloring(plan, cfg.shell_config(), [&](std::size_t) {
    std::lock_guard lock(mu);
    if (++done % 100 == 0) log("shells done: " + std::to_string(done));
  });
  timings["shells"] = clock.lap();
  for (std::size_t j = 0; j < bc.runs().size(); ++j) {
    char name[32];
    std::snprintf(name, sizeof name, "cover_%05zu.json", j);
    json c = chroma::io::cover_json(bc.runs()[j], chroma::derive_seed(cfg.seed, chroma::Stream::kShells, j));
    c["color_base"] = bc.color_bases()[j];
    chroma::io::write_json(dir / "shells" / name, c);
  }

  json r;
  std::size_t sum = 0;
  for (const auto& run : bc.runs()) sum += run.coloring.color_count();
  r["shell_count"] = plan.shell_count();
  r["sphere_colors"] = sum;
  r["total_colors"] = chroma::total_colors(bc);
  r["reserved_color"] = bc.reserved_color();
  const bool additive = chroma::total_colors(bc) == sum + 1;
  verdict.record("ball_color_count", additive);
  const double scale = static_cast<double>(plan.shell_count()) *
                       std::pow(chroma::x_of_R(plan.R) + plan.eps, plan.n);
  r["scale"] = scale;
  r["colors_over_scale"] = static_cast<double>(chroma::total_colors(bc)) / scale;

  const auto cert = chroma::certify_ball(bc, cfg.samples, cfg.seed);
  r["certificate"] = chroma::io::to_json(cert);
  verdict.record("ball", cert.passed());
  timings["ball_certificate"] = clock.lap();
  return r;
}

int cmd_color_ball(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto plan = chroma::plan_shells(cfg.n, cfg.R, cfg.eps);
  Verdict verdict;
  json timings;
  const fs::path dir = cfg.out_dir;
  json r = run_color_ball(cfg, plan, verdict, timings, dir);
  json report = {{"config", cfg.to_json()}, {"color_ball", r}, {"timings", timings}};
  return finish(verdict, report, dir);
}

// ---------------------------------------------------------------------------
// cover-lab

int cmd_cover_lab(const std::string& instance, const std::string& out) {
  const chroma::Hypergraph g = chroma::io::hypergraph_from_json(chroma::io::read_json(instance));
  std::vector<char> reached(g.vertices, 0);
  for (const auto& e : g.edges) {
    for (auto v : e) reached[v] = 1;
  }
  for (std::size_t v = 0; v < g.vertices; ++v) {
    if (!reached[v]) throw chroma::InfeasibleError("vertex " + std::to_string(v) + " lies in no edge");
  }
  json j;
  j["vertices"] = g.vertices;
  j["edges"] = g.edges.size();
  j["max_edge"] = g.max_edge_size();
  const auto greedy = chroma::greedy_cover(g);
  j["greedy"] = greedy;
  j["greedy_size"] = greedy.size();
  const auto frac = chroma::fractional_cover_exact(g);
  j["tau_star"] = frac.value;
  j["weights"] = frac.weights;
  j["dual"] = frac.dual;
  if (g.vertices <= 64) {
    j["tau"] = chroma::exact_cover_number(g);
  } else {
    j["tau"] = nullptr;
  }
  const double bound = (1.0 + std::log(static_cast<double>(std::max<std::size_t>(g.max_edge_size(), 1)))) * frac.value;
  j["stein_lovasz_bound"] = bound;
  const bool ok = static_cast<double>(greedy.size()) <= bound + 1e-9;
  j["passed"] = ok;
  emit(chroma::io::dump(j), out);
  return ok ? kExitPass : kExitCertificate;
}

// ---------------------------------------------------------------------------
// verify: construct, color-sphere and optionally color-ball in one run.

int cmd_verify(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto plan = chroma::plan_for_sphere(chroma::SphereSpec(cfg.n, cfg.R), cfg.sphere_config());
  std::optional<chroma::ShellPlan> shells;
  if (cfg.ball) shells = chroma::plan_shells(cfg.n, cfg.R, cfg.eps);

  const fs::path dir = cfg.out_dir;
  Verdict verdict;
  json timings;
  json report = {{"config", config_echo(cfg, plan)}};
  report["derived"] = {{"x", chroma::x_of_R(cfg.R)}};
  ConstructStage st = run_construct(cfg, plan, verdict, timings);
  write_construct(dir, *st.outer);
  report["construct"] = st.report;
  report["color_sphere"] = run_color_sphere(cfg, plan, verdict, timings, dir);
  if (shells) report["color_ball"] = run_color_ball(cfg, *shells, verdict, timings, dir / "ball");
  report["timings"] = timings;
  return finish(verdict, report, dir);
}

void add_experiment_options(CLI::App* sub, ExperimentConfig& cfg, bool ball_opts) {
  sub->add_option("--R", cfg.R, "sphere radius")->capture_default_str();
  sub->add_option("--n", cfg.n, "sphere dimension")->capture_default_str();
  sub->add_option("--eps", cfg.eps, "small-radius and shell slack")->capture_default_str();
  sub->add_option("--lambda-frac", cfg.lambda_fraction, "lambda as a fraction of lambda0")->capture_default_str();
  sub->add_option("--phi", cfg.phi, "packing angle below sqrt(5)/2");
  sub->add_option("--seed", cfg.seed, "master seed (CHROMA_SEED overrides)")->capture_default_str();
  sub->add_option("--samples", cfg.samples, "sphere/ball sample count")->capture_default_str();
  sub->add_option("--pairs", cfg.pairs, "forbidden-set pair samples")->capture_default_str();
  sub->add_option("--facet-samples", cfg.facet_samples, "Proposition 1 sample points")->capture_default_str();
  sub->add_option("--density-samples", cfg.density_samples, "Monte Carlo density samples")->capture_default_str();
  sub->add_option("--rotations", cfg.rotations, "initial rotation count")->capture_default_str();
  sub->add_option("--max-rotations", cfg.max_rotations, "rotation cap for resampling")->capture_default_str();
  sub->add_option("--probes", cfg.probes, "saturation probes per round")->capture_default_str();
  sub->add_option("--shell-probes", cfg.shell_probes, "saturation probes per round for ball shells")
      ->capture_default_str();
  sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  if (ball_opts) sub->add_flag("--ball", cfg.ball, "also color the ball");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chromatic number constructions for spheres and balls"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker thread cap")->check(CLI::Range(1u, 1024u));

  double R = 0.0, eps = 0.01, rmin = 0.0, rmax = 0.0;
  int n = 2;
  std::size_t steps = 100;
  std::string out, instance, config_path;

  auto* params = app.add_subcommand("params", "solved parameters for one radius as JSON");
  params->add_option("--R", R, "radius")->required();
  params->add_option("--eps", eps, "shell slack")->capture_default_str();
  params->add_option("--n", n, "dimension for the small-radius default angle")->capture_default_str();
  params->add_option("--out", out, "output file (default stdout)");

  auto* curve = app.add_subcommand("curve", "CSV of x(R), 2R and 3 over a radius grid");
  curve->add_option("--rmin", rmin, "smallest radius")->required();
  curve->add_option("--rmax", rmax, "largest radius")->required();
  curve->add_option("--steps", steps, "grid points")->capture_default_str();
  curve->add_option("--out", out, "output file (default stdout)");

  ExperimentConfig cfg;
  auto* construct = app.add_subcommand("construct", "packing, forbidden set and their certificates");
  add_experiment_options(construct, cfg, false);
  auto* sphere = app.add_subcommand("color-sphere", "rotation-cover coloring of a sphere");
  add_experiment_options(sphere, cfg, false);
  auto* ball = app.add_subcommand("color-ball", "shell coloring of a ball");
  add_experiment_options(ball, cfg, false);
  auto* lab = app.add_subcommand("cover-lab", "greedy and exact covers of a toy hypergraph");
  lab->add_option("--instance", instance, "hypergraph JSON {vertices, edges}")->required();
  lab->add_option("--out", out, "output file (default stdout)");
  auto* verify = app.add_subcommand("verify", "full pipeline with every certificate");
  verify->add_option("--config", config_path, "experiment config JSON; flags override it");
  add_experiment_options(verify, cfg, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed() && !config_path.empty()) {
      // Flags given on the command line win over the file.
      ExperimentConfig from_file = ExperimentConfig::from_json(chroma::io::read_json(config_path));
      const ExperimentConfig flags = cfg;
      const auto given = [&](const char* name) { return verify->count(name) > 0; };
      if (given("--R")) from_file.R = flags.R;
      if (given("--n")) from_file.n = flags.n;
      if (given("--eps")) from_file.eps = flags.eps;
      if (given("--lambda-frac")) from_file.lambda_fraction = flags.lambda_fraction;
      if (given("--phi")) from_file.phi = flags.phi;
      if (given("--seed")) from_file.seed = flags.seed;
      if (given("--samples")) from_file.samples = flags.samples;
      if (given("--pairs")) from_file.pairs = flags.pairs;
      if (given("--facet-samples")) from_file.facet_samples = flags.facet_samples;
      if (given("--density-samples")) from_file.density_samples = flags.density_samples;
      if (given("--rotations")) from_file.rotations = flags.rotations;
      if (given("--max-rotations")) from_file.max_rotations = flags.max_rotations;
      if (given("--out")) from_file.out_dir = flags.out_dir;
      if (given("--ball")) from_file.ball = flags.ball;
      cfg = from_file;
    }
    if (const auto s = env_seed()) cfg.seed = *s;
    cfg.threads = threads;

    if (params->parsed()) return cmd_params(R, eps, n, out);
    if (curve->parsed()) return cmd_curve(rmin, rmax, steps, out);
    if (construct->parsed()) return cmd_construct(cfg);
    if (sphere->parsed()) return cmd_color_sphere(cfg);
    if (ball->parsed()) return cmd_color_ball(cfg);
    if (lab->parsed()) return cmd_cover_lab(instance, out);
    if (verify->parsed()) return cmd_verify(cfg);
  } catch (const chroma::IncompleteCoverError& e) {
    log(std::string("certificate failed: cover incomplete: ") + e.what());
    return kExitCertificate;
  } catch (const chroma::DomainError& e) {
    log(std::string("domain error: ") + e.what());
    return kExitUsage;
  } catch (const chroma::InfeasibleError& e) {
    log(std::string("infeasible: ") + e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
