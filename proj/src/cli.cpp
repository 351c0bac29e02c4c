#include "dslab/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dslab/config.hpp"
#include "dslab/diazsaa.hpp"
#include "dslab/experiments.hpp"
#include "dslab/hypotheses.hpp"
#include "dslab/image.hpp"
#include "dslab/path.hpp"
#include "dslab/solver.hpp"

namespace dslab {

using nlohmann::json;

namespace {

// Non-finite doubles are not representable in JSON.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const HypothesisReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json j{{"id", e.id}, {"status", to_string(e.status)}, {"worst_violation", num(e.worst_violation)}};
    if (e.witness) {
      j["witness"] = {{"point", e.witness->point}, {"s", num(e.witness->s)}};
      if (e.witness->t) j["witness"]["t"] = num(*e.witness->t);
    }
    if (!e.note.empty()) j["note"] = e.note;
    entries.push_back(j);
  }
  return {{"entries", entries}, {"sampling", rep.sampling}};
}

json to_json(const SolveResult& r, bool with_trace = false) {
  json j{{"status", to_string(r.status)},       {"converged", r.converged},
         {"iterations", r.iterations},          {"energy", num(r.energy)},
         {"residual_norm", num(r.residual_norm)}, {"ess_inf", num(r.ess_inf)},
         {"ess_sup", num(r.ess_sup)},           {"admissible", r.admissible},
         {"strongly_positive", r.strongly_positive}};
  if (with_trace) {
    json t = json::array();
    for (double e : r.energy_trace) t.push_back(num(e));
    j["energy_trace"] = t;
  }
  return j;
}

json to_json(const WeakSolutionReport& w) {
  json vals = json::array();
  for (double v : w.test_values) vals.push_back(num(v));
  return {{"test_values", vals}, {"max_value", num(w.max_value)}, {"threshold", num(w.threshold)},
          {"admissible", w.admissible}, {"passed", w.passed}};
}

std::vector<JetField> trial_fields(const Grid& grid) {
  std::vector<JetField> out;
  for (double slope : {0.1, 1.0, 10.0, 100.0}) out.push_back(sample_jet({"affine", {{"c", 0.5}, {"k0", slope}}}, grid));
  out.push_back(sample_jet({"exp-linear", {{"k0", 3.0}, {"k1", grid.dim == 2 ? 1.0 : 0.0}}}, grid));
  for (double amp : {0.5, 5.0}) {
    out.push_back(sample_jet({"noisy-image", {{"base", 0.5}, {"amp", amp}, {"seed", 3.0}}}, grid));
  }
  return out;
}

// Runs every validator that applies to the configured pair.
json check_hypotheses(const Problem& pb, bool& passed) {
  const OperatorFamily& fam = *pb.fam;
  const SourceFamily& src = *pb.src;
  const std::size_t samples = 64;
  const std::uint64_t seed = pb.seed;

  HypothesisReport op = check_limit_monotone(fam, samples, seed);
  std::vector<double> a_bound(fam.points(), 0.0);
  double b_bound = 0.0;
  if (fam.kind() == OperatorKind::image) {
    b_bound = image_growth_bound(fam).b;
  } else {
    for (std::size_t i = 0; i < fam.points(); ++i) {
      a_bound[i] = fam.phi(i, 1.0);
      b_bound = std::max(b_bound, a_bound[i]);
    }
  }
  op.merge(check_growth(fam, a_bound, b_bound, samples, seed + 1));
  const double r = fam.r_order();
  op.merge(check_monotone_ratio(fam, r, fam.strict(), samples, seed + 2));

  const auto trials = trial_fields(pb.grid);
  json coercivity;
  bool coercive_ok = false;
  if (fam.kind() == OperatorKind::image) {
    const CoercivityConstants k = fit_alpha_coercivity(fam, pb.grid);
    const HypothesisReport alpha_rep = check_coercivity(fam, CoercivityMode::alpha, {0, 0, k.c1, k.c2}, trials, pb.grid);
    const HypothesisReport px_rep =
        check_coercivity(fam, CoercivityMode::pX, {1.0 / fam.exponent().p_plus, pb.grid.volume(), 0, 0}, trials, pb.grid);
    coercive_ok = alpha_rep.all_pass();
    coercivity = {{"mode", "alpha"}, {"c1", num(k.c1)}, {"c2", num(k.c2)}, {"report", to_json(alpha_rep)},
                  {"pX_mode_expected_to_fail", to_json(px_rep)}};
  } else {
    const double d0 = fam.params().at("omega") / fam.exponent().p_plus;
    const HypothesisReport px_rep = check_coercivity(fam, CoercivityMode::pX, {d0, 0.0, 0, 0}, trials, pb.grid);
    coercive_ok = px_rep.all_pass();
    coercivity = {{"mode", "pX"}, {"d0", num(d0)}, {"d0_tilde", 0.0}, {"report", to_json(px_rep)}};
  }

  const HomogeneityReport hom = check_homogeneity(fam, samples, seed + 3);
  const HypothesisReport srep = check_source_hypotheses(src, samples, seed + 4, fam.exponent().p_minus);
  const SourcePropsReport props = check_source_props(src, src.lambda0(), samples, seed + 5);

  bool src_ok = srep.passed("H11") && srep.passed("H12") && srep.passed("H13");
  if (src.strict13()) src_ok = src_ok && srep.passed("H13'");
  passed = op.all_pass() && coercive_ok && hom.flags_agree && src_ok;
  return {{"operator", {{"name", fam.name()}, {"r", num(r)}, {"strict", fam.strict()}, {"report", to_json(op)}}},
          {"coercivity", coercivity},
          {"homogeneity",
           {{"A_homogeneous", hom.A_homogeneous},
            {"phi_homogeneous", hom.phi_homogeneous},
            {"flags_agree", hom.flags_agree},
            {"claimed", fam.homogeneous()},
            {"max_violation_A", num(hom.max_violation_A)},
            {"max_violation_phi", num(hom.max_violation_phi)}}},
          {"source",
           {{"name", src.name()},
            {"gamma", num(src.gamma())},
            {"lambda0", num(src.lambda0())},
            {"strict13", src.strict13()},
            {"report", to_json(srep)},
            {"properties",
             {{"lipschitz", props.lipschitz},
              {"shifted_increasing", props.shifted_increasing},
              {"root_convex", props.root_convex},
              {"root_ratio_decreasing", props.root_ratio_decreasing},
              {"strict_convex", props.strict_convex},
              {"strict_decreasing", props.strict_decreasing},
              {"note", props.note}}}}}};
}

const json& subsection(const json& cfg, const char* key) {
  static const json empty = json::object();
  if (!cfg.contains(key)) return empty;
  if (!cfg.at(key).is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
  return cfg.at(key);
}

void require_pair(const Problem& pb) {
  if (!pb.fam || !pb.src) throw ConfigError("config needs grid, operator and source");
}

SolveConfig solve_config(const Problem& pb) {
  SolveConfig cfg;
  cfg.fam = &*pb.fam;
  cfg.src = &*pb.src;
  cfg.grid = &pb.grid;
  cfg.residual_tol = pb.solver.tol;
  cfg.max_iters = pb.solver.max_iters;
  cfg.initial_step = pb.solver.step;
  return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::string solution_csv(const GridFunction& U, const Grid& grid) {
  std::ostringstream os;
  os << "index,x,y,U\n";
  char buf[128];
  for (std::size_t k = 0; k < U.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", k, grid.quad_points[k][0], grid.quad_points[k][1],
                  U.values[k]);
    os << buf;
  }
  return os.str();
}

struct Outcome {
  json result;
  bool passed = false;
  std::vector<std::string> artifacts;
};

Outcome cmd_check_hypotheses(const Problem& pb) {
  require_pair(pb);
  Outcome o;
  o.result = check_hypotheses(pb, o.passed);
  return o;
}

Outcome cmd_inequality(std::size_t trials, std::uint64_t seed) {
  const ScalarSweep s = run_scalar_sweep(trials, seed);
  const SubunitSweep u = run_subunit_sweep(trials, seed + 1);
  Outcome o;
  o.passed = s.passed && u.passed;
  o.result = {{"trials", trials},
              {"min_gap", num(s.min_scaled_gap)},
              {"min_raw_gap", num(s.min_gap)},
              {"min_gap_nonzero_gradients", num(s.min_scaled_gap_moving)},
              {"worst",
               {{"profile", s.worst_profile},
                {"a", num(s.worst.a)},
                {"b", num(s.worst.b)},
                {"c", num(s.worst.c)},
                {"d", num(s.worst.d)},
                {"r", num(s.worst.r)},
                {"lhs", num(s.worst.lhs)},
                {"gap", num(s.worst.gap)}}},
              {"subunit", {{"min_gap1", num(u.min_gap1)}, {"min_gap2", num(u.min_gap2)}, {"passed", u.passed}}},
              {"scalar_passed", s.passed}};
  return o;
}

Outcome cmd_path_scan(const Problem& pb, const std::filesystem::path& dir) {
  require_pair(pb);
  const json& sec = subsection(pb.resolved, "path");
  if (!sec.contains("w1") || !sec.contains("w2")) throw ConfigError("path section needs w1 and w2");
  const JetField w1 = sample_jet(field_spec_from_json(sec.at("w1")), pb.grid);
  const JetField w2 = sample_jet(field_spec_from_json(sec.at("w2")), pb.grid);
  const std::size_t count = sec.contains("thetas") ? sec.at("thetas").get<std::size_t>() : 41;
  const PathContext ctx = make_path(w1, w2, pb.alpha);
  const BetaScan scan = beta_scan(ctx, *pb.fam, *pb.src, pb.grid, default_thetas(ctx, count));
  std::ostringstream csv;
  write_beta_csv(scan, csv);
  write_text(dir / "path_scan.csv", csv.str());
  const ConvexityReport& r = scan.report;
  Outcome o;
  o.passed = r.passed();
  o.artifacts.push_back("path_scan.csv");
  o.result = {{"M", num(ctx.M)},
              {"theta0", num(ctx.theta0)},
              {"samples", scan.theta.size()},
              {"min_beta_prime_increment", num(r.min_beta_prime_increment)},
              {"max_fd_mismatch", num(r.max_fd_mismatch)},
              {"min_cor_gap", num(r.min_cor_gap)},
              {"convex_ok", r.convex_ok},
              {"fd_ok", r.fd_ok},
              {"gap_ok", r.gap_ok},
              {"strict_expected", r.strict_expected},
              {"strict_ok", r.strict_ok}};
  return o;
}

Outcome cmd_solve(const Problem& pb, const std::filesystem::path& dir) {
  require_pair(pb);
  const json& sec = subsection(pb.resolved, "solve");
  SolveConfig cfg = solve_config(pb);
  cfg.init.values = field_values_from_json(sec.contains("init") ? sec.at("init") : json(0.5), pb.grid);
  const std::size_t tests = sec.contains("verify_tests") ? sec.at("verify_tests").get<std::size_t>() : 8;
  const SolveResult res = minimize(cfg);
  const WeakSolutionReport weak =
      verify_weak_solution(*pb.fam, *pb.src, res.U, pb.grid, tests, pb.seed, cfg.residual_tol);
  Outcome o;
  write_text(dir / "solution.csv", solution_csv(res.U, pb.grid));
  o.artifacts.push_back("solution.csv");
  if (pb.grid.dim == 2) {
    write_pgm({pb.grid.n[0], pb.grid.n[1], res.U.values, {}}, (dir / "solution.pgm").string());
    o.artifacts.push_back("solution.pgm");
  }
  o.passed = res.converged && weak.passed;
  o.result = {{"solve", to_json(res, true)}, {"weak_solution", to_json(weak)}};
  return o;
}

Outcome cmd_uniqueness(const Problem& pb) {
  require_pair(pb);
  const json& sec = subsection(pb.resolved, "uniqueness");
  const json inits_j = sec.contains("inits") ? sec.at("inits") : json::array({0.2, 0.9});
  if (!inits_j.is_array() || inits_j.size() < 2) throw ConfigError("uniqueness.inits needs at least two entries");
  std::vector<GridFunction> inits;
  for (const auto& j : inits_j) inits.push_back({field_values_from_json(j, pb.grid), false});
  const UniquenessReport rep = uniqueness_experiment(solve_config(pb), inits);
  json sols = json::array();
  for (const auto& s : rep.solutions) sols.push_back(to_json(s));
  Outcome o;
  o.passed = rep.passed;
  o.result = {{"solutions", sols},
              {"max_pairwise_distance", num(rep.max_pairwise_distance)},
              {"worst_pair", {rep.worst_i, rep.worst_j}},
              {"uniqueness_asserted", rep.uniqueness_asserted}};
  if (rep.lambda_hat) o.result["lambda_hat"] = num(*rep.lambda_hat);
  if (rep.phi_scaling_residual) o.result["phi_scaling_residual"] = num(*rep.phi_scaling_residual);
  if (rep.f_scaling_residual) o.result["f_scaling_residual"] = num(*rep.f_scaling_residual);
  return o;
}

Outcome cmd_denoise(Problem& pb, const std::filesystem::path& dir) {
  json& sec = pb.resolved["denoise"];
  if (!sec.is_object() || !sec.contains("input")) throw ConfigError("denoise section needs an input image");
  Image input;
  try {
    input = read_pgm(sec.at("input").get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const Grid grid = pixel_grid(input.width, input.height);
  DenoiseParams params;
  params.eps = sec.value("eps", params.eps);
  params.delta = sec.value("delta", params.delta);
  params.mu = sec.value("mu", params.mu);
  params.alpha = pb.alpha;
  params.p = exponent_from_json(sec.contains("p") ? sec.at("p") : json(2.0), grid);
  params.residual_tol = pb.solver.tol;
  params.max_iters = pb.solver.max_iters;
  params.initial_step = pb.solver.step;
  sec["eps"] = params.eps;
  sec["delta"] = params.delta;
  sec["mu"] = params.mu;
  if (!sec.contains("p")) sec["p"] = 2.0;
  const std::string out_name = sec.value("output", std::string("denoised.pgm"));
  sec["output"] = out_name;

  DenoiseResult res;
  try {
    res = denoise(input, params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  write_pgm(res.output, (dir / out_name).string());
  Outcome o;
  o.artifacts.push_back(out_name);
  o.passed = res.solve.converged && res.solve.admissible && res.hypotheses.all_pass();
  o.result = {{"width", input.width},
              {"height", input.height},
              {"solve", to_json(res.solve)},
              {"hypotheses", to_json(res.hypotheses)},
              {"tv_input", num(res.tv_input)},
              {"tv_output", num(res.tv_output)},
              {"tv_reduced", res.tv_output < res.tv_input}};
  return o;
}

Outcome cmd_fixtures(const std::string& name, int n) {
  Grid grid;
  try {
    grid = build_grid(1, {n, 1}, {2.0, 1.0}, {-1.0, 0.0});
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  CounterexampleReport rep;
  try {
    rep = fixture_counterexample(name, grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const std::string pair = name == "ex51" ? "ex51-pair" : "ex52-pair";
  const GridFunction w1 = sample_nodal({pair, {{"which", 1.0}}}, grid);
  const GridFunction w2 = sample_nodal({pair, {{"which", 2.0}}}, grid);
  std::set<double> ratios;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (w1.values[k] > 0.0) ratios.insert(std::round(w2.values[k] / w1.values[k] * 1e12) / 1e12);
  }
  Outcome o;
  o.passed = rep.passed;
  o.result = {{"name", rep.name},
              {"points", rep.points},
              {"log_derivative_mismatch", num(rep.log_derivative_mismatch)},
              {"log_derivatives_agree", rep.log_derivatives_agree},
              {"ratio_values", std::vector<double>(ratios.begin(), ratios.end())},
              {"ratio_attains_one", rep.ratio_attains_one},
              {"ratio_attains_two", rep.ratio_attains_two},
              {"ratio_min", num(rep.ratio_min)},
              {"ratio_max", num(rep.ratio_max)},
              {"quotient_gradient_max", num(rep.quotient_gradient_max)},
              {"quotient_gradient_zero", rep.quotient_gradient_zero}};
  if (rep.boundary_left) o.result["boundary_left"] = num(*rep.boundary_left);
  if (rep.boundary_right) o.result["boundary_right"] = num(*rep.boundary_right);
  return o;
}

void emit_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Numerical laboratory for Díaz-Saa type inequalities and uniqueness"};
  app.require_subcommand(1);
  std::string config_path, out_dir, name = "ex51";
  std::uint64_t seed = 0;
  std::size_t trials = 100000;
  int n = 64;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "JSON run configuration");
    if (needs_config) opt->required();
    sub->add_option("--seed", seed, "override seeds.base");
    sub->add_option("--out", out_dir, "override output.dir");
  };
  add_common(app.add_subcommand("check-hypotheses", "validate operator and source hypotheses"), true);
  auto* ineq = app.add_subcommand("inequality", "random scalar inequality and sub-unit power gaps");
  add_common(ineq, false);
  ineq->add_option("--trials", trials, "number of random instances");
  add_common(app.add_subcommand("path-scan", "scan the energy along the α-root interpolation path"), true);
  add_common(app.add_subcommand("solve", "minimize the discrete energy"), true);
  add_common(app.add_subcommand("uniqueness", "solve from several initial states and compare"), true);
  add_common(app.add_subcommand("denoise", "denoise a PGM image"), true);
  auto* fix = app.add_subcommand("fixtures", "check the counterexample pairs");
  add_common(fix, false);
  fix->add_option("--name", name, "ex51 or ex52")->check(CLI::IsMember({"ex51", "ex52"}));
  fix->add_option("--n", n, "number of cells on (-1,1)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const bool seed_given = sub->count("--seed") > 0;
  const bool out_given = sub->count("--out") > 0;

  try {
    json config = config_path.empty() ? json::object() : read_config_file(config_path);
    Problem pb = load_problem(config, seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt,
                              out_given ? std::optional<std::string>(out_dir) : std::nullopt);
    const std::filesystem::path dir(pb.out_dir);
    std::filesystem::create_directories(dir);

    Outcome o;
    if (command == "check-hypotheses") {
      o = cmd_check_hypotheses(pb);
    } else if (command == "inequality") {
      pb.resolved["inequality"]["trials"] = trials;
      o = cmd_inequality(trials, pb.seed);
    } else if (command == "path-scan") {
      o = cmd_path_scan(pb, dir);
    } else if (command == "solve") {
      o = cmd_solve(pb, dir);
    } else if (command == "uniqueness") {
      o = cmd_uniqueness(pb);
    } else if (command == "denoise") {
      o = cmd_denoise(pb, dir);
    } else {
      pb.resolved["fixtures"] = {{"name", name}, {"n", n}};
      o = cmd_fixtures(name, n);
    }

    json report{{"command", command}, {"timestamp", utc_timestamp()}, {"config", pb.resolved},
                {"result", o.result},  {"passed", o.passed},         {"artifacts", o.artifacts}};
    const std::string text = report.dump(2) + "\n";
    write_text(dir / (command + ".json"), text);
    std::cout << text;
    return o.passed ? 0 : 1;
  } catch (const ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("runtime", e.what());
    return 1;
  }
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace dslab
