#include "dslab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dslab/hypotheses.hpp"

namespace dslab {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max-iters";
    case SolveStatus::line_search_failed: return "line-search-failed";
  }
  return "unknown";
}

namespace {

void check_sizes(const OperatorFamily& fam, const SourceFamily& src, const GridFunction& U, const Grid& grid) {
  if (U.size() != grid.size() || fam.points() != grid.size() || src.points() != grid.size()) {
    throw std::invalid_argument("operator, source, state and grid sizes disagree");
  }
}

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double discrete_energy(const OperatorFamily& fam, const SourceFamily& src, const GridFunction& U, const Grid& grid) {
  check_sizes(fam, src, U, grid);
  const JetField g = discrete_gradient(U, grid);
  std::vector<double> density(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    density[k] = fam.density(k, norm(g.grads[k])) - src.Fbar(k, U.values[k]);
  }
  return integrate(density, grid);
}

double energy_difference(const OperatorFamily& fam, const SourceFamily& src, const GridFunction& U0,
                         const GridFunction& U1, const Grid& grid) {
  check_sizes(fam, src, U0, grid);
  check_sizes(fam, src, U1, grid);
  const JetField g0 = discrete_gradient(U0, grid);
  const JetField g1 = discrete_gradient(U1, grid);
  std::vector<double> change(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    change[k] = fam.density_difference(k, norm(g0.grads[k]), norm(g1.grads[k])) -
                src.Fbar_difference(k, U0.values[k], U1.values[k]);
  }
  return integrate(change, grid);
}

GridFunction discrete_residual(const OperatorFamily& fam, const SourceFamily& src, const GridFunction& U,
                               const Grid& grid) {
  check_sizes(fam, src, U, grid);
  const JetField g = discrete_gradient(U, grid);
  GridFunction R;
  R.values.assign(grid.size(), 0.0);
  const double cx = 0.5 / grid.h[0];
  const double cy = 0.5 / grid.h[1];
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Vec2 a = fam.flux(c, g.grads[c]);
    const double w = grid.quad_weights[c];
    const auto nb = neighbours(grid, c);
    R.values[nb.east] += w * a[0] * cx;
    R.values[nb.west] -= w * a[0] * cx;
    if (grid.dim == 2) {
      R.values[nb.north] += w * a[1] * cy;
      R.values[nb.south] -= w * a[1] * cy;
    }
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    R.values[k] -= grid.quad_weights[k] * src.fbar(k, U.values[k]);
  }
  return R;
}

SolveResult minimize(const SolveConfig& cfg) {
  if (!cfg.fam || !cfg.src || !cfg.grid) throw std::invalid_argument("solve config is missing operator, source or grid");
  if (!(cfg.residual_tol > 0.0)) throw std::invalid_argument("residual tolerance must be positive");
  if (!(cfg.initial_step > 0.0) || !(cfg.backtrack > 0.0 && cfg.backtrack < 1.0) || !(cfg.armijo > 0.0 && cfg.armijo < 1.0)) {
    throw std::invalid_argument("invalid step rule parameters");
  }
  const auto& fam = *cfg.fam;
  const auto& src = *cfg.src;
  const auto& grid = *cfg.grid;
  cfg.init.validate(grid);

  SolveResult res;
  res.U.values = cfg.init.values;
  double energy = discrete_energy(fam, src, res.U, grid);
  GridFunction R = discrete_residual(fam, src, res.U, grid);
  double rnorm = sup_norm(R.values);
  res.energy_trace.push_back(energy);
  double prev_step = cfg.initial_step;
  GridFunction trial;
  trial.values.resize(grid.size());

  for (;;) {
    if (rnorm <= cfg.residual_tol) {
      res.status = SolveStatus::converged;
      break;
    }
    if (res.iterations >= cfg.max_iters) {
      res.status = SolveStatus::max_iters;
      break;
    }
    double gg = 0.0;
    for (double r : R.values) gg += r * r;
    const double unorm = std::max(1.0, sup_norm(res.U.values));
    double t = std::min(cfg.initial_step, 2.0 * prev_step);
    bool accepted = false;
    double dE = 0.0;
    while (t * rnorm > 1e-16 * unorm) {
      for (std::size_t k = 0; k < grid.size(); ++k) trial.values[k] = res.U.values[k] - t * R.values[k];
      dE = energy_difference(fam, src, res.U, trial, grid);
      if (dE <= -cfg.armijo * t * gg) {
        accepted = true;
        break;
      }
      t *= cfg.backtrack;
    }
    if (!accepted) {
      res.status = SolveStatus::line_search_failed;
      break;
    }
    std::swap(res.U.values, trial.values);
    energy += dE;
    res.energy_trace.push_back(energy);
    R = discrete_residual(fam, src, res.U, grid);
    rnorm = sup_norm(R.values);
    prev_step = t;
    ++res.iterations;
  }

  res.converged = res.status == SolveStatus::converged;
  res.residual_norm = rnorm;
  res.energy = discrete_energy(fam, src, res.U, grid);
  res.ess_inf = *std::min_element(res.U.values.begin(), res.U.values.end());
  res.ess_sup = *std::max_element(res.U.values.begin(), res.U.values.end());
  res.admissible = res.ess_inf >= 0.0 && res.ess_sup <= 1.0;
  res.strongly_positive = res.ess_inf > 1e-6;
  return res;
}

WeakSolutionReport verify_weak_solution(const OperatorFamily& fam, const SourceFamily& src, const GridFunction& U,
                                        const Grid& grid, std::size_t n_tests, std::uint64_t seed,
                                        double residual_tol) {
  check_sizes(fam, src, U, grid);
  const JetField gU = discrete_gradient(U, grid);
  std::vector<Vec2> flux(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) flux[k] = fam.flux(k, gU.grads[k]);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double L = std::max(grid.extent[0], grid.dim == 2 ? grid.extent[1] : 0.0);
  auto random_point = [&](int ax) { return grid.origin[ax] + 0.5 * (1.0 + unit(rng)) * grid.extent[ax]; };

  WeakSolutionReport rep;
  rep.threshold = 10.0 * residual_tol;
  for (std::size_t m = 0; m < n_tests; ++m) {
    AnalyticFieldSpec spec;
    switch (m % 5) {
      case 0: spec = {"constant", {{"value", 1.0}}}; break;
      case 1: spec = {"affine", {{"c", unit(rng)}, {"k0", unit(rng) / L}, {"k1", unit(rng) / L}}}; break;
      case 2: spec = {"exp-linear", {{"k0", unit(rng) / L}, {"k1", unit(rng) / L}}}; break;
      case 3:
        spec = {"quadratic-bump", {{"c", unit(rng)}, {"amp", 1.0}, {"m0", random_point(0)}, {"m1", random_point(1)}, {"R", L}}};
        break;
      default:
        spec = {"noisy-image",
                {{"base", 0.0}, {"amp", 1.0}, {"modes", 4.0}, {"length", L}, {"seed", double(rng() % 100000)}}};
    }
    const GridFunction phi = sample_nodal(spec, grid);
    const JetField gphi = discrete_gradient(phi, grid);
    double pairing = 0.0, l1 = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      pairing += grid.quad_weights[k] * (dot(flux[k], gphi.grads[k]) - src.fbar(k, U.values[k]) * phi.values[k]);
      l1 += std::abs(phi.values[k]);
    }
    const double value = l1 > 0.0 ? std::abs(pairing) / l1 : 0.0;
    rep.test_values.push_back(value);
    rep.max_value = std::max(rep.max_value, value);
  }
  rep.admissible = std::all_of(U.values.begin(), U.values.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
  rep.passed = rep.admissible && rep.max_value < rep.threshold;
  return rep;
}

UniquenessReport uniqueness_experiment(const SolveConfig& cfg, const std::vector<GridFunction>& inits) {
  if (!cfg.fam || !cfg.src || !cfg.grid) throw std::invalid_argument("solve config is missing operator, source or grid");
  if (inits.empty()) throw std::invalid_argument("uniqueness experiment needs at least one initial state");
  const auto& fam = *cfg.fam;
  const auto& src = *cfg.src;
  const double alpha = src.alpha();
  if (fam.r_order() < alpha - 1e-12) throw std::invalid_argument("operator monotonicity order is below α");
  const auto hyp = check_source_hypotheses(src, 32, 0x5eed, fam.exponent().p_minus);
  if (hyp.at("H13").status != Status::pass) throw std::invalid_argument("source fails the root-ratio monotonicity check");
  for (const auto& u : inits) {
    for (double v : u.values) {
      if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("initial states must lie in (0,1]");
    }
  }

  UniquenessReport rep;
  for (std::size_t k = 0; k < inits.size(); ++k) {
    SolveConfig c = cfg;
    c.init = inits[k];
    rep.solutions.push_back(minimize(c));
    if (!rep.solutions.back().converged) {
      throw std::runtime_error("solve from initial state " + std::to_string(k) + " ended with status " +
                               to_string(rep.solutions.back().status));
    }
  }
  for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.solutions.size(); ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < cfg.grid->size(); ++k) {
        d = std::max(d, std::abs(rep.solutions[i].U.values[k] - rep.solutions[j].U.values[k]));
      }
      if (d >= rep.max_pairwise_distance) {
        rep.max_pairwise_distance = d;
        rep.worst_i = i;
        rep.worst_j = j;
      }
    }
  }
  const bool positive = std::all_of(rep.solutions.begin(), rep.solutions.end(),
                                    [](const SolveResult& s) { return s.strongly_positive; });
  rep.uniqueness_asserted = (src.strict13() || fam.strict()) && positive;
  if (rep.uniqueness_asserted) {
    rep.passed = rep.max_pairwise_distance <= 10.0 * cfg.residual_tol;
    return rep;
  }
  // Not covered by the uniqueness statement: report how far the worst pair is from U2 = λU1.
  rep.passed = true;
  const auto& U1 = rep.solutions[rep.worst_i].U.values;
  const auto& U2 = rep.solutions[rep.worst_j].U.values;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < U1.size(); ++k) {
    if (U1[k] > 0.0) {
      sum += U2[k] / U1[k];
      ++count;
    }
  }
  if (count > 0) {
    const double lam = sum / static_cast<double>(count);
    const double scale = std::pow(lam, alpha - 1.0);
    const JetField g1 = discrete_gradient(rep.solutions[rep.worst_i].U, *cfg.grid);
    double phi_res = 0.0, f_res = 0.0;
    for (std::size_t k = 0; k < U1.size(); ++k) {
      const double s = norm(g1.grads[k]);
      phi_res = std::max(phi_res, std::abs(fam.phi(k, lam * s) - scale * fam.phi(k, s)));
      f_res = std::max(f_res, std::abs(src.fbar(k, lam * U1[k]) - scale * src.fbar(k, U1[k])));
    }
    rep.lambda_hat = lam;
    rep.phi_scaling_residual = phi_res;
    rep.f_scaling_residual = f_res;
  }
  return rep;
}

}  // namespace dslab
