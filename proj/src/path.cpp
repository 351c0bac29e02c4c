#include "dslab/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dslab {

PathContext make_path(const JetField& w1, const JetField& w2, double alpha) {
  if (w1.size() != w2.size() || w1.size() == 0) throw std::invalid_argument("path endpoints must share a nonzero length");
  if (!(alpha > 1.0 && alpha <= 2.0)) throw std::invalid_argument("path order α must lie in (1,2]");
  PathContext ctx{w1, w2, alpha, 1.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < w1.size(); ++i) {
    const double a = w1.values[i], b = w2.values[i];
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("path endpoints must be positive at every sample");
    }
    ctx.M = std::max({ctx.M, a / b, b / a});
  }
  if (ctx.M > 1e6) throw std::invalid_argument("sampled ratio bound M exceeds 1e6");
  if (ctx.M > 1.0) ctx.theta0 = 1.0 / (2.0 * (ctx.M - 1.0));
  return ctx;
}

PathJets path_jets(const PathContext& ctx, double theta) {
  if (!ctx.admissible(theta)) throw std::invalid_argument("theta lies outside (−θ₀, 1+θ₀)");
  const double ia = 1.0 / ctx.alpha;
  PathJets out;
  out.w_theta.dim = out.gamma_theta.dim = ctx.w1.dim;
  const double slack = 1e-12;
  for (std::size_t i = 0; i < ctx.w1.size(); ++i) {
    const double a = ctx.w1.values[i], b = ctx.w2.values[i];
    const Vec2& ga = ctx.w1.grads[i];
    const Vec2& gb = ctx.w2.grads[i];
    const double w = theta * a + (1.0 - theta) * b;
    const Vec2 gw = add(scale(theta, ga), scale(1.0 - theta, gb));
    if (w < 0.5 * std::min(a, b) * (1.0 - slack) || w > 1.5 * std::max(a, b) * (1.0 + slack)) {
      throw std::logic_error("path value escaped [min/2, 3max/2]");
    }
    for (double q : {a / w, b / w}) {
      if (q < 2.0 / (3.0 * ctx.M) * (1.0 - slack) || q > 2.0 * ctx.M * (1.0 + slack)) {
        throw std::logic_error("endpoint-to-path ratio escaped [2/(3M), 2M]");
      }
    }
    const double diff = a - b;
    const double p1 = std::pow(w, 1.0 - ia);
    const Vec2 grad_gamma = add(scale(ia / p1, sub(ga, gb)), scale(ia * (ia - 1.0) * diff / (p1 * w), gw));
    out.w_theta.values.push_back(w);
    out.w_theta.grads.push_back(gw);
    out.gamma_theta.values.push_back(ia * diff / p1);
    out.gamma_theta.grads.push_back(grad_gamma);
  }
  return out;
}

double energy_J(const OperatorFamily& fam, const SourceFamily& src, const JetField& w, const Grid& grid) {
  return energy_J(fam, src, w, src.alpha(), grid);
}

double energy_J(const OperatorFamily& fam, const SourceFamily& src, const JetField& w, double alpha, const Grid& grid) {
  w.validate(grid);
  const double ia = 1.0 / alpha;
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = w.values[i];
    if (!(v > 0.0)) throw std::invalid_argument("J needs a positive field");
    const double u = std::pow(v, ia);
    const double grad_u = ia * u / v * norm(w.grads[i]);
    sum += grid.quad_weights[i] * (fam.density(i, grad_u) - src.Fbar(i, u));
  }
  return sum;
}

namespace {

double beta_at(const PathContext& ctx, const OperatorFamily& fam, const SourceFamily& src, const Grid& grid, double t) {
  return energy_J(fam, src, path_jets(ctx, t).w_theta, ctx.alpha, grid);
}

// J(w_{t1}) − J(w_{t0}) accumulated cellwise so nearby thetas do not cancel.
double beta_difference(const PathContext& ctx, const OperatorFamily& fam, const SourceFamily& src, const Grid& grid,
                       double t0, double t1) {
  const auto j0 = path_jets(ctx, t0).w_theta;
  const auto j1 = path_jets(ctx, t1).w_theta;
  const double ia = 1.0 / ctx.alpha;
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u0 = std::pow(j0.values[i], ia), u1 = std::pow(j1.values[i], ia);
    const double g0 = ia * u0 / j0.values[i] * norm(j0.grads[i]);
    const double g1 = ia * u1 / j1.values[i] * norm(j1.grads[i]);
    sum += grid.quad_weights[i] * (fam.density_difference(i, g0, g1) - src.Fbar_difference(i, u0, u1));
  }
  return sum;
}

double beta_prime_at(const PathContext& ctx, const OperatorFamily& fam, const SourceFamily& src, const Grid& grid,
                     double t) {
  const auto jets = path_jets(ctx, t);
  const double ia = 1.0 / ctx.alpha;
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = jets.w_theta.values[i];
    const double u = std::pow(w, ia);
    const Vec2 grad_u = scale(ia * u / w, jets.w_theta.grads[i]);
    const double flux_term = dot(fam.flux(i, grad_u), jets.gamma_theta.grads[i]);
    sum += grid.quad_weights[i] * (flux_term - src.fbar(i, u) * jets.gamma_theta.values[i]);
  }
  return sum;
}

}  // namespace

std::vector<double> default_thetas(const PathContext& ctx, std::size_t count) {
  if (count < 2) throw std::invalid_argument("a scan needs at least two thetas");
  const double lo = std::max(ctx.lower() + 1e-3, -0.45);
  const double hi = std::min(ctx.upper() - 1e-3, 1.45);
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k) t[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  return t;
}

BetaScan beta_scan(const PathContext& ctx, const OperatorFamily& fam, const SourceFamily& src, const Grid& grid,
                   const std::vector<double>& thetas) {
  if (fam.r_order() < ctx.alpha - 1e-12) {
    throw std::invalid_argument("operator monotonicity order is below α; the convexity argument does not apply");
  }
  if (thetas.size() < 2) throw std::invalid_argument("a scan needs at least two thetas");
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    if (!ctx.admissible(thetas[k])) throw std::invalid_argument("theta lies outside (−θ₀, 1+θ₀)");
    if (k > 0 && !(thetas[k] > thetas[k - 1])) throw std::invalid_argument("thetas must be strictly increasing");
  }
  // Small step: image profiles have a kink in Φ′, so wide high-order stencils straddling it lose accuracy;
  // cellwise differencing keeps cancellation harmless at this scale.
  constexpr double h = 1e-5;
  auto beta = [&](double t) { return beta_at(ctx, fam, src, grid, t); };
  auto delta = [&](double t0, double t1) { return beta_difference(ctx, fam, src, grid, t0, t1); };
  const double J1 = energy_J(fam, src, ctx.w1, ctx.alpha, grid);
  const double J2 = energy_J(fam, src, ctx.w2, ctx.alpha, grid);

  BetaScan scan;
  scan.theta = thetas;
  auto& rep = scan.report;
  rep.min_beta_prime_increment = INFINITY;
  rep.min_cor_gap = INFINITY;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double t = thetas[k];
    const double b = beta(t);
    const double bp = beta_prime_at(ctx, fam, src, grid, t);
    const bool end = k == 0 || k + 1 == thetas.size();
    double fd;
    if (!end && ctx.admissible(t - 2 * h) && ctx.admissible(t + 2 * h)) {
      fd = (8 * delta(t - h, t + h) - delta(t - 2 * h, t + 2 * h)) / (12 * h);
    } else {
      // One-sided fourth-order stencil pointing into the admissible interval.
      const double dir = ctx.admissible(t + 4 * h) && (k == 0 || !ctx.admissible(t - 4 * h)) ? 1.0 : -1.0;
      fd = dir * (48 * delta(t, t + dir * h) - 36 * delta(t, t + 2 * dir * h) + 16 * delta(t, t + 3 * dir * h) -
                  3 * delta(t, t + 4 * dir * h)) /
           (12 * h);
    }
    scan.beta.push_back(b);
    scan.beta_prime.push_back(bp);
    scan.beta_prime_fd.push_back(fd);
    rep.max_fd_mismatch = std::max(rep.max_fd_mismatch, std::abs(bp - fd) / (1.0 + std::abs(bp)));
    if (t >= 0.0 && t <= 1.0) {
      const double gap = t * J1 + (1.0 - t) * J2 - b;
      scan.cor_gap.push_back(gap);
      rep.min_cor_gap = std::min(rep.min_cor_gap, gap);
    } else {
      scan.cor_gap.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    if (k > 0) rep.min_beta_prime_increment = std::min(rep.min_beta_prime_increment, bp - scan.beta_prime[k - 1]);
  }
  if (!std::isfinite(rep.min_cor_gap)) rep.min_cor_gap = 0.0;

  bool distinct = false;
  for (std::size_t i = 0; i < ctx.w1.size(); ++i) {
    const double a = ctx.w1.values[i], b = ctx.w2.values[i];
    if (std::abs(a - b) > 1e-12 * std::max(a, b)) distinct = true;
  }
  rep.convex_ok = rep.min_beta_prime_increment >= -1e-10;
  rep.fd_ok = rep.max_fd_mismatch <= 1e-6;
  rep.gap_ok = rep.min_cor_gap >= -1e-10;
  rep.strict_expected = src.strict13() && distinct;
  if (rep.strict_expected) {
    rep.strict_ok = rep.min_beta_prime_increment > 0.0;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      if (thetas[k] > 0.0 && thetas[k] < 1.0 && !(scan.cor_gap[k] > 0.0)) rep.strict_ok = false;
    }
  }
  return scan;
}

void write_beta_csv(const BetaScan& scan, std::ostream& out) {
  out << "theta,beta,beta_prime,cor64_gap\n";
  char buf[128];
  for (std::size_t k = 0; k < scan.theta.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", scan.theta[k], scan.beta[k], scan.beta_prime[k],
                  scan.cor_gap[k]);
    out << buf;
  }
}

}  // namespace dslab
