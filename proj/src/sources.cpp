#include "dslab/sources.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dslab/numerics.hpp"
#include "sampling.hpp"

namespace dslab {

SourceFamily::SourceFamily(SourceKind kind, std::string name, std::size_t points, Fn f, Fn F, double gamma,
                           double lambda0, double alpha, bool strict13, std::map<std::string, double> params)
    : kind_(kind),
      name_(std::move(name)),
      points_(points),
      f_(std::move(f)),
      F_(std::move(F)),
      gamma_(gamma),
      lambda0_(lambda0),
      alpha_(alpha),
      strict13_(strict13),
      params_(std::move(params)) {
  if (!f_) throw std::invalid_argument("source needs f");
  if (!(gamma_ >= 0.0) || !(lambda0_ > gamma_)) throw std::invalid_argument("source needs λ₀ > γ ≥ 0");
  if (!(alpha_ > 1.0) || alpha_ > 2.0) throw std::invalid_argument("source order α must lie in (1, 2]");
  params_["gamma"] = gamma_;
  params_["lambda0"] = lambda0_;
  params_["alpha"] = alpha_;
}

SourceFamily SourceFamily::custom(std::string name, std::size_t points, Fn f, Fn F, double gamma, double lambda0,
                                  double alpha, bool strict13) {
  return SourceFamily(SourceKind::custom, std::move(name), points, std::move(f), std::move(F), gamma, lambda0, alpha,
                      strict13, {});
}

double SourceFamily::F(std::size_t point, double s) const {
  if (F_) return F_(point, s);
  if (s == 0.0) return 0.0;
  auto g = [&](double t) { return f_(point, t); };
  const double lo = std::min(0.0, s), hi = std::max(0.0, s);
  // Relative tolerance from a one-panel estimate, so large primitives do not exhaust the recursion.
  const double rough = (hi - lo) / 6.0 * (g(lo) + 4.0 * g(0.5 * (lo + hi)) + g(hi));
  const double v = numerics::adaptive_simpson(g, lo, hi, 1e-12 * std::max(std::abs(rough), 1e-12));
  return s > 0.0 ? v : -v;
}

double SourceFamily::fbar(std::size_t point, double s) const {
  if (s < 0.0) return f_(point, 0.0) + gamma_ * s;
  if (s > 1.0) return f_(point, 1.0) - gamma_ * (s - 1.0);
  return f_(point, s);
}

double SourceFamily::Fbar(std::size_t point, double s) const {
  if (s < 0.0) return f_(point, 0.0) * s + 0.5 * gamma_ * s * s;
  if (s > 1.0) {
    const double e = s - 1.0;
    return F(point, 1.0) + f_(point, 1.0) * e - 0.5 * gamma_ * e * e;
  }
  return F(point, s);
}

ExtendedValue SourceFamily::extend(std::size_t point, double s) const { return {fbar(point, s), Fbar(point, s)}; }

double SourceFamily::Fbar_difference(std::size_t point, double s0, double s1) const {
  if (s0 == s1) return 0.0;
  const double lo = std::min(s0, s1), hi = std::max(s0, s1);
  if (hi - lo > 0.25 * std::max(std::abs(lo), std::abs(hi))) return Fbar(point, s1) - Fbar(point, s0);
  auto g = [&](double t) { return fbar(point, t); };
  double a = lo, sum = 0.0;
  for (double bp : {0.0, 1.0}) {
    if (bp > a && bp < hi) {
      sum += numerics::gauss_legendre(g, a, bp);
      a = bp;
    }
  }
  sum += numerics::gauss_legendre(g, a, hi);
  return s1 > s0 ? sum : -sum;
}

namespace {

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SourceFamily make_power_source(const std::vector<double>& r1, const std::vector<double>& r2,
                               const std::vector<double>& q1, const std::vector<double>& q2, double alpha) {
  const std::size_t n = r1.size();
  if (n == 0 || r2.size() != n || q1.size() != n || q2.size() != n) {
    throw std::invalid_argument("power source coefficient fields must share a nonzero length");
  }
  bool every_point_active = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(r1[i] >= 0.0) || !(r2[i] >= 0.0) || !std::isfinite(r1[i]) || !std::isfinite(r2[i])) {
      throw std::invalid_argument("power source needs bounded r1, r2 >= 0");
    }
    if (!(q1[i] >= 1.0) || !(q2[i] >= 1.0) || !std::isfinite(q1[i]) || !std::isfinite(q2[i])) {
      throw std::invalid_argument("power source needs bounded q1, q2 >= 1");
    }
    if (r1[i] + r2[i] <= 0.0) every_point_active = false;
  }
  const double gamma = sup_norm(r1) * sup_norm(q1) + sup_norm(r2) * sup_norm(q2);
  auto f = [r1, r2, q1, q2](std::size_t i, double s) {
    return -r1[i] * std::pow(s, q1[i]) - r2[i] * std::pow(s, q2[i]);
  };
  auto F = [r1, r2, q1, q2](std::size_t i, double s) {
    return -r1[i] * std::pow(s, q1[i] + 1.0) / (q1[i] + 1.0) - r2[i] * std::pow(s, q2[i] + 1.0) / (q2[i] + 1.0);
  };
  // The (H13) ratio is −Σ r_k s^{(q_k−α+1)/α}: strictly decreasing wherever some r_k > 0.
  const bool strict = alpha < 2.0 && every_point_active;
  return SourceFamily(SourceKind::power, "power", n, f, F, gamma, gamma + 1.0, alpha, strict,
                      {{"r1_sup", sup_norm(r1)}, {"r2_sup", sup_norm(r2)}, {"q1_sup", sup_norm(q1)},
                       {"q2_sup", sup_norm(q2)}});
}

SourceFamily make_fidelity_source(const std::vector<double>& g, double mu, double alpha) {
  if (g.empty()) throw std::invalid_argument("fidelity source needs data");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("fidelity weight μ must be positive");
  for (double v : g) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("fidelity data must lie in [0,1]");
  }
  auto f = [g, mu](std::size_t i, double s) { return mu * (g[i] - s); };
  auto F = [g, mu](std::size_t i, double s) { return mu * (g[i] * s - 0.5 * s * s); };
  return SourceFamily(SourceKind::fidelity, "fidelity", g.size(), f, F, mu, mu + 1.0, alpha, alpha < 2.0,
                      {{"mu", mu}});
}

SourceFamily make_zero_source(std::size_t points, double alpha) {
  auto zero = [](std::size_t, double) { return 0.0; };
  return SourceFamily(SourceKind::zero, "zero", points, zero, zero, 0.0, 1.0, alpha, false, {});
}

SourcePropsReport check_source_props(const SourceFamily& src, double lambda_bar, std::size_t samples,
                                     std::uint64_t seed) {
  if (!(lambda_bar > src.gamma())) throw std::invalid_argument("λ̄ must exceed γ");
  constexpr std::size_t kLadder = 64;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pair(-1.0, 2.0);
  const double a = src.alpha();
  SourcePropsReport rep;
  rep.lipschitz = rep.shifted_increasing = rep.root_convex = rep.root_ratio_decreasing = true;
  rep.strict_convex = rep.strict_decreasing = true;
  for (std::size_t i = 0; i < src.points(); ++i) {
    for (std::size_t k = 0; k < samples; ++k) {
      const double s1 = pair(rng), s2 = pair(rng);
      const double excess = std::abs(src.fbar(i, s1) - src.fbar(i, s2)) - src.gamma() * std::abs(s1 - s2);
      const double slack = 1e-12 * (1.0 + std::abs(src.fbar(i, s1)) + std::abs(src.fbar(i, s2)));
      if (excess > slack) rep.lipschitz = false;
      rep.worst_lipschitz_excess = std::max(rep.worst_lipschitz_excess, excess);
    }

    std::vector<double> shifted;
    for (double s : sampling::uniform_ladder(rng, -1.0, 2.0, kLadder)) shifted.push_back(src.fbar(i, s) + lambda_bar * s);
    if (!sampling::scan_monotone(shifted, +1).strict_ok) rep.shifted_increasing = false;

    const auto ladder = sampling::log_ladder(rng, 1e-6, 1e3, kLadder);
    std::vector<double> slopes, ratio;
    for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
      const double h0 = -src.Fbar(i, std::pow(ladder[k], 1.0 / a));
      const double h1 = -src.Fbar(i, std::pow(ladder[k + 1], 1.0 / a));
      slopes.push_back((h1 - h0) / (ladder[k + 1] - ladder[k]));
    }
    for (double s : ladder) ratio.push_back(src.fbar(i, std::pow(s, 1.0 / a)) / std::pow(s, (a - 1.0) / a));
    const auto convex = sampling::scan_monotone(slopes, +1);
    const auto decreasing = sampling::scan_monotone(ratio, -1);
    rep.root_convex = rep.root_convex && convex.nonstrict_ok;
    rep.strict_convex = rep.strict_convex && convex.strict_ok;
    rep.root_ratio_decreasing = rep.root_ratio_decreasing && decreasing.nonstrict_ok;
    rep.strict_decreasing = rep.strict_decreasing && decreasing.strict_ok;
    rep.worst_convexity_defect = std::max(rep.worst_convexity_defect, convex.worst);
    rep.worst_ratio_increase = std::max(rep.worst_ratio_increase, decreasing.worst);
  }
  rep.note = "checked at every sampled point; ladders of 64 sorted samples";
  return rep;
}

}  // namespace dslab
