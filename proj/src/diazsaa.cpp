#include "dslab/diazsaa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dslab {

const char* to_string(EqualityClass c) {
  switch (c) {
    case EqualityClass::no_equality: return "no-equality";
    case EqualityClass::c_d_zero: return "c-d-zero";
    case EqualityClass::r1_equal_or_flat: return "r1-equal-or-flat";
    case EqualityClass::ac_eq_bd_flat_ratio: return "ac-eq-bd-with-flat-ratio";
    case EqualityClass::strict_forced: return "strict-forced-c-eq-d-a-eq-b";
  }
  return "unknown";
}

namespace {

bool close(double x, double y) { return std::abs(x - y) <= 1e-10 * std::max(std::abs(x), std::abs(y)); }

// Whether θ ↦ φ(θ)/θ^{r−1} takes one value on the closed interval between c and d.
bool flat_between(const ScalarProfile& phi, double r, double c, double d) {
  const double lo = std::min(c, d), hi = std::max(c, d);
  if (lo <= 0.0) return false;
  double vmin = INFINITY, vmax = -INFINITY;
  constexpr int kProbes = 9;
  for (int j = 0; j < kProbes; ++j) {
    const double t = lo + (hi - lo) * j / (kProbes - 1);
    const double v = phi(t) / std::pow(t, r - 1.0);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  return vmax - vmin <= 1e-10 * std::max(std::abs(vmin), std::abs(vmax));
}

void require_positive(const JetField& w, const char* what) {
  for (double v : w.values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_same_size(const JetField& a, const JetField& b) {
  if (a.size() != b.size() || a.grads.size() != a.size() || b.grads.size() != b.size()) {
    throw std::invalid_argument("jet fields have different lengths");
  }
}

}  // namespace

ScalarIneqCase scalar_gap(const ScalarProfile& phi, double r, double a, double b, double c, double d) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("scalar inequality needs a, b > 0");
  if (!(c >= 0.0) || !(d >= 0.0)) throw std::invalid_argument("scalar inequality needs c, d >= 0");
  if (!(r >= 1.0)) throw std::invalid_argument("scalar inequality needs r >= 1");
  ScalarIneqCase out{a, b, c, d, r};
  const double ab = a / b, ba = b / a;
  const double pc = phi(c), pd = phi(d);
  out.lhs = (1.0 + (r - 1.0) * std::pow(ab, r)) * pc * c + (1.0 + (r - 1.0) * std::pow(ba, r)) * pd * d;
  out.rhs = r * std::pow(ab, r - 1.0) * pc * d + r * std::pow(ba, r - 1.0) * pd * c;
  out.gap = out.lhs - out.rhs;

  if (std::abs(out.gap) > 1e-10 * std::max(1.0, std::abs(out.lhs))) return out;
  if (c == 0.0 && d == 0.0) {
    out.equality_class = EqualityClass::c_d_zero;
  } else if (std::abs(r - 1.0) <= 1e-12) {
    if (close(c, d) || flat_between(phi, 1.0, c, d)) out.equality_class = EqualityClass::r1_equal_or_flat;
  } else if (close(a * c, b * d)) {
    if (close(c, d) && close(a, b)) out.equality_class = EqualityClass::strict_forced;
    else if (close(c, d) || flat_between(phi, r, c, d)) out.equality_class = EqualityClass::ac_eq_bd_flat_ratio;
  }
  return out;
}

PointwiseGap pointwise_gap(const OperatorFamily& fam, double r, std::size_t point, double w1, const Vec2& g1,
                           double w2, const Vec2& g2) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) throw std::invalid_argument("pointwise gap needs w1, w2 > 0");
  const double q21 = w2 / w1, q12 = w1 / w2;
  const double n1 = norm(g1), n2 = norm(g2);
  const double phi1 = fam.phi(point, n1), phi2 = fam.phi(point, n2);
  const double psi1 = n1 > 0.0 ? phi1 / n1 : 0.0;
  const double psi2 = n2 > 0.0 ? phi2 / n2 : 0.0;
  const double e1 = (1.0 + (r - 1.0) * std::pow(q21, r)) * phi1 * n1 + (1.0 + (r - 1.0) * std::pow(q12, r)) * phi2 * n2;
  const double e2 = r * std::pow(q21, r - 1.0) * phi1 * n2 + r * std::pow(q12, r - 1.0) * phi2 * n1;
  const double e3 = r * (std::pow(q21, r - 1.0) * psi1 + std::pow(q12, r - 1.0) * psi2) * dot(g1, g2);
  return {e1 - e2, e2 - e3, e1 - e3};
}

JetField ratio_power_jet(const JetField& w1, const JetField& w2, double r) {
  require_same_size(w1, w2);
  require_positive(w1, "w1");
  require_positive(w2, "w2");
  JetField out;
  out.dim = w1.dim;
  out.values.resize(w1.size());
  out.grads.resize(w1.size());
  for (std::size_t i = 0; i < w1.size(); ++i) {
    const double q = w2.values[i] / w1.values[i];
    const double qr1 = std::pow(q, r - 1.0);
    out.values[i] = w2.values[i] * qr1;
    out.grads[i] = sub(scale(r * qr1, w2.grads[i]), scale((r - 1.0) * qr1 * q, w1.grads[i]));
  }
  return out;
}

JetField quotient_jet(const JetField& w1, const JetField& w2) {
  require_same_size(w1, w2);
  require_positive(w1, "w1");
  JetField out;
  out.dim = w1.dim;
  out.values.resize(w1.size());
  out.grads.resize(w1.size());
  for (std::size_t i = 0; i < w1.size(); ++i) {
    const double a = w1.values[i], b = w2.values[i];
    out.values[i] = b / a;
    out.grads[i] = scale(1.0 / (a * a), sub(scale(a, w2.grads[i]), scale(b, w1.grads[i])));
  }
  return out;
}

IntegralGap integral_gap(const OperatorFamily& fam, double r, const JetField& w1, const JetField& w2,
                         const Grid& grid, const std::vector<char>* mask) {
  w1.validate(grid);
  w2.validate(grid);
  if (mask && mask->size() != grid.size()) throw std::invalid_argument("mask length does not match the grid");
  const JetField up = ratio_power_jet(w1, w2, r);    // w2^r / w1^{r−1}
  const JetField down = ratio_power_jet(w2, w1, r);  // w1^r / w2^{r−1}
  IntegralGap out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    const double wt = grid.quad_weights[i];
    const Vec2 a1 = fam.flux(i, w1.grads[i]);
    const Vec2 a2 = fam.flux(i, w2.grads[i]);
    out.lhs += wt * dot(a1, sub(w1.grads[i], up.grads[i]));
    out.rhs += wt * dot(a2, sub(down.grads[i], w2.grads[i]));
  }
  out.gap = out.lhs - out.rhs;
  return out;
}

TruncatedJet truncate_jet(const JetField& w, double eps, double alpha) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("truncation level must lie in (0,1)");
  if (!(alpha > 0.0)) throw std::invalid_argument("root order must be positive");
  TruncatedJet out;
  out.w.dim = out.root.dim = w.dim;
  const double hi = 1.0 / eps;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = w.values[i];
    const bool inside = v > eps && v < hi;
    const double clamped = std::clamp(v, eps, hi);
    out.w.values.push_back(clamped);
    out.w.grads.push_back(inside ? w.grads[i] : Vec2{0.0, 0.0});
    out.root.values.push_back(std::pow(clamped, 1.0 / alpha));
    out.root.grads.push_back(inside ? scale(std::pow(v, 1.0 / alpha - 1.0) / alpha, w.grads[i]) : Vec2{0.0, 0.0});
  }
  return out;
}

EqualityDiagnosis equality_diagnose(const OperatorFamily& fam, double r, const JetField& w1, const JetField& w2,
                                    const Grid& grid, std::optional<double> tol) {
  w1.validate(grid);
  w2.validate(grid);
  require_positive(w1, "w1");
  require_positive(w2, "w2");
  EqualityDiagnosis d;
  const auto n = static_cast<double>(grid.size());
  double max_grad = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    d.lambda_hat += w2.values[i] / w1.values[i];
    d.const_hat += w1.values[i] - w2.values[i];
    max_grad = std::max({max_grad, norm(w1.grads[i]), norm(w2.grads[i])});
  }
  d.lambda_hat /= n;
  d.const_hat /= n;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    d.ratio_deviation = std::max(d.ratio_deviation, std::abs(w2.values[i] / w1.values[i] - d.lambda_hat));
    d.const_deviation = std::max(d.const_deviation, std::abs(w1.values[i] - w2.values[i] - d.const_hat));
    const double s = norm(w1.grads[i]);
    d.phi_scaling_residual = std::max(
        d.phi_scaling_residual, std::abs(fam.phi(i, d.lambda_hat * s) - std::pow(d.lambda_hat, r - 1.0) * fam.phi(i, s)));
  }
  d.gradients_vanish = max_grad <= 1e-12;
  if (fam.strict()) {
    d.strict_checked = true;
    d.strict_ok = std::abs(d.lambda_hat - 1.0) <= 1e-8 || d.gradients_vanish;
  }
  const auto ig = integral_gap(fam, r, w1, w2, grid);
  d.lhs = ig.lhs;
  d.gap = ig.gap;
  d.tol = tol.value_or(1e-8 * (1.0 + std::abs(ig.lhs)));
  d.near_equality = std::abs(ig.gap) <= d.tol;
  return d;
}

CounterexampleReport fixture_counterexample(const std::string& which, const Grid& grid) {
  if (which != "ex51" && which != "ex52") throw std::invalid_argument("unknown fixture '" + which + "'");
  if (grid.dim != 1) throw std::invalid_argument("counterexample fixtures live on a 1D grid");
  for (const auto& x : grid.quad_points) {
    if (std::abs(x[0]) < 1e-14 || std::abs(std::abs(x[0]) - 1.0) < 1e-14) {
      throw std::invalid_argument("grid places a quadrature point at 0 or ±1");
    }
  }
  const std::string field = which == "ex51" ? "ex51-pair" : "ex52-pair";
  const JetField w1 = sample_jet({field, {{"which", 1.0}}}, grid);
  const JetField w2 = sample_jet({field, {{"which", 2.0}}}, grid);
  const JetField q = quotient_jet(w1, w2);

  CounterexampleReport rep;
  rep.name = which;
  rep.points = grid.size();
  rep.ratio_min = INFINITY;
  rep.ratio_max = -INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double l1 = w1.grads[i][0] / w1.values[i];
    const double l2 = w2.grads[i][0] / w2.values[i];
    const double scale_l = std::max(std::abs(l1), std::abs(l2));
    rep.log_derivative_mismatch = std::max(rep.log_derivative_mismatch, scale_l > 0 ? std::abs(l1 - l2) / scale_l : 0.0);
    const double ratio = q.values[i];
    rep.ratio_min = std::min(rep.ratio_min, ratio);
    rep.ratio_max = std::max(rep.ratio_max, ratio);
    if (std::abs(ratio - 1.0) <= 1e-12) rep.ratio_attains_one = true;
    if (std::abs(ratio - 2.0) <= 2e-12) rep.ratio_attains_two = true;
    const double denom = std::abs(ratio) * (std::abs(l1) + std::abs(l2));
    const double qg = std::abs(q.grads[i][0]);
    rep.quotient_gradient_max = std::max(rep.quotient_gradient_max, denom > 0 ? qg / denom : qg);
  }
  rep.log_derivatives_agree = rep.log_derivative_mismatch <= 1e-12;
  rep.quotient_gradient_zero = rep.quotient_gradient_max <= 1e-12;
  bool boundary_ok = true;
  if (which == "ex52") {
    rep.boundary_left = eval_field({field, {{"which", 2.0}}}, {-1.0, 0.0}).value;
    rep.boundary_right = eval_field({field, {{"which", 1.0}}}, {1.0, 0.0}).value;
    boundary_ok = *rep.boundary_left == 0.0 && *rep.boundary_right == 0.0;
  }
  rep.passed = rep.log_derivatives_agree && rep.ratio_attains_one && rep.ratio_attains_two &&
               rep.quotient_gradient_zero && boundary_ok;
  return rep;
}

SubunitGaps subunit_power_gaps(double a, double b, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("exponent must lie in [0,1]");
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("subunit power gaps need a, b >= 0");
  // 0^r = 0 for every r in [0,1], r = 0 included: the comparison h(x) = (a+x)^r − a^r − x^r
  // starts from h(0) = 0 only under this convention.
  auto pw = [r](double x) { return x == 0.0 ? 0.0 : std::pow(x, r); };
  return {pw(std::abs(a - b)) - std::abs(pw(a) - pw(b)), pw(a) + pw(b) - pw(a + b)};
}

}  // namespace dslab
