#include "dslab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dslab/numerics.hpp"

namespace dslab {

namespace detail {

struct ProfileModel {
  virtual ~ProfileModel() = default;
  virtual double phi(std::size_t i, double s) const = 0;
  virtual double density(std::size_t i, double t) const = 0;
};

}  // namespace detail

namespace {

// Tolerance for numerically integrated primitives, scaled by the integral's size.
double simpson_tolerance(double rough) { return 1e-10 * std::max(std::abs(rough), 1e-12); }

template <class F>
double integrate_profile(const F& f, double a, double b) {
  if (b <= a) return 0.0;
  const double rough = (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
  return numerics::adaptive_simpson(f, a, b, simpson_tolerance(rough));
}

class MultiphaseModel final : public detail::ProfileModel {
 public:
  explicit MultiphaseModel(std::vector<Phase> phases) : phases_(std::move(phases)) {}
  double phi(std::size_t i, double s) const override {
    double sum = 0.0;
    for (const auto& ph : phases_) sum += ph.weight[i] * std::pow(s, ph.p[i] - 1.0);
    return sum;
  }
  double density(std::size_t i, double t) const override {
    double sum = 0.0;
    for (const auto& ph : phases_) sum += ph.weight[i] * std::pow(t, ph.p[i]) / ph.p[i];
    return sum;
  }

 private:
  std::vector<Phase> phases_;
};

class ImageModel final : public detail::ProfileModel {
 public:
  ImageModel(ExponentField p, double eps, double delta, double alpha)
      : p_(std::move(p)), eps_(eps), delta_(delta), alpha_(alpha) {
    std::map<double, double> cache;
    head_.reserve(p_.size());
    for (double pv : p_.values) {
      auto it = cache.find(pv);
      if (it == cache.end()) {
        const double v = integrate_profile([&](double s) { return lower(pv, s); }, 0.0, eps_);
        it = cache.emplace(pv, v).first;
      }
      head_.push_back(it->second);
    }
  }
  double phi(std::size_t i, double s) const override {
    return s <= eps_ ? lower(p_[i], s) : upper(p_[i], s);
  }
  double density(std::size_t i, double t) const override {
    const double pv = p_[i];
    if (t <= eps_) return integrate_profile([&](double s) { return lower(pv, s); }, 0.0, t);
    return head_[i] + integrate_profile([&](double s) { return upper(pv, s); }, eps_, t);
  }

 private:
  double lower(double p, double s) const { return image_profile(p, eps_, delta_, alpha_, std::min(s, eps_)); }
  double upper(double p, double s) const { return image_profile(p, eps_, delta_, alpha_, std::max(s, eps_)); }

  ExponentField p_;
  double eps_, delta_, alpha_;
  std::vector<double> head_;
};

class CustomModel final : public detail::ProfileModel {
 public:
  CustomModel(OperatorFamily::Profile phi, OperatorFamily::Profile primitive)
      : phi_(std::move(phi)), primitive_(std::move(primitive)) {}
  double phi(std::size_t i, double s) const override { return phi_(i, s); }
  double density(std::size_t i, double t) const override {
    if (primitive_) return primitive_(i, t);
    return integrate_profile([&](double s) { return phi_(i, s); }, 0.0, t);
  }

 private:
  OperatorFamily::Profile phi_, primitive_;
};

double pow_or_zero(double base, double e) { return base == 0.0 ? 0.0 : std::pow(base, e); }

}  // namespace

ExponentField ExponentField::constant(double p, std::size_t points) {
  return from_values(std::vector<double>(points, p));
}

ExponentField ExponentField::from_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("exponent field is empty");
  ExponentField f;
  f.p_minus = *std::min_element(values.begin(), values.end());
  f.p_plus = *std::max_element(values.begin(), values.end());
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("exponent field contains a non-finite value");
  }
  if (!(f.p_minus > 1.0)) throw std::invalid_argument("exponent field needs p⁻ > 1");
  f.values = std::move(values);
  return f;
}

ExponentField ExponentField::from_spec(const AnalyticFieldSpec& spec, const Grid& grid) {
  return from_values(sample_jet(spec, grid).values);
}

OperatorFamily::OperatorFamily(std::shared_ptr<const detail::ProfileModel> model, OperatorKind kind,
                               std::string name, ExponentField exponent, double r_order, bool strict,
                               bool homogeneous, std::map<std::string, double> params,
                               std::vector<double> breakpoints)
    : model_(std::move(model)),
      kind_(kind),
      name_(std::move(name)),
      r_order_(r_order),
      strict_(strict),
      homogeneous_(homogeneous),
      exponent_(std::move(exponent)),
      params_(std::move(params)),
      breakpoints_(std::move(breakpoints)) {}

OperatorFamily OperatorFamily::custom(std::string name, ExponentField exponent, Profile phi, Profile primitive,
                                      double r_order, bool strict, bool homogeneous) {
  if (!phi) throw std::invalid_argument("custom operator needs a profile");
  if (r_order < 1.0) throw std::invalid_argument("monotonicity order must be >= 1");
  auto model = std::make_shared<CustomModel>(std::move(phi), std::move(primitive));
  return OperatorFamily(model, OperatorKind::custom, std::move(name), std::move(exponent), r_order, strict,
                        homogeneous, {{"r", r_order}}, {});
}

double OperatorFamily::phi(std::size_t point, double s) const { return model_->phi(point, std::abs(s)); }

double OperatorFamily::density(std::size_t point, double t) const {
  t = std::abs(t);
  return t == 0.0 ? 0.0 : model_->density(point, t);
}

double OperatorFamily::density_difference(std::size_t point, double t0, double t1) const {
  t0 = std::abs(t0);
  t1 = std::abs(t1);
  if (t0 == t1) return 0.0;
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  const double sign = t1 > t0 ? 1.0 : -1.0;
  if (hi - lo > 0.25 * hi) return density(point, t1) - density(point, t0);
  // Short interval: integrate Φ directly, splitting at formula changes.
  auto f = [&](double s) { return model_->phi(point, s); };
  double a = lo, sum = 0.0;
  for (double bp : breakpoints_) {
    if (bp > a && bp < hi) {
      sum += numerics::gauss_legendre(f, a, bp);
      a = bp;
    }
  }
  sum += numerics::gauss_legendre(f, a, hi);
  return sign * sum;
}

Vec2 OperatorFamily::flux(std::size_t point, const Vec2& xi) const {
  const double s = norm(xi);
  if (s == 0.0) return {0.0, 0.0};
  const double psi = model_->phi(point, s) / s;
  return {psi * xi[0], psi * xi[1]};
}

OperatorFamily make_multiphase(const std::vector<Phase>& phases, double alpha, std::optional<double> omega) {
  if (phases.empty()) throw std::invalid_argument("multiphase operator needs at least one phase");
  const std::size_t n = phases.front().p.size();
  double p_low = phases.front().p.p_minus;
  double min_weight = phases.front().weight.empty() ? 0.0 : phases.front().weight.front();
  for (const auto& ph : phases) {
    if (ph.p.size() != n || ph.weight.size() != n) throw std::invalid_argument("phase sizes disagree");
    if (!(ph.p.p_minus > 1.0)) throw std::invalid_argument("each phase needs p⁻ > 1");
    p_low = std::min(p_low, ph.p.p_minus);
    for (double w : ph.weight) {
      if (!std::isfinite(w)) throw std::invalid_argument("phase weight is not finite");
      min_weight = std::min(min_weight, w);
    }
  }
  const double om = omega.value_or(min_weight);
  if (!(om > 0.0)) throw std::invalid_argument("phase weights need a positive lower bound ω");
  if (min_weight < om) throw std::invalid_argument("a phase weight falls below ω");
  if (!(alpha > 1.0) || alpha > p_low) throw std::invalid_argument("multiphase order α must lie in (1, p₋]");

  // Growth exponent: the dominant phase at each point.
  std::vector<double> pmax(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& ph : phases) pmax[i] = std::max(pmax[i], ph.p[i]);
  }
  std::map<std::string, double> params{{"alpha", alpha}, {"omega", om}, {"phases", double(phases.size())},
                                       {"p_low", p_low}};
  for (std::size_t k = 0; k < phases.size(); ++k) {
    params["p" + std::to_string(k + 1) + "_minus"] = phases[k].p.p_minus;
    params["p" + std::to_string(k + 1) + "_plus"] = phases[k].p.p_plus;
  }
  auto model = std::make_shared<MultiphaseModel>(phases);
  const std::string name = phases.size() == 1 ? "single-phase" : "multiphase";
  return OperatorFamily(model, OperatorKind::multiphase, name, ExponentField::from_values(pmax), alpha,
                        alpha < p_low, phases.size() == 1, std::move(params), {});
}

double image_profile(double p, double eps, double delta, double alpha, double s) {
  const double lg = std::pow(std::log1p(s), delta);
  if (s <= eps) return std::pow(s, p - 1.0) * lg;
  return std::pow(eps, p - alpha) * std::pow(s, alpha - 1.0) * lg;
}

OperatorFamily make_image_operator(const ExponentField& p, double eps, double delta, double alpha) {
  if (!(eps > 0.0) || !(delta > 0.0)) throw std::invalid_argument("image operator needs ε > 0 and δ > 0");
  if (!(alpha > 1.0)) throw std::invalid_argument("image operator needs α > 1");
  if (!(p.p_minus > alpha)) throw std::invalid_argument("image operator needs p⁻ > α");
  auto model = std::make_shared<ImageModel>(p, eps, delta, alpha);
  return OperatorFamily(model, OperatorKind::image, "image", p, alpha, true, false,
                        {{"eps", eps}, {"delta", delta}, {"alpha", alpha}}, {eps});
}

HomogeneityReport check_homogeneity(const OperatorFamily& fam, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("homogeneity check needs samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, fam.points() - 1);
  std::uniform_real_distribution<double> log_t(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> log_s(std::log(1e-3), std::log(1e2));
  auto rel = [](double lhs, double rhs) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
  };
  HomogeneityReport rep;
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t i = pick(rng);
    const double t = std::exp(log_t(rng));
    const double s = std::exp(log_s(rng));
    const double p = fam.exponent()[i];
    rep.max_violation_phi = std::max(rep.max_violation_phi, rel(fam.phi(i, t * s), std::pow(t, p - 1.0) * fam.phi(i, s)));
    rep.max_violation_A = std::max(rep.max_violation_A, rel(fam.density(i, t * s), std::pow(t, p) * fam.density(i, s)));
  }
  rep.phi_homogeneous = rep.max_violation_phi <= 1e-8;
  rep.A_homogeneous = rep.max_violation_A <= 1e-8;
  rep.flags_agree = rep.phi_homogeneous == rep.A_homogeneous;
  return rep;
}

ImageGrowthBound image_growth_bound(const OperatorFamily& fam) {
  if (fam.kind() != OperatorKind::image) throw std::invalid_argument("growth bound is defined for the image operator");
  const double eps = fam.params().at("eps");
  const double delta = fam.params().at("delta");
  const double alpha = fam.params().at("alpha");
  ImageGrowthBound out;
  std::map<double, std::pair<double, double>> cache;
  for (double p : fam.exponent().values) {
    auto it = cache.find(p);
    if (it == cache.end()) {
      const double kappa = (p - alpha) / delta;
      // Work in u = ln τ, where ln of the ratio is concave, so the ratio is unimodal.
      auto ratio = [&](double u) { return std::log1p(std::exp(u)) / std::exp(kappa * (u - std::log(eps))); };
      const double u0 = std::log(eps);
      double u_hi = u0;
      double prev = ratio(u0);
      for (;;) {
        u_hi += std::log(2.0);
        if (u_hi > 690.0) throw std::runtime_error("growth-bound search did not find the decay region");
        const double cur = ratio(u_hi);
        if (cur < 1.0 && cur < prev) break;
        prev = cur;
      }
      const auto peak = numerics::golden_section_max(ratio, u0, u_hi);
      double eps_tilde = eps;
      if (peak.value > 1.0) {
        // Monotone restart: the ratio decreases from the peak, bisect for the crossing of 1.
        double lo = peak.x, hi = u_hi;
        for (int k = 0; k < 200 && hi - lo > 1e-14 * (1.0 + std::abs(hi)); ++k) {
          const double mid = 0.5 * (lo + hi);
          (ratio(mid) > 1.0 ? lo : hi) = mid;
        }
        eps_tilde = std::exp(hi);
      }
      const double C = std::max(1.0, peak.value);
      it = cache.emplace(p, std::make_pair(eps_tilde, C)).first;
    }
    out.eps_tilde.push_back(it->second.first);
    out.C.push_back(it->second.second);
    out.b = std::max({out.b, std::pow(it->second.second, delta), std::pow(std::log1p(eps), delta)});
  }
  return out;
}

CoercivityConstants fit_alpha_coercivity(const OperatorFamily& fam, const Grid& grid) {
  if (fam.kind() != OperatorKind::image) throw std::invalid_argument("α-coercivity fit is defined for the image operator");
  const double eps = fam.params().at("eps");
  const double delta = fam.params().at("delta");
  const double alpha = fam.params().at("alpha");
  // For s ≥ T = max(ε,1): Φ ≥ ε^{p−α}(T/(1+T))^δ s^{α−1}; integrate and absorb the
  // region below T into the constant.
  const double T = std::max(eps, 1.0);
  const auto& p = fam.exponent();
  const double p_worst = eps < 1.0 ? p.p_plus : p.p_minus;
  CoercivityConstants k;
  k.c1 = pow_or_zero(eps, p_worst - alpha) * std::pow(T / (1.0 + T), delta) / alpha;
  k.c2 = k.c1 * std::pow(T, alpha) * grid.volume();
  return k;
}

}  // namespace dslab
