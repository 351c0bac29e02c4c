#include "dslab/grid.hpp"

#include <random>
#include <stdexcept>

namespace dslab {

namespace {

double need(const AnalyticFieldSpec& spec, const char* key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw std::invalid_argument("field '" + spec.name + "' requires parameter '" + key + "'");
  }
  return it->second;
}

double opt(const AnalyticFieldSpec& spec, const char* key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

int which_of(const AnalyticFieldSpec& spec) {
  const double w = need(spec, "which");
  if (w != 1.0 && w != 2.0) throw std::invalid_argument("'which' must be 1 or 2");
  return static_cast<int>(w);
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct Mode {
  double coeff, k0, k1, phase;
};

// A field spec resolved once so per-point evaluation stays cheap.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const AnalyticFieldSpec& spec) : spec_(spec) {
    const auto& name = spec.name;
    if (name == "constant") {
      a_ = need(spec, "value");
    } else if (name == "affine") {
      a_ = need(spec, "c");
      k0_ = need(spec, "k0");
      k1_ = opt(spec, "k1", 0.0);
    } else if (name == "exp-linear") {
      k0_ = need(spec, "k0");
      k1_ = opt(spec, "k1", 0.0);
      amp_ = opt(spec, "amp", 1.0);
      a_ = opt(spec, "c", 0.0);
    } else if (name == "quadratic-bump") {
      a_ = need(spec, "c");
      amp_ = need(spec, "amp");
      m0_ = opt(spec, "m0", 0.0);
      m1_ = opt(spec, "m1", 0.0);
      radius_ = opt(spec, "R", 1.0);
      if (radius_ <= 0.0) throw std::invalid_argument("quadratic-bump needs R > 0");
    } else if (name == "abs-kink") {
      a_ = need(spec, "c");
      amp_ = need(spec, "amp");
      m0_ = opt(spec, "m0", 0.0);
    } else if (name == "ex51-pair" || name == "ex52-pair") {
      which_ = which_of(spec);
    } else if (name == "noisy-image") {
      a_ = need(spec, "base");
      amp_ = need(spec, "amp");
      const double modes = opt(spec, "modes", 6.0);
      const double length = opt(spec, "length", 1.0);
      if (modes < 1.0 || length <= 0.0) throw std::invalid_argument("noisy-image needs modes >= 1, length > 0");
      std::mt19937_64 rng(static_cast<std::uint64_t>(opt(spec, "seed", 1.0)));
      std::uniform_real_distribution<double> coeff(-1.0, 1.0);
      std::uniform_real_distribution<double> freq(0.5, 3.0);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
      double total = 0.0;
      for (int k = 0; k < static_cast<int>(modes); ++k) {
        Mode m{};
        m.coeff = coeff(rng);
        m.k0 = 2.0 * M_PI * freq(rng) * (coeff(rng) < 0.0 ? -1.0 : 1.0) / length;
        m.k1 = 2.0 * M_PI * freq(rng) * (coeff(rng) < 0.0 ? -1.0 : 1.0) / length;
        m.phase = phase(rng);
        total += std::abs(m.coeff);
        modes_.push_back(m);
      }
      for (auto& m : modes_) m.coeff /= total;  // keeps |noise| <= 1
    } else {
      throw std::invalid_argument("unknown field '" + name + "'");
    }
  }

  Jet operator()(const Vec2& x) const {
    const auto& name = spec_.name;
    if (name == "constant") return {a_, {0.0, 0.0}};
    if (name == "affine") return {a_ + k0_ * x[0] + k1_ * x[1], {k0_, k1_}};
    if (name == "exp-linear") {
      const double e = amp_ * std::exp(k0_ * x[0] + k1_ * x[1]);
      return {a_ + e, {k0_ * e, k1_ * e}};
    }
    if (name == "quadratic-bump") {
      const double dx = x[0] - m0_, dy = x[1] - m1_;
      const double r2 = radius_ * radius_;
      return {a_ + amp_ * (1.0 - (dx * dx + dy * dy) / r2),
              {-2.0 * amp_ * dx / r2, -2.0 * amp_ * dy / r2}};
    }
    if (name == "abs-kink") {
      const double dx = x[0] - m0_;
      return {a_ + amp_ * std::abs(dx), {amp_ * sgn(dx), 0.0}};
    }
    if (name == "ex51-pair") return ex51(x[0]);
    if (name == "ex52-pair") {
      const Jet w = ex51(x[0]);
      const double t = x[0];
      if (std::abs(t) >= 1.0) return {0.0, {0.0, 0.0}};
      const double q = t * t - 1.0;
      const double eta = std::exp(1.0 / q);
      const double deta = eta * (-2.0 * t) / (q * q);
      return {w.value * eta, {w.grad[0] * eta + w.value * deta, 0.0}};
    }
    // noisy-image
    double v = 0.0, g0 = 0.0, g1 = 0.0;
    for (const auto& m : modes_) {
      const double arg = m.k0 * x[0] + m.k1 * x[1] + m.phase;
      v += m.coeff * std::sin(arg);
      const double c = m.coeff * std::cos(arg);
      g0 += c * m.k0;
      g1 += c * m.k1;
    }
    return {a_ + amp_ * v, {amp_ * g0, amp_ * g1}};
  }

 private:
  Jet ex51(double t) const {
    if (which_ == 1) return {std::abs(t), {sgn(t), 0.0}};
    if (t >= 0.0) return {t, {t > 0.0 ? 1.0 : 0.0, 0.0}};
    return {-2.0 * t, {-2.0, 0.0}};
  }

  AnalyticFieldSpec spec_;
  double a_ = 0.0, k0_ = 0.0, k1_ = 0.0, amp_ = 1.0, m0_ = 0.0, m1_ = 0.0, radius_ = 1.0;
  int which_ = 1;
  std::vector<Mode> modes_;
};

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

Grid build_grid(int dim, int n, double extent) {
  return build_grid(dim, {n, dim == 2 ? n : 1}, {extent, dim == 2 ? extent : 1.0});
}

Grid build_grid(int dim, std::array<int, 2> n, Vec2 extent, Vec2 origin) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (dim == 1) {
    n[1] = 1;
    extent[1] = 1.0;
    origin[1] = 0.0;
  }
  for (int ax = 0; ax < dim; ++ax) {
    if (n[ax] < 3) throw std::invalid_argument("grid needs at least 3 points per axis");
    if (!(extent[ax] > 0.0) || !std::isfinite(extent[ax])) throw std::invalid_argument("grid extent must be positive");
  }
  Grid g;
  g.dim = dim;
  g.origin = origin;
  g.extent = extent;
  g.n = n;
  g.h = {extent[0] / n[0], extent[1] / n[1]};
  const double cell = dim == 1 ? g.h[0] : g.h[0] * g.h[1];
  g.quad_points.reserve(static_cast<std::size_t>(n[0]) * n[1]);
  for (int j = 0; j < n[1]; ++j) {
    for (int i = 0; i < n[0]; ++i) {
      const double y = dim == 2 ? origin[1] + (j + 0.5) * g.h[1] : 0.0;
      g.quad_points.push_back({origin[0] + (i + 0.5) * g.h[0], y});
      g.quad_weights.push_back(cell);
    }
  }
  return g;
}

void JetField::validate(const Grid& grid) const {
  if (values.size() != grid.size() || grads.size() != grid.size()) {
    throw std::invalid_argument("jet field length does not match the grid");
  }
  check_finite(values, "jet field");
  for (const auto& g : grads) {
    if (!std::isfinite(g[0]) || !std::isfinite(g[1])) throw std::invalid_argument("jet gradient is not finite");
  }
}

void GridFunction::validate(const Grid& grid) const {
  if (values.size() != grid.size()) throw std::invalid_argument("grid function length does not match the grid");
  check_finite(values, "grid function");
  if (admissible_state) {
    for (double v : values) {
      if (v < 0.0 || v > 1.0) throw std::invalid_argument("admissible state must satisfy 0 <= U <= 1");
    }
  }
}

const std::vector<std::string>& field_catalog() {
  static const std::vector<std::string> names = {"constant",  "affine",    "exp-linear", "quadratic-bump",
                                                 "abs-kink",  "ex51-pair", "ex52-pair",  "noisy-image"};
  return names;
}

Jet eval_field(const AnalyticFieldSpec& spec, const Vec2& x) { return FieldEvaluator(spec)(x); }

JetField sample_jet(const AnalyticFieldSpec& spec, const Grid& grid) {
  const FieldEvaluator eval(spec);
  JetField jet;
  jet.dim = grid.dim;
  jet.values.reserve(grid.size());
  jet.grads.reserve(grid.size());
  for (const auto& x : grid.quad_points) {
    Jet j = eval(x);
    if (grid.dim == 1) j.grad[1] = 0.0;
    jet.values.push_back(j.value);
    jet.grads.push_back(j.grad);
  }
  return jet;
}

GridFunction sample_nodal(const AnalyticFieldSpec& spec, const Grid& grid) {
  const FieldEvaluator eval(spec);
  GridFunction u;
  u.values.reserve(grid.size());
  for (const auto& x : grid.quad_points) u.values.push_back(eval(x).value);
  return u;
}

StencilNeighbours neighbours(const Grid& grid, std::size_t k) {
  const int i = static_cast<int>(k % grid.n[0]);
  const int j = static_cast<int>(k / grid.n[0]);
  StencilNeighbours nb{};
  nb.east = grid.index(i + 1 < grid.n[0] ? i + 1 : i, j);
  nb.west = grid.index(i > 0 ? i - 1 : i, j);
  nb.north = grid.index(i, j + 1 < grid.n[1] ? j + 1 : j);
  nb.south = grid.index(i, j > 0 ? j - 1 : j);
  return nb;
}

JetField discrete_gradient(const GridFunction& u, const Grid& grid) {
  if (u.size() != grid.size()) throw std::invalid_argument("grid function length does not match the grid");
  JetField jet;
  jet.dim = grid.dim;
  jet.values = u.values;
  jet.grads.resize(grid.size());
  const double cx = 0.5 / grid.h[0];
  const double cy = 0.5 / grid.h[1];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto nb = neighbours(grid, k);
    jet.grads[k][0] = (u.values[nb.east] - u.values[nb.west]) * cx;
    jet.grads[k][1] = grid.dim == 2 ? (u.values[nb.north] - u.values[nb.south]) * cy : 0.0;
  }
  return jet;
}

double integrate(std::span<const double> values, const Grid& grid) {
  if (values.size() != grid.size()) throw std::invalid_argument("integrand length does not match the grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += grid.quad_weights[i] * values[i];
  return sum;
}

}  // namespace dslab
