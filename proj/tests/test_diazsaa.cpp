#include <doctest.h>

#include <cmath>

#include "dslab/diazsaa.hpp"
#include "dslab/experiments.hpp"
#include "generators.hpp"

using namespace dslab;
using dslab::testing::Gen;

namespace {

OperatorFamily single(double p, double alpha, std::size_t n) {
  return make_multiphase({{ExponentField::constant(p, n), std::vector<double>(n, 1.0)}}, alpha);
}

ScalarProfile power(double q) {
  return [q](double s) { return s == 0.0 ? 0.0 : std::pow(s, q); };
}

}  // namespace

TEST_CASE("scalar inequality oracles") {
  const ScalarIneqCase a = scalar_gap(power(2.0), 2.0, 1.0, 2.0, 3.0, 1.0);
  CHECK(a.lhs == doctest::Approx(38.75));
  CHECK(a.rhs == doctest::Approx(21.0));
  CHECK(a.gap == doctest::Approx(17.75));
  CHECK(a.equality_class == EqualityClass::no_equality);

  const ScalarIneqCase b = scalar_gap(power(1.0), 2.0, 1.0, 2.0, 2.0, 1.0);
  CHECK(b.lhs == doctest::Approx(10.0));
  CHECK(b.rhs == doctest::Approx(10.0));
  CHECK(std::abs(b.gap) <= 1e-12);
  CHECK(b.equality_class == EqualityClass::ac_eq_bd_flat_ratio);
  CHECK(std::string(to_string(b.equality_class)) == "ac-eq-bd-with-flat-ratio");

  const ScalarIneqCase c = scalar_gap(power(3.0), 2.5, 0.3, 4.0, 0.0, 0.0);
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
  CHECK(c.equality_class == EqualityClass::c_d_zero);
  CHECK_THROWS(scalar_gap(power(1.0), 2.0, 0.0, 1.0, 1.0, 1.0));
}

TEST_CASE("equality classes under r = 1 and strictness") {
  CHECK(scalar_gap(power(2.0), 1.0, 0.4, 3.0, 1.7, 1.7).equality_class == EqualityClass::r1_equal_or_flat);
  CHECK(scalar_gap(power(2.0), 2.0, 0.4, 0.4, 1.7, 1.7).equality_class == EqualityClass::strict_forced);
  // Strictly increasing ratio, c ≠ d: strictly positive gap.
  CHECK(scalar_gap(power(2.0), 2.0, 1.0, 2.0, 2.0, 1.0).gap > 0.0);
}

TEST_CASE("pointwise gap oracles") {
  const OperatorFamily f = single(2.0, 2.0, 1);
  CHECK(pointwise_gap(f, 2.0, 0, 0.7, {0, 0}, 1.3, {0, 0}).total == 0.0);
  CHECK(std::abs(pointwise_gap(f, 2.0, 0, 0.7, {0.2, -1.0}, 0.7, {0.2, -1.0}).total) <= 1e-14);
  const PointwiseGap g = pointwise_gap(f, 2.0, 0, 1.0, {1.0, 0.0}, 2.0, {0.0, 1.0});
  // E1 = (1+4)·1 + (1+1/4)·1, E2 = 2·2·1 + 2·(1/2)·1, E3 = 0.
  CHECK(g.total == doctest::Approx(6.25));
  CHECK(g.lemma_step == doctest::Approx(1.25));
  CHECK(g.cauchy_step == doctest::Approx(5.0));
  CHECK_THROWS(pointwise_gap(f, 2.0, 0, 0.0, {0, 0}, 1.0, {0, 0}));
}

TEST_CASE("integral gap oracles") {
  const Grid g = build_grid(1, 32, 1.0);
  const OperatorFamily f = single(2.0, 2.0, g.size());
  const JetField one = sample_jet({"constant", {{"value", 1.0}}}, g);
  const JetField two = sample_jet({"constant", {{"value", 2.0}}}, g);
  const IntegralGap c = integral_gap(f, 2.0, one, two, g);
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
  const JetField w1 = sample_jet({"quadratic-bump", {{"c", 2.0}, {"amp", -1.0}}}, g);  // 1 + x²
  const JetField w2 = sample_jet({"affine", {{"c", 2.0}, {"k0", -1.0}}}, g);
  CHECK(std::abs(integral_gap(f, 2.0, w1, w1, g).gap) <= 1e-14);
  const IntegralGap ig = integral_gap(f, 2.0, w1, w2, g);
  CHECK(ig.gap >= 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    sum += g.quad_weights[i] * pointwise_gap(f, 2.0, i, w1.values[i], w1.grads[i], w2.values[i], w2.grads[i]).total;
  }
  CHECK(ig.gap == doctest::Approx(sum).epsilon(1e-12));
  JetField bad = w2;
  bad.values[3] = 0.0;
  CHECK_THROWS(integral_gap(f, 2.0, w1, bad, g));
}

TEST_CASE("ratio power and quotient jets") {
  const Grid g = build_grid(1, 16, 1.0);
  const JetField e1 = sample_jet({"exp-linear", {{"k0", 1.0}}}, g);
  const JetField e2 = sample_jet({"exp-linear", {{"k0", 2.0}}}, g);
  const JetField r1 = ratio_power_jet(e1, e2, 1.0);
  const JetField same = ratio_power_jet(e1, e1, 2.7);
  const JetField r2 = ratio_power_jet(e1, e2, 2.0);
  const JetField q = quotient_jet(e1, e2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.quad_points[i][0];
    CHECK(r1.values[i] == doctest::Approx(e2.values[i]));
    CHECK(r1.grads[i][0] == doctest::Approx(e2.grads[i][0]));
    CHECK(same.values[i] == doctest::Approx(e1.values[i]));
    CHECK(same.grads[i][0] == doctest::Approx(e1.grads[i][0]));
    CHECK(r2.values[i] == doctest::Approx(std::exp(3 * x)).epsilon(1e-13));
    CHECK(r2.grads[i][0] == doctest::Approx(3 * std::exp(3 * x)).epsilon(1e-13));
    CHECK(q.values[i] == doctest::Approx(std::exp(x)).epsilon(1e-14));
    CHECK(q.grads[i][0] == doctest::Approx(std::exp(x)).epsilon(1e-13));
  }
  JetField dbl = e1;
  for (auto& v : dbl.values) v *= 2;
  for (auto& gr : dbl.grads) gr = scale(2, gr);
  const JetField q2 = quotient_jet(e1, dbl);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(q2.values[i] == doctest::Approx(2.0));
    CHECK(std::abs(q2.grads[i][0]) <= 1e-14);
  }
  const JetField ones = sample_jet({"constant", {{"value", 1.0}}}, g);
  const JetField q3 = quotient_jet(ones, e2);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(q3.grads[i][0] == doctest::Approx(e2.grads[i][0]));
}

TEST_CASE("truncation oracles") {
  const Grid g = build_grid(1, 3, 1.0);
  JetField w;
  w.dim = 1;
  w.values = {0.5, 5.0, 0.1};
  w.grads = {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}};
  const TruncatedJet t = truncate_jet(w, 0.25, 2.0);
  CHECK(t.w.values[0] == 0.5);
  CHECK(t.w.grads[0][0] == 1.0);
  CHECK(t.w.values[1] == 4.0);
  CHECK(t.w.grads[1][0] == 0.0);
  CHECK(t.w.values[2] == 0.25);
  CHECK(t.w.grads[2][0] == 0.0);
  CHECK(t.root.values[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(t.root.grads[0][0] == doctest::Approx(0.5 / std::sqrt(0.5)));
  (void)g;
}

TEST_CASE("equality diagnosis oracles") {
  const Grid g = build_grid(1, 24, 1.0);
  const OperatorFamily f = single(2.5, 2.5, g.size());
  const JetField w1 = sample_jet({"exp-linear", {{"k0", 0.7}, {"amp", 0.5}}}, g);
  JetField w3 = w1;
  for (auto& v : w3.values) v *= 3;
  for (auto& gr : w3.grads) gr = scale(3, gr);
  const EqualityDiagnosis d = equality_diagnose(f, 2.5, w1, w3, g);
  CHECK(d.lambda_hat == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(d.ratio_deviation <= 1e-14);
  CHECK(d.phi_scaling_residual <= 1e-12);
  CHECK(d.near_equality);

  const EqualityDiagnosis same = equality_diagnose(f, 2.5, w1, w1, g);
  CHECK(same.lambda_hat == 1.0);
  CHECK(same.ratio_deviation == 0.0);
  CHECK(same.phi_scaling_residual == 0.0);

  const OperatorFamily strict = single(2.5, 1.5, g.size());
  const JetField c2 = sample_jet({"constant", {{"value", 2.0}}}, g);
  const JetField c5 = sample_jet({"constant", {{"value", 5.0}}}, g);
  const EqualityDiagnosis consts = equality_diagnose(strict, 1.5, c2, c5, g);
  CHECK(consts.lambda_hat == doctest::Approx(2.5));
  CHECK(consts.gradients_vanish);
  CHECK(consts.strict_checked);
  CHECK(consts.strict_ok);
}

TEST_CASE("counterexample fixtures") {
  const Grid g = build_grid(1, {64, 1}, {2.0, 1.0}, {-1.0, 0.0});
  const CounterexampleReport a = fixture_counterexample("ex51", g);
  CHECK(a.passed);
  CHECK(a.log_derivatives_agree);
  CHECK(a.ratio_attains_one);
  CHECK(a.ratio_attains_two);
  CHECK(a.quotient_gradient_zero);
  const CounterexampleReport b = fixture_counterexample("ex52", g);
  CHECK(b.passed);
  REQUIRE(b.boundary_left.has_value());
  CHECK(*b.boundary_left == 0.0);
  CHECK(*b.boundary_right == 0.0);
  const AnalyticFieldSpec w1{"ex51-pair", {{"which", 1.0}}}, w2{"ex51-pair", {{"which", 2.0}}};
  CHECK(eval_field(w2, {-0.5, 0}).value / eval_field(w1, {-0.5, 0}).value == 2.0);
  CHECK(eval_field(w2, {0.5, 0}).value / eval_field(w1, {0.5, 0}).value == 1.0);
  CHECK(eval_field(w1, {0.5, 0}).grad[0] / eval_field(w1, {0.5, 0}).value == 2.0);
  CHECK(eval_field(w2, {0.5, 0}).grad[0] / eval_field(w2, {0.5, 0}).value == 2.0);
  CHECK_THROWS(fixture_counterexample("ex51", build_grid(1, {63, 1}, {2.0, 1.0}, {-1.0, 0.0})));
  CHECK_THROWS(fixture_counterexample("ex53", g));
}

TEST_CASE("sub-unit power gap oracles") {
  const SubunitGaps g = subunit_power_gaps(4.0, 1.0, 0.5);
  CHECK(g.gap1 == doctest::Approx(std::sqrt(3.0) - 1.0));
  CHECK(g.gap2 == doctest::Approx(3.0 - std::sqrt(5.0)));
  const SubunitGaps one = subunit_power_gaps(0.3, 0.8, 1.0);
  CHECK(std::abs(one.gap1) <= 1e-15);
  CHECK(std::abs(one.gap2) <= 1e-15);
  CHECK(subunit_power_gaps(0.6, 0.6, 0.3).gap1 == 0.0);
  CHECK(subunit_power_gaps(0.6, 0.6, 0.0).gap1 == 0.0);
  CHECK(subunit_power_gaps(0.6, 0.2, 0.0).gap1 == 1.0);
  CHECK(subunit_power_gaps(0.6, 0.2, 0.0).gap2 == 1.0);
  CHECK(subunit_power_gaps(0.6, 0.0, 0.0).gap2 == 0.0);
  CHECK(subunit_power_gaps(0.6, 0.0, 0.4).gap1 == 0.0);
  CHECK_THROWS(subunit_power_gaps(1.0, 1.0, 1.5));
}

TEST_CASE("property: scalar inequality over random profiles") {
  const ScalarSweep s = run_scalar_sweep(20000, 501);
  CHECK(s.passed);
  CHECK(s.min_scaled_gap >= -1e-12);
}

TEST_CASE("property: any reported equality class re-evaluates to a vanishing gap") {
  Gen gen(502);
  int classified = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const double r = gen.coin(0.3) ? 1.0 : gen.uniform(1.0, 4.0);
    const double a = gen.log_uniform(0.1, 10), c = gen.coin(0.2) ? 0.0 : gen.log_uniform(0.1, 10);
    // Bias towards the equality manifolds so that each class is exercised.
    const int mode = gen.integer(0, 3);
    const double b = mode == 0 ? a : gen.log_uniform(0.1, 10);
    const double d = mode == 1 ? c : mode == 2 ? a * c / b : gen.log_uniform(0.1, 10);
    const double q = gen.coin() ? r - 1.0 : r - 1.0 + gen.uniform(0.1, 2.0);
    const ScalarIneqCase k = scalar_gap(power(q), r, a, b, c, d);
    if (k.equality_class != EqualityClass::no_equality) {
      ++classified;
      const ScalarIneqCase again = scalar_gap(power(q), r, k.a, k.b, k.c, k.d);
      CHECK(std::abs(again.gap) <= 1e-10 * std::max(1.0, std::abs(again.lhs)));
    }
  }
  CHECK(classified > 100);
}

TEST_CASE("property: strictly increasing ratio and non-degenerate input give a positive gap") {
  Gen gen(503);
  for (int trial = 0; trial < 2000; ++trial) {
    const double r = gen.uniform(1.05, 4.0);
    const double q = r - 1.0 + gen.uniform(0.2, 2.0);
    const double a = gen.log_uniform(0.1, 10), b = gen.log_uniform(0.1, 10);
    const double c = gen.log_uniform(0.1, 10);
    double d = gen.log_uniform(0.1, 10);
    if (std::abs(c - d) < 1e-3 && std::abs(a - b) < 1e-3) d *= 1.5;
    CHECK(scalar_gap(power(q), r, a, b, c, d).gap > 0.0);
  }
}

TEST_CASE("property: integral gap is the weighted sum of pointwise gaps") {
  Gen gen(504);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = gen.integer(1, 2);
    const Grid g = testing::random_grid(gen, dim);
    const testing::FieldGen fields{0.2, 1.5, dim, 1.0, false};
    const JetField w1 = sample_jet(fields(gen), g), w2 = sample_jet(fields(gen), g);
    const double p = gen.uniform(1.6, 3.5);
    const double alpha = gen.uniform(1.1, p);
    const OperatorFamily f = single(p, alpha, g.size());
    const IntegralGap ig = integral_gap(f, alpha, w1, w2, g);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      sum += g.quad_weights[i] * pointwise_gap(f, alpha, i, w1.values[i], w1.grads[i], w2.values[i], w2.grads[i]).total;
    }
    CHECK(std::abs(ig.gap - sum) <= 1e-10 * (1.0 + std::abs(ig.lhs)));
    CHECK(ig.gap >= -1e-12 * (1.0 + std::abs(ig.lhs)));
    // Restricting to a subset keeps the inequality.
    std::vector<char> mask(g.size());
    for (auto& m : mask) m = gen.coin() ? 1 : 0;
    const IntegralGap sub = integral_gap(f, alpha, w1, w2, g, &mask);
    CHECK(sub.gap >= -1e-12 * (1.0 + std::abs(sub.lhs)));
  }
}

TEST_CASE("property: jet gradients of ratio powers and quotients match central differences") {
  Gen gen(505);
  const testing::FieldGen fields{0.3, 1.5, 1, 1.0, true};
  for (int trial = 0; trial < 60; ++trial) {
    const AnalyticFieldSpec s1 = fields(gen), s2 = fields(gen);
    const double r = gen.uniform(1.0, 3.0);
    const double x = gen.uniform(0.1, 0.9);
    auto values = [&](double at) {
      auto jet = [&](const AnalyticFieldSpec& spec) {
        const Jet j = eval_field(spec, {at, 0.0});
        return JetField{1, {j.value}, {{j.grad[0], 0.0}}};
      };
      const JetField a = jet(s1), b = jet(s2);
      return std::pair{ratio_power_jet(a, b, r), quotient_jet(a, b)};
    };
    const auto here = values(x);
    double err_rp[2], err_q[2];
    int k = 0;
    for (double h : {1e-3, 5e-4}) {
      const auto plus = values(x + h), minus = values(x - h);
      err_rp[k] = std::abs((plus.first.values[0] - minus.first.values[0]) / (2 * h) - here.first.grads[0][0]);
      err_q[k] = std::abs((plus.second.values[0] - minus.second.values[0]) / (2 * h) - here.second.grads[0][0]);
      ++k;
    }
    CHECK(err_rp[1] <= std::max(0.3 * err_rp[0], 1e-8));
    CHECK(err_q[1] <= std::max(0.3 * err_q[0], 1e-8));
  }
}

TEST_CASE("property: truncation error bound and monotone L1 convergence") {
  Gen gen(506);
  const testing::FieldGen fields{0.01, 20.0, 1, 1.0, false};
  for (int trial = 0; trial < 40; ++trial) {
    const Grid g = build_grid(1, 64, 1.0);
    const JetField w = sample_jet(fields(gen), g);
    double prev = -1.0;
    for (double eps = 0.5; eps > 1e-3; eps /= 2) {
      const TruncatedJet t = truncate_jet(w, eps, 1.5);
      std::vector<double> err(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        err[i] = std::abs(t.w.values[i] - w.values[i]);
        CHECK(err[i] <= std::abs(w.values[i] - 1.0) + 1e-15);
      }
      const double l1 = integrate(err, g);
      if (prev >= 0.0) CHECK((l1 < prev || prev == 0.0));
      prev = l1;
    }
  }
}

TEST_CASE("property: sub-unit power gaps are nonnegative") {
  const SubunitSweep s = run_subunit_sweep(100000, 507);
  CHECK(s.passed);
}
