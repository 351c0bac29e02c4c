#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "dslab/diazsaa.hpp"
#include "dslab/path.hpp"
#include "generators.hpp"

using namespace dslab;
using dslab::testing::Gen;

namespace {

JetField constant_jet(const Grid& g, double v) { return sample_jet({"constant", {{"value", v}}}, g); }

SourceFamily linear_decay(std::size_t n, double alpha) {
  return make_power_source(std::vector<double>(n, 1.0), std::vector<double>(n, 0.0), std::vector<double>(n, 1.0),
                           std::vector<double>(n, 1.0), alpha);
}

OperatorFamily single(double p, double alpha, std::size_t n) {
  return make_multiphase({{ExponentField::constant(p, n), std::vector<double>(n, 1.0)}}, alpha);
}

}  // namespace

TEST_CASE("path constants") {
  const Grid g = build_grid(1, 8, 1.0);
  const PathContext a = make_path(constant_jet(g, 1.0), constant_jet(g, 2.0), 2.0);
  CHECK(a.M == 2.0);
  CHECK(a.theta0 == 0.5);
  const PathContext b = make_path(constant_jet(g, 1.0), constant_jet(g, 1.0), 2.0);
  CHECK(b.M == 1.0);
  CHECK(b.theta0 == std::numeric_limits<double>::infinity());
  const PathContext c = make_path(constant_jet(g, 1.0), constant_jet(g, 4.0), 2.0);
  CHECK(c.M == 4.0);
  CHECK(c.theta0 == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS(make_path(constant_jet(g, 0.0), constant_jet(g, 1.0), 2.0));
  CHECK_THROWS(make_path(constant_jet(g, 1.0), constant_jet(g, 1.0), 2.5));
  CHECK_THROWS(make_path(constant_jet(g, 1e-7), constant_jet(g, 1.0), 2.0));
}

TEST_CASE("path jets") {
  const Grid g = build_grid(1, 8, 1.0);
  const JetField w1 = sample_jet({"exp-linear", {{"k0", 1.0}}}, g);
  const JetField w2 = sample_jet({"affine", {{"c", 1.0}, {"k0", 0.5}}}, g);
  const PathContext ctx = make_path(w1, w2, 1.5);
  const PathJets at1 = path_jets(ctx, 1.0), at0 = path_jets(ctx, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(at1.w_theta.values[i] == doctest::Approx(w1.values[i]));
    CHECK(at0.w_theta.values[i] == doctest::Approx(w2.values[i]));
  }
  const PathContext k = make_path(constant_jet(g, 1.0), constant_jet(g, 2.0), 2.0);
  const PathJets mid = path_jets(k, 0.5);
  CHECK(mid.w_theta.values[0] == doctest::Approx(1.5));
  CHECK(mid.gamma_theta.values[0] == doctest::Approx(-0.5 / std::sqrt(1.5)).epsilon(1e-12));
  CHECK(mid.gamma_theta.values[0] == doctest::Approx(-0.4082).epsilon(1e-4));
  CHECK_THROWS(path_jets(k, 1.6));
}

TEST_CASE("energy J oracles") {
  const Grid g = build_grid(1, 10, 1.0);
  const OperatorFamily f = single(2.0, 2.0, g.size());
  CHECK(energy_J(f, linear_decay(g.size(), 2.0), constant_jet(g, 1.0), g) == doctest::Approx(0.5));
  CHECK(energy_J(f, make_zero_source(g.size(), 2.0), constant_jet(g, 1.0), g) == 0.0);
  const OperatorFamily img = make_image_operator(ExponentField::constant(2.0, g.size()), 0.5, 1.0, 1.5);
  CHECK(energy_J(img, make_zero_source(g.size(), 1.5), constant_jet(g, 0.3), g) == 0.0);
}

TEST_CASE("beta scan basics and CSV contract") {
  const Grid g = build_grid(1, 16, 1.0);
  const OperatorFamily f = single(2.0, 2.0, g.size());
  const SourceFamily src = linear_decay(g.size(), 2.0);
  const JetField w = sample_jet({"exp-linear", {{"k0", 1.0}, {"amp", 0.4}, {"c", 0.1}}}, g);
  const PathContext same = make_path(w, w, 2.0);
  const BetaScan flat = beta_scan(same, f, src, g, {-0.3, 0.0, 0.5, 1.0, 1.3});
  for (std::size_t k = 0; k < flat.theta.size(); ++k) {
    CHECK(flat.beta[k] == doctest::Approx(flat.beta[0]).epsilon(1e-14));
    CHECK(flat.beta_prime[k] == 0.0);
  }
  const JetField w2 = sample_jet({"quadratic-bump", {{"c", 0.3}, {"amp", 0.4}, {"m0", 0.5}}}, g);
  const PathContext ctx = make_path(w, w2, 2.0);
  const BetaScan scan = beta_scan(ctx, f, src, g, default_thetas(ctx));
  CHECK(scan.theta.size() == 41);
  CHECK(scan.report.passed());
  const BetaScan ends = beta_scan(ctx, f, src, g, {0.0, 1.0});
  CHECK(ends.beta[0] == doctest::Approx(energy_J(f, src, w2, g)).epsilon(1e-14));
  CHECK(ends.beta[1] == doctest::Approx(energy_J(f, src, w, g)).epsilon(1e-14));

  std::ostringstream csv;
  write_beta_csv(scan, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("theta,beta,beta_prime,cor64_gap\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 42);
  CHECK(text.find('\r') == std::string::npos);

  CHECK_THROWS(beta_scan(ctx, f, src, g, {1.0, 0.0}));
  CHECK_THROWS(beta_scan(ctx, single(2.0, 1.5, g.size()), src, g, {0.0, 1.0}));
}

TEST_CASE("property: path bounds over admissible thetas") {
  Gen gen(601);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = gen.integer(1, 2);
    const Grid g = testing::random_grid(gen, dim);
    const testing::FieldGen fields{0.05, 1.0, dim, 1.0, false};
    const JetField w1 = sample_jet(fields(gen), g), w2 = sample_jet(fields(gen), g);
    const PathContext ctx = make_path(w1, w2, gen.uniform(1.1, 2.0));
    for (double theta : default_thetas(ctx)) {
      const PathJets pj = path_jets(ctx, theta);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double wt = pj.w_theta.values[i];
        const double lo = std::min(w1.values[i], w2.values[i]), hi = std::max(w1.values[i], w2.values[i]);
        CHECK(wt >= 0.5 * lo * (1 - 1e-12));
        CHECK(wt <= 1.5 * hi * (1 + 1e-12));
        for (double r : {w1.values[i] / wt, w2.values[i] / wt}) {
          CHECK(r >= 2.0 / (3.0 * ctx.M) * (1 - 1e-12));
          CHECK(r <= 2.0 * ctx.M * (1 + 1e-12));
        }
      }
    }
  }
}

TEST_CASE("property: positive scaling and sums stay admissible") {
  Gen gen(602);
  for (int trial = 0; trial < 40; ++trial) {
    const Grid g = testing::random_grid(gen, 1);
    const testing::FieldGen fields{0.05, 1.0, 1, 1.0, false};
    JetField a = sample_jet(fields(gen), g), b = sample_jet(fields(gen), g);
    const double s = gen.log_uniform(1e-2, 1e2);
    JetField sum = a;
    for (std::size_t i = 0; i < g.size(); ++i) {
      sum.values[i] = s * a.values[i] + b.values[i];
      sum.grads[i] = add(scale(s, a.grads[i]), b.grads[i]);
    }
    CHECK_NOTHROW(sum.validate(g));
    CHECK_NOTHROW(make_path(sum, b, 1.5));  // requires positivity and finite ratios
    const double alpha = gen.uniform(1.1, 2.0);
    const JetField root = truncate_jet(sum, 1e-12, alpha).root;
    CHECK_NOTHROW(root.validate(g));
  }
}

TEST_CASE("property: beta' matches finite differences and is nondecreasing") {
  Gen gen(603);
  for (int trial = 0; trial < 8; ++trial) {
    const Grid g = build_grid(1, 24, 1.0);
    const testing::FieldGen fields{0.1, 1.0, 1, 1.0, true};
    const JetField w1 = sample_jet(fields(gen), g), w2 = sample_jet(fields(gen), g);
    const bool image = trial % 2 == 1;
    const double alpha = image ? 1.5 : 2.0;
    const OperatorFamily f = image ? make_image_operator(ExponentField::constant(2.0, g.size()), 0.5, 1.0, 1.5)
                                   : single(2.0, 2.0, g.size());
    const SourceFamily src = linear_decay(g.size(), alpha);
    const PathContext ctx = make_path(w1, w2, alpha);
    const BetaScan scan = beta_scan(ctx, f, src, g, default_thetas(ctx));
    INFO("trial " << trial << " fd mismatch " << scan.report.max_fd_mismatch << " M " << ctx.M);
    CHECK(scan.report.fd_ok);
    CHECK(scan.report.convex_ok);
    CHECK(scan.report.gap_ok);
    CHECK(scan.report.strict_ok);
  }
}
