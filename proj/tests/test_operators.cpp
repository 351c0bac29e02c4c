#include <doctest.h>

#include <cmath>

#include "dslab/operators.hpp"
#include "generators.hpp"

using namespace dslab;
using dslab::testing::Gen;

namespace {

OperatorFamily single(double p, std::size_t n = 4, double alpha = -1.0) {
  return make_multiphase({{ExponentField::constant(p, n), std::vector<double>(n, 1.0)}}, alpha > 0 ? alpha : p);
}

OperatorFamily two_phase(std::size_t n = 4, double alpha = 1.5) {
  return make_multiphase({{ExponentField::constant(2.0, n), std::vector<double>(n, 1.0)},
                          {ExponentField::constant(3.0, n), std::vector<double>(n, 1.0)}},
                         alpha);
}

}  // namespace

TEST_CASE("flux oracles") {
  const OperatorFamily p2 = single(2.0);
  const Vec2 zero = p2.flux(0, {0.0, 0.0});
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
  const Vec2 a = p2.flux(0, {3.0, 4.0});
  CHECK(a[0] == doctest::Approx(3.0));
  CHECK(a[1] == doctest::Approx(4.0));
  const Vec2 b = single(3.0).flux(0, {3.0, 4.0});
  CHECK(b[0] == doctest::Approx(15.0));
  CHECK(b[1] == doctest::Approx(20.0));
}

TEST_CASE("density oracles") {
  CHECK(single(2.0).density(0, 0.0) == 0.0);
  CHECK(single(2.0).density(0, 2.0) == doctest::Approx(2.0));
  CHECK(two_phase().density(0, 1.0) == doctest::Approx(0.5 + 1.0 / 3.0));
  const OperatorFamily img = make_image_operator(ExponentField::constant(2.0, 2), 1.0, 1.0, 1.5);
  CHECK(img.density(0, 0.0) == 0.0);
  // ∫₀¹ s ln(1+s) ds = 1/4.
  CHECK(img.density(0, 1.0) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("multiphase construction") {
  const OperatorFamily p2 = single(2.0);
  CHECK(p2.phi(0, 0.7) == doctest::Approx(0.7));
  CHECK(p2.homogeneous());
  const OperatorFamily two = two_phase();
  CHECK(two.phi(0, 2.0) == doctest::Approx(2.0 + 4.0));
  CHECK_FALSE(two.homogeneous());
  CHECK(two.strict());
  CHECK(two.r_order() == 1.5);
  CHECK_THROWS(make_multiphase({{ExponentField::constant(2.0, 3), {1.0, 0.0, 1.0}}}, 1.5));
  CHECK_THROWS(make_multiphase({}, 1.5));
  CHECK_THROWS(make_multiphase({{ExponentField::constant(2.0, 3), {1.0, 1.0, 1.0}}}, 2.5));
  CHECK_THROWS(make_multiphase({{ExponentField::constant(2.0, 3), {1.0, 0.5, 1.0}}}, 1.5, 0.8));
  // α = p₋ is allowed but only the non-strict ratio is claimed.
  CHECK_FALSE(single(2.0).strict());
  CHECK(single(2.0, 4, 1.5).strict());
}

TEST_CASE("image operator oracles") {
  const double eps = 0.7, delta = 1.3, alpha = 1.5;
  const ExponentField p = ExponentField::constant(2.4, 3);
  const OperatorFamily img = make_image_operator(p, eps, delta, alpha);
  const double at_eps = std::pow(eps, 1.4) * std::pow(std::log1p(eps), delta);
  CHECK(img.phi(0, eps) == doctest::Approx(at_eps).epsilon(1e-14));
  CHECK(img.phi(0, std::nextafter(eps, 10.0)) == doctest::Approx(at_eps).epsilon(1e-12));
  CHECK(img.phi(0, 0.0) == 0.0);
  const OperatorFamily unit = make_image_operator(ExponentField::constant(2.0, 1), 1.0, 1.0, 1.5);
  CHECK(unit.phi(0, 4.0) == doctest::Approx(2.0 * std::log(5.0)).epsilon(1e-14));
  CHECK(img.strict());
  CHECK_FALSE(img.homogeneous());
  CHECK(img.r_order() == alpha);
  CHECK_THROWS(make_image_operator(ExponentField::constant(1.5, 3), eps, delta, 1.5));
  CHECK_THROWS(make_image_operator(p, 0.0, delta, alpha));
}

TEST_CASE("homogeneity oracles") {
  const HomogeneityReport s = check_homogeneity(single(2.7), 200, 1);
  CHECK(s.A_homogeneous);
  CHECK(s.phi_homogeneous);
  CHECK(s.flags_agree);
  const HomogeneityReport i = check_homogeneity(make_image_operator(ExponentField::constant(2.0, 3), 0.5, 1.0, 1.5), 200, 2);
  CHECK_FALSE(i.A_homogeneous);
  CHECK_FALSE(i.phi_homogeneous);
  CHECK(i.flags_agree);
  const HomogeneityReport t = check_homogeneity(two_phase(), 200, 3);
  CHECK_FALSE(t.A_homogeneous);
  CHECK_FALSE(t.phi_homogeneous);
  CHECK(t.flags_agree);
}

TEST_CASE("custom family with numerically integrated primitive") {
  const OperatorFamily c = OperatorFamily::custom(
      "cubic", ExponentField::constant(4.0, 1), [](std::size_t, double s) { return s * s * s; }, {}, 4.0, false, true);
  CHECK(c.density(0, 2.0) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(check_homogeneity(c, 100, 4).flags_agree);
}

TEST_CASE("image growth bound and coercivity fit") {
  const OperatorFamily img = make_image_operator(ExponentField::constant(2.5, 2), 0.5, 1.0, 1.5);
  const ImageGrowthBound gb = image_growth_bound(img);
  CHECK(gb.b >= std::log1p(0.5));
  for (std::size_t i = 0; i < gb.C.size(); ++i) {
    CHECK(gb.C[i] >= 1.0);
    CHECK(gb.eps_tilde[i] >= 0.5);
  }
  const CoercivityConstants k = fit_alpha_coercivity(img, build_grid(1, 8, 1.0));
  CHECK(k.c1 > 0.0);
  CHECK(k.c2 >= 0.0);
}

TEST_CASE("property: flux identities") {
  Gen gen(201);
  const std::vector<OperatorFamily> fams = {single(2.0), single(3.3), two_phase(),
                                            make_image_operator(ExponentField::constant(2.2, 4), 0.6, 1.7, 1.4)};
  for (int trial = 0; trial < 2000; ++trial) {
    const OperatorFamily& f = fams[trial % fams.size()];
    const Vec2 xi = gen.vec(gen.log_uniform(1e-4, 1e3));
    const double s = norm(xi);
    const Vec2 a = f.flux(1, xi);
    const double phi = f.phi(1, s);
    CHECK(std::abs(dot(a, xi) - phi * s) <= 1e-12 * std::max(1.0, phi * s));
    CHECK(std::abs(norm(a) - phi) <= 1e-12 * std::max(1e-300, phi));
  }
}

TEST_CASE("property: density vanishes at 0 and is nondecreasing") {
  Gen gen(202);
  const std::vector<OperatorFamily> fams = {single(1.7), two_phase(),
                                            make_image_operator(ExponentField::constant(2.6, 4), 0.3, 0.8, 1.9)};
  for (const auto& f : fams) {
    CHECK(f.density(0, 0.0) == 0.0);
    std::vector<double> ts;
    for (int k = 0; k < 64; ++k) ts.push_back(gen.log_uniform(1e-6, 1e3));
    std::sort(ts.begin(), ts.end());
    for (std::size_t k = 1; k < ts.size(); ++k) CHECK(f.density(0, ts[k]) >= f.density(0, ts[k - 1]));
  }
}

TEST_CASE("property: density_difference agrees with the difference of densities") {
  Gen gen(203);
  const std::vector<OperatorFamily> fams = {single(2.5), two_phase(),
                                            make_image_operator(ExponentField::constant(2.1, 4), 0.5, 1.0, 1.5)};
  for (int trial = 0; trial < 300; ++trial) {
    const OperatorFamily& f = fams[trial % fams.size()];
    const double t0 = gen.log_uniform(1e-3, 1e2);
    const double t1 = gen.coin() ? t0 * (1.0 + gen.uniform(-0.1, 0.1)) : gen.log_uniform(1e-3, 1e2);
    const double plain = f.density(0, t1) - f.density(0, t0);
    const double scale = std::max({1e-12, std::abs(f.density(0, t1)), std::abs(f.density(0, t0))});
    CHECK(std::abs(f.density_difference(0, t0, t1) - plain) <= 1e-9 * scale);
  }
}

TEST_CASE("property: strict ratio for built-ins on log ladders") {
  Gen gen(204);
  for (int trial = 0; trial < 40; ++trial) {
    const double p = gen.uniform(1.6, 4.0);
    const double alpha = gen.uniform(1.05, p - 0.05);
    const OperatorFamily f = trial % 2 ? single(p, 2, alpha)
                                       : make_image_operator(ExponentField::constant(p, 2), gen.log_uniform(0.05, 5.0),
                                                             gen.uniform(0.3, 2.5), alpha);
    REQUIRE(f.strict());
    std::vector<double> s;
    for (int k = 0; k < 64; ++k) s.push_back(gen.log_uniform(1e-6, 1e3));
    std::sort(s.begin(), s.end());
    double prev = f.phi(0, s[0]) / std::pow(s[0], alpha - 1.0);
    for (std::size_t k = 1; k < s.size(); ++k) {
      const double cur = f.phi(0, s[k]) / std::pow(s[k], alpha - 1.0);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("property: image growth bound dominates the profile") {
  Gen gen(205);
  for (int trial = 0; trial < 30; ++trial) {
    const double alpha = gen.uniform(1.1, 1.9);
    const double p = alpha + gen.uniform(0.05, 2.0);
    const OperatorFamily f =
        make_image_operator(ExponentField::constant(p, 1), gen.log_uniform(0.05, 5.0), gen.uniform(0.3, 3.0), alpha);
    const double b = image_growth_bound(f).b;
    for (int k = 0; k < 200; ++k) {
      const double s = gen.log_uniform(1e-6, 1e3);
      CHECK(f.phi(0, s) <= b * std::pow(s, p - 1.0) * (1.0 + 1e-12));
    }
  }
}
