#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dslab/grid.hpp"
#include "dslab/operators.hpp"

namespace dslab {

/// Equality cases of the scalar inequality:
/// c = 0 forces d = 0; r = 1 needs c = d or φ flat between c and d;
/// r > 1 needs ac = bd plus c = d or a flat ratio φ(θ)/θ^{r−1} between c and d.
enum class EqualityClass {
  no_equality,
  c_d_zero,
  r1_equal_or_flat,
  ac_eq_bd_flat_ratio,
  strict_forced,  ///< c = d and a = b, the only case left when the ratio is strictly increasing
};
const char* to_string(EqualityClass c);

struct ScalarIneqCase {
  double a = 0, b = 0, c = 0, d = 0, r = 1;
  double lhs = 0, rhs = 0, gap = 0;
  EqualityClass equality_class = EqualityClass::no_equality;
};

using ScalarProfile = std::function<double(double)>;

///   [1+(r−1)(a/b)^r]φ(c)c + [1+(r−1)(b/a)^r]φ(d)d  ≥  r(a/b)^{r−1}φ(c)d + r(b/a)^{r−1}φ(d)c
/// A class other than no_equality is assigned only when |gap| ≤ 1e-10·max(1,|lhs|)
/// and the structural condition of that case holds.
ScalarIneqCase scalar_gap(const ScalarProfile& phi, double r, double a, double b, double c, double d);

/// The two steps of the pointwise chain at one point:
///   E1 ≥ E2 by the scalar inequality (a = w2, b = w1, c = |∇w1|, d = |∇w2|),
///   E2 ≥ E3 by Cauchy–Schwarz on ∇w1·∇w2.
struct PointwiseGap {
  double lemma_step = 0.0;   ///< E1 − E2
  double cauchy_step = 0.0;  ///< E2 − E3
  double total = 0.0;        ///< E1 − E3, the integrand of the integral gap
};
PointwiseGap pointwise_gap(const OperatorFamily& fam, double r, std::size_t point, double w1, const Vec2& g1,
                           double w2, const Vec2& g2);

struct IntegralGap {
  double lhs = 0.0;  ///< ∫ a(x,∇w1)·∇(w1 − w2^r/w1^{r−1})
  double rhs = 0.0;  ///< ∫ a(x,∇w2)·∇(w1^r/w2^{r−1} − w2)
  double gap = 0.0;
};
/// `mask`, when given, restricts the quadrature to points with mask[i] != 0.
IntegralGap integral_gap(const OperatorFamily& fam, double r, const JetField& w1, const JetField& w2,
                         const Grid& grid, const std::vector<char>* mask = nullptr);

/// w2^r / w1^{r−1} with gradient r(w2/w1)^{r−1}∇w2 − (r−1)(w2/w1)^r∇w1.
JetField ratio_power_jet(const JetField& w1, const JetField& w2, double r);

/// w2/w1 with gradient (w1∇w2 − w2∇w1)/w1².
JetField quotient_jet(const JetField& w1, const JetField& w2);

struct TruncatedJet {
  JetField w;     ///< clamp(w, ε, 1/ε), gradient kept only on (ε, 1/ε)
  JetField root;  ///< w_ε^{1/α}, gradient (1/α)w^{1/α−1}∇w on (ε, 1/ε), zero elsewhere
};
TruncatedJet truncate_jet(const JetField& w, double eps, double alpha);

struct EqualityDiagnosis {
  double lambda_hat = 0.0;         ///< mean of w2/w1
  double const_hat = 0.0;          ///< mean of w1 − w2
  double ratio_deviation = 0.0;    ///< max |w2/w1 − λ̂|
  double const_deviation = 0.0;    ///< max |w1 − w2 − ĉ|
  double phi_scaling_residual = 0.0;  ///< max |Φ(λ̂|∇w1|) − λ̂^{r−1}Φ(|∇w1|)|
  bool gradients_vanish = false;
  bool strict_checked = false;     ///< the family claims a strictly increasing ratio
  bool strict_ok = true;           ///< λ̂ ≈ 1 or both fields constant
  double lhs = 0.0;
  double gap = 0.0;
  double tol = 0.0;
  bool near_equality = false;      ///< |gap| ≤ tol
};
/// Default tol is 1e-8·(1+|lhs|).
EqualityDiagnosis equality_diagnose(const OperatorFamily& fam, double r, const JetField& w1, const JetField& w2,
                                    const Grid& grid, std::optional<double> tol = std::nullopt);

struct CounterexampleReport {
  std::string name;
  std::size_t points = 0;
  double log_derivative_mismatch = 0.0;  ///< max relative |w1'/w1 − w2'/w2|
  bool log_derivatives_agree = false;    ///< mismatch ≤ 1e-12
  bool ratio_attains_one = false;
  bool ratio_attains_two = false;
  double ratio_min = 0.0, ratio_max = 0.0;
  double quotient_gradient_max = 0.0;    ///< max relative |∇(w2/w1)|
  bool quotient_gradient_zero = false;
  std::optional<double> boundary_left, boundary_right;  ///< values at ∓1 (second example only)
  bool passed = false;
};
/// `which` is "ex51" (|x| against the kinked partner) or "ex52" (both damped by a bump).
/// The grid must be 1D and place no quadrature point at 0 or ±1.
CounterexampleReport fixture_counterexample(const std::string& which, const Grid& grid);

struct SubunitGaps {
  double gap1 = 0.0;  ///< |a−b|^r − |a^r − b^r|
  double gap2 = 0.0;  ///< a^r + b^r − (a+b)^r
};
/// Powers of zero are zero, so at r = 0 the gaps vanish exactly when a = b (first) or min(a,b) = 0.
SubunitGaps subunit_power_gaps(double a, double b, double r);

}  // namespace dslab
