#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dslab/grid.hpp"

namespace dslab {

/// Variable exponent p(x) sampled at quadrature points.
struct ExponentField {
  std::vector<double> values;
  double p_minus = 0.0;
  double p_plus = 0.0;

  static ExponentField constant(double p, std::size_t points);
  static ExponentField from_values(std::vector<double> values);
  static ExponentField from_spec(const AnalyticFieldSpec& spec, const Grid& grid);

  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
  /// Records p⁻ ≥ 2N/(N+2); informational only.
  bool meets_embedding_bound(int dim) const { return p_minus >= 2.0 * dim / (dim + 2.0); }
};

enum class OperatorKind { multiphase, image, custom };

namespace detail {
struct ProfileModel;
}

/// Isotropic operator a(x,ξ) = Ψ(x,|ξ|)ξ described through its radial profile
/// Φ(x,s) = Ψ(x,s)s and the energy density A(x,t) = ∫₀ᵗ Φ(x,s) ds.
/// Immutable; copies share the underlying model.
class OperatorFamily {
 public:
  using Profile = std::function<double(std::size_t, double)>;

  /// Wraps a user profile. When `primitive` is empty, A is integrated numerically.
  static OperatorFamily custom(std::string name, ExponentField exponent, Profile phi,
                               Profile primitive, double r_order, bool strict, bool homogeneous);

  double phi(std::size_t point, double s) const;
  double density(std::size_t point, double t) const;
  /// A(x,t1) − A(x,t0) without cancellation when t0 ≈ t1.
  double density_difference(std::size_t point, double t0, double t1) const;
  /// a(x,ξ): Φ(x,|ξ|)ξ/|ξ|, and 0 at ξ = 0.
  Vec2 flux(std::size_t point, const Vec2& xi) const;

  OperatorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double r_order() const { return r_order_; }
  bool strict() const { return strict_; }
  bool homogeneous() const { return homogeneous_; }
  const ExponentField& exponent() const { return exponent_; }
  const std::map<std::string, double>& params() const { return params_; }
  std::size_t points() const { return exponent_.size(); }
  /// Points in s where Φ changes formula (the image operator's ε).
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 /// Low-level constructor used by the factories below.
  OperatorFamily(std::shared_ptr<const detail::ProfileModel> model, OperatorKind kind, std::string name,
                 ExponentField exponent, double r_order, bool strict, bool homogeneous,
                 std::map<std::string, double> params, std::vector<double> breakpoints);

 private:
  std::shared_ptr<const detail::ProfileModel> model_;
  OperatorKind kind_ = OperatorKind::custom;
  std::string name_;
  double r_order_ = 1.0;
  bool strict_ = false;
  bool homogeneous_ = false;
  ExponentField exponent_;
  std::map<std::string, double> params_;
  std::vector<double> breakpoints_;
};

struct Phase {
  ExponentField p;
  std::vector<double> weight;  ///< per-point w_k(x)
};

/// Σ_k w_k(x)|ξ|^{p_k(x)−2}ξ. `alpha` becomes the monotonicity order r and must
/// lie in (1, p₋]; the strict flag is claimed only for α < p₋. `omega` is the
/// required lower bound on every weight (defaults to the sampled minimum,
/// which must itself be positive).
OperatorFamily make_multiphase(const std::vector<Phase>& phases, double alpha,
                               std::optional<double> omega = std::nullopt);

/// The edge-preserving operator with Φ = s^{p−1}ln^δ(1+s) below ε and
/// ε^{p−α}s^{α−1}ln^δ(1+s) above. Requires p⁻ > α > 1.
OperatorFamily make_image_operator(const ExponentField& p, double eps, double delta, double alpha);
/// The image operator's radial profile at a single exponent value.
double image_profile(double p, double eps, double delta, double alpha, double s);

struct HomogeneityReport {
  bool A_homogeneous = false;
  bool phi_homogeneous = false;
  bool flags_agree = false;
  double max_violation_A = 0.0;
  double max_violation_phi = 0.0;
};

/// Random (x,t,s) probes of A(x,ts) = t^{p}A(x,s) and Φ(x,ts) = t^{p−1}Φ(x,s).
/// A side is homogeneous when its worst relative violation is ≤ 1e-8.
HomogeneityReport check_homogeneity(const OperatorFamily& fam, std::size_t samples, std::uint64_t seed);

/// Constants behind the growth bound Φ(x,s) ≤ b·s^{p(x)−1} of the image operator.
struct ImageGrowthBound {
  std::vector<double> eps_tilde;  ///< per point: beyond it the decaying ratio stays ≤ 1
  std::vector<double> C;          ///< per point: max(1, max of the ratio on [ε, ε̃])
  double b = 0.0;                 ///< max over points of max{C^δ, ln^δ(1+ε)}
};
ImageGrowthBound image_growth_bound(const OperatorFamily& fam);

/// 𝒜(U) ≥ c1∫|∇U|^α − c2 for the image operator, from ln(1+s) ≥ s/(1+s).
struct CoercivityConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};
CoercivityConstants fit_alpha_coercivity(const OperatorFamily& fam, const Grid& grid);

}  // namespace dslab
