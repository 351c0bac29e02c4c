#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace dslab {

/// f̄ and F̄ at one (point, s).
struct ExtendedValue {
  double fbar = 0.0;
  double Fbar = 0.0;
};

enum class SourceKind { power, fidelity, zero, custom };

/// Source f(x,s) on [0,1] with its γ-Lipschitz extension to ℝ:
///   f̄ = f(x,0) + γs            for s < 0
///   f̄ = f(x,1) − γ(s−1)        for s > 1
/// and F̄ its primitive with F̄(x,0) = 0. Immutable after construction.
class SourceFamily {
 public:
  using Fn = std::function<double(std::size_t, double)>;

  /// `F` may be empty, in which case the primitive is integrated numerically.
  static SourceFamily custom(std::string name, std::size_t points, Fn f, Fn F, double gamma, double lambda0,
                             double alpha, bool strict13);

  double f(std::size_t point, double s) const { return f_(point, s); }
  double F(std::size_t point, double s) const;
  ExtendedValue extend(std::size_t point, double s) const;
  double fbar(std::size_t point, double s) const;
  double Fbar(std::size_t point, double s) const;
  /// F̄(x,s1) − F̄(x,s0) without cancellation for nearby arguments.
  double Fbar_difference(std::size_t point, double s0, double s1) const;

  SourceKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::size_t points() const { return points_; }
  double gamma() const { return gamma_; }
  double lambda0() const { return lambda0_; }
  double alpha() const { return alpha_; }
  bool strict13() const { return strict13_; }
  const std::map<std::string, double>& params() const { return params_; }

  SourceFamily(SourceKind kind, std::string name, std::size_t points, Fn f, Fn F, double gamma, double lambda0,
               double alpha, bool strict13, std::map<std::string, double> params);

 private:
  SourceKind kind_;
  std::string name_;
  std::size_t points_;
  Fn f_, F_;
  double gamma_, lambda0_, alpha_;
  bool strict13_;
  std::map<std::string, double> params_;
};

/// f(x,s) = −r1(x)s^{q1(x)} − r2(x)s^{q2(x)}, γ = ‖r1‖‖q1‖ + ‖r2‖‖q2‖, λ₀ = γ + 1.
SourceFamily make_power_source(const std::vector<double>& r1, const std::vector<double>& r2,
                               const std::vector<double>& q1, const std::vector<double>& q2, double alpha);

/// f(x,s) = μ(g(x) − s), γ = μ, λ₀ = μ + 1.
SourceFamily make_fidelity_source(const std::vector<double>& g, double mu, double alpha);

/// f ≡ 0 (γ = 0, λ₀ = 1).
SourceFamily make_zero_source(std::size_t points, double alpha);

/// Sampled structural properties of the extension.
struct SourcePropsReport {
  bool lipschitz = false;             ///< |f̄(s1)−f̄(s2)| ≤ γ|s1−s2|
  bool shifted_increasing = false;    ///< s ↦ f̄ + λ̄s strictly increasing
  bool root_convex = false;           ///< s ↦ −F̄(s^{1/α}) convex on [0,∞)
  bool root_ratio_decreasing = false; ///< s ↦ f̄(s^{1/α})/s^{(α−1)/α} nonincreasing
  bool strict_convex = false;         ///< strict forms of the two above
  bool strict_decreasing = false;
  double worst_lipschitz_excess = 0.0;
  double worst_convexity_defect = 0.0;
  double worst_ratio_increase = 0.0;
  std::string note;
};

/// 64-point sorted ladders per quadrature point. Throws if λ̄ ≤ γ.
SourcePropsReport check_source_props(const SourceFamily& src, double lambda_bar, std::size_t samples,
                                     std::uint64_t seed);

}  // namespace dslab
