#pragma once

#include <iosfwd>
#include <vector>

#include "dslab/grid.hpp"
#include "dslab/operators.hpp"
#include "dslab/sources.hpp"

namespace dslab {

/// Segment w_θ = θw1 + (1−θ)w2 between two positive fields.
/// M is the sampled max of w1/w2 and w2/w1; θ ranges over (−θ₀, 1+θ₀) with
/// θ₀ = 1/(2(M−1)), infinite when M = 1.
struct PathContext {
  JetField w1, w2;
  double alpha = 2.0;
  double M = 1.0;
  double theta0 = 0.0;

  double lower() const { return -theta0; }
  double upper() const { return 1.0 + theta0; }
  bool admissible(double theta) const { return theta > lower() && theta < upper(); }
};

/// Throws on nonpositive samples, α outside (1,2], or a sampled M above 1e6.
PathContext make_path(const JetField& w1, const JetField& w2, double alpha);

struct PathJets {
  JetField w_theta;
  JetField gamma_theta;  ///< (1/α)(w1−w2)/w_θ^{1−1/α}
};
/// Also asserts ½min(w1,w2) ≤ w_θ ≤ (3/2)max(w1,w2) and 2/(3M) ≤ w_i/w_θ ≤ 2M,
/// throwing std::logic_error if a sample breaks them.
PathJets path_jets(const PathContext& ctx, double theta);

/// J(w) = ∫A(x,∇w^{1/α}) − ∫F̄(x,w^{1/α}) with α = src.alpha().
double energy_J(const OperatorFamily& fam, const SourceFamily& src, const JetField& w, const Grid& grid);
double energy_J(const OperatorFamily& fam, const SourceFamily& src, const JetField& w, double alpha, const Grid& grid);

struct ConvexityReport {
  double min_beta_prime_increment = 0.0;  ///< min over consecutive thetas of β′ₖ₊₁ − β′ₖ
  double max_fd_mismatch = 0.0;           ///< max |β′ − FD(β)| / (1+|β′|)
  double min_cor_gap = 0.0;               ///< min over θ∈[0,1] of θJ(w1)+(1−θ)J(w2) − J(w_θ)
  bool convex_ok = false;                 ///< increments ≥ −1e-10
  bool fd_ok = false;                     ///< mismatch ≤ 1e-6
  bool gap_ok = false;                    ///< gaps ≥ −1e-10
  bool strict_expected = false;           ///< strict source and w1 ≢ w2
  bool strict_ok = true;                  ///< when expected: increments > 0 and interior gaps > 0
  bool passed() const { return convex_ok && fd_ok && gap_ok && strict_ok; }
};

struct BetaScan {
  std::vector<double> theta, beta, beta_prime, beta_prime_fd, cor_gap;  ///< cor_gap is NaN outside [0,1]
  ConvexityReport report;
};

/// 41 uniform points on [max(−θ₀+1e-3, −0.45), min(1+θ₀−1e-3, 1.45)].
std::vector<double> default_thetas(const PathContext& ctx, std::size_t count = 41);

/// β(θ) = J(w_θ) and β′(θ) from the closed-form derivative
///   (1/α)∫a(x,∇w_θ^{1/α})·∇((w1−w2)/w_θ^{(α−1)/α}) − (1/α)∫f̄(x,w_θ^{1/α})(w1−w2)/w_θ^{(α−1)/α},
/// checked against 5-point differences of β (one-sided at the scan ends).
/// Throws if the family's monotonicity order is below α or a θ is inadmissible.
BetaScan beta_scan(const PathContext& ctx, const OperatorFamily& fam, const SourceFamily& src, const Grid& grid,
                   const std::vector<double>& thetas);

/// CSV with header theta,beta,beta_prime,cor64_gap and 17 significant digits.
void write_beta_csv(const BetaScan& scan, std::ostream& out);

}  // namespace dslab
