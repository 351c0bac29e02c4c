#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dslab/grid.hpp"
#include "dslab/operators.hpp"
#include "dslab/sources.hpp"

namespace dslab {

enum class Status { pass, non_strict, fail, not_checked };
const char* to_string(Status s);

/// Where a sampled check broke: point index and the s (and t) that exposed it.
struct Witness {
  std::size_t point = 0;
  double s = 0.0;
  std::optional<double> t;
};

struct HypothesisEntry {
  std::string id;  ///< e.g. "H4", "H7'", "H13"
  Status status = Status::not_checked;
  double worst_violation = 0.0;
  std::optional<Witness> witness;  ///< always present on fail
  std::string note;
};

/// Sampled verdicts. "For a.a. x" is realized as "at every sampled point".
struct HypothesisReport {
  std::vector<HypothesisEntry> entries;
  std::string sampling = "checked at every quadrature point; s-ladders log-uniform on [1e-6, 1e3]";

  const HypothesisEntry& at(const std::string& id) const;
  bool passed(const std::string& id) const { return at(id).status == Status::pass; }
  bool all_pass() const;
  void merge(const HypothesisReport& other);
};

/// (H4) Φ(x,2^{−k}) → 0 for k = 1..40 (last value < 1e-8) and (H5) Φ strictly increasing.
HypothesisReport check_limit_monotone(const OperatorFamily& fam, std::size_t samples, std::uint64_t seed);

/// (H6) Φ(x,s) ≤ a(x) + b s^{p(x)−1} for sampled s ≤ 1e3.
HypothesisReport check_growth(const OperatorFamily& fam, const std::vector<double>& a_bound, double b_bound,
                              std::size_t samples, std::uint64_t seed);

/// (H7) / (H7′): s ↦ Φ(x,s)/s^{r−1} increasing / strictly increasing.
HypothesisReport check_monotone_ratio(const OperatorFamily& fam, double r, bool strict, std::size_t samples,
                                      std::uint64_t seed);

enum class CoercivityMode { pX, alpha };

struct CoercivityConstantsIn {
  double d0 = 0.0, d0_tilde = 0.0;  ///< pX mode
  double c1 = 0.0, c2 = 0.0;        ///< alpha mode
};

/// (H8): 𝒜(v) ≥ δ₀∫|∇v|^{p(x)} − δ̃₀, or the α variant 𝒜(v) ≥ c₁∫|∇v|^α − c₂, on each trial field.
/// α is taken from the family's monotonicity order.
HypothesisReport check_coercivity(const OperatorFamily& fam, CoercivityMode mode, const CoercivityConstantsIn& k,
                                  const std::vector<JetField>& trial_fields, const Grid& grid);

/// (H2) recorded as not-checked, (H11), (H12) monotone and Lipschitz, (H13), (H13′).
/// `p_minus`, when given, is used for the α ≤ p⁻ requirement.
HypothesisReport check_source_hypotheses(const SourceFamily& src, std::size_t samples, std::uint64_t seed,
                                         std::optional<double> p_minus = std::nullopt);

}  // namespace dslab
