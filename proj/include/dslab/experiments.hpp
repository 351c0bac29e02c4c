#pragma once

#include <cstdint>
#include <string>

#include "dslab/diazsaa.hpp"

namespace dslab {

/// Seeded random instances of the scalar inequality over power profiles s^q
/// (q ≥ r−1) and image-operator profiles (r ≤ α), with r ∈ [1,4].
struct ScalarSweep {
  std::size_t trials = 0;
  double min_gap = 0.0;         ///< min over trials of gap
  double min_scaled_gap = 0.0;  ///< min over trials of gap / max(1, lhs)
  double min_scaled_gap_moving = 0.0;  ///< same, restricted to c + d > 0
  ScalarIneqCase worst;
  std::string worst_profile;
  bool passed = false;          ///< min_scaled_gap ≥ −1e-12
};
ScalarSweep run_scalar_sweep(std::size_t trials, std::uint64_t seed);

/// Seeded (a,b,r) ∈ [0,1]² × [0,1] triples for the sub-unit power inequalities.
struct SubunitSweep {
  std::size_t trials = 0;
  double min_gap1 = 0.0, min_gap2 = 0.0;
  bool passed = false;  ///< both minima ≥ −1e-12
};
SubunitSweep run_subunit_sweep(std::size_t trials, std::uint64_t seed);

}  // namespace dslab
