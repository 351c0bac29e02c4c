#include "dslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dslab/operators.hpp"

namespace dslab {

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

}  // namespace

ScalarSweep run_scalar_sweep(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ScalarSweep out;
  out.trials = trials;
  out.min_gap = std::numeric_limits<double>::infinity();
  out.min_scaled_gap = std::numeric_limits<double>::infinity();
  out.min_scaled_gap_moving = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trials; ++k) {
    const double r = 1.0 + 3.0 * unit(rng);
    const double a = log_uniform(rng, 1e-3, 1e3);
    const double b = log_uniform(rng, 1e-3, 1e3);
    // A few exact zeros and coincidences keep the boundary of the domain covered.
    const double u = unit(rng);
    double c = log_uniform(rng, 1e-4, 1e4);
    double d = u < 0.05 ? c : log_uniform(rng, 1e-4, 1e4);
    if (u > 0.97) c = 0.0;
    if (u > 0.985) d = 0.0;

    ScalarProfile phi;
    std::string label;
    if (k % 2 == 0) {
      const double q = r - 1.0 + 3.0 * unit(rng);
      phi = [q](double s) { return s == 0.0 ? 0.0 : std::pow(s, q); };
      label = "power q=" + std::to_string(q);
    } else {
      const double alpha = std::max(r, 1.0 + 1e-9) + unit(rng);
      const double p = alpha + 1e-3 + 2.0 * unit(rng);
      const double eps = log_uniform(rng, 1e-2, 1e2);
      const double delta = 0.25 + 2.75 * unit(rng);
      phi = [=](double s) { return image_profile(p, eps, delta, alpha, s); };
      label = "image p=" + std::to_string(p) + " eps=" + std::to_string(eps) + " delta=" + std::to_string(delta) +
              " alpha=" + std::to_string(alpha);
    }
    const ScalarIneqCase cs = scalar_gap(phi, r, a, b, c, d);
    const double scaled = cs.gap / std::max(1.0, std::abs(cs.lhs));
    out.min_gap = std::min(out.min_gap, cs.gap);
    if (c + d > 0.0) out.min_scaled_gap_moving = std::min(out.min_scaled_gap_moving, scaled);
    if (scaled < out.min_scaled_gap) {
      out.min_scaled_gap = scaled;
      out.worst = cs;
      out.worst_profile = label;
    }
  }
  if (trials == 0) out.min_gap = out.min_scaled_gap = out.min_scaled_gap_moving = 0.0;
  out.passed = out.min_scaled_gap >= -1e-12;
  return out;
}

SubunitSweep run_subunit_sweep(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SubunitSweep out;
  out.trials = trials;
  out.min_gap1 = out.min_gap2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trials; ++k) {
    const double a = unit(rng), b = unit(rng), r = unit(rng);
    const SubunitGaps g = subunit_power_gaps(a, b, r);
    out.min_gap1 = std::min(out.min_gap1, g.gap1);
    out.min_gap2 = std::min(out.min_gap2, g.gap2);
  }
  if (trials == 0) out.min_gap1 = out.min_gap2 = 0.0;
  out.passed = out.min_gap1 >= -1e-12 && out.min_gap2 >= -1e-12;
  return out;
}

}  // namespace dslab
