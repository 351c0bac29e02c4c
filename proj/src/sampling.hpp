#pragma once
// Shared sampling helpers for the falsification-style validators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace dslab::sampling {

/// Sorted log-uniform ladder on [lo, hi].
inline std::vector<double> log_ladder(std::mt19937_64& rng, double lo, double hi, std::size_t n) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<double> s(n);
  for (auto& v : s) v = std::exp(u(rng));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline std::vector<double> uniform_ladder(std::mt19937_64& rng, double lo, double hi, std::size_t n) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> s(n);
  for (auto& v : s) v = u(rng);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

/// Result of scanning consecutive differences of a sequence.
struct MonotoneScan {
  bool nonstrict_ok = true;  ///< every step ≥ −1e-10·scale
  bool strict_ok = true;     ///< every step > 1e-12·scale
  double worst = 0.0;        ///< most adverse step, as a positive violation size (0 if none)
  std::size_t at = 0;        ///< index k of the worst step (v[k] → v[k+1])
};

/// direction = +1 checks increasing, −1 decreasing. Margins are relative to the
/// larger magnitude of the two compared values.
inline MonotoneScan scan_monotone(const std::vector<double>& v, int direction) {
  MonotoneScan out;
  double worst_margin = INFINITY;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const double d = direction * (v[k + 1] - v[k]);
    const double scale = std::max(std::abs(v[k]), std::abs(v[k + 1]));
    if (!(d >= -1e-10 * scale)) out.nonstrict_ok = false;
    if (!(d > 1e-12 * scale)) out.strict_ok = false;
    const double margin = scale > 0.0 ? d / scale : (d == 0.0 ? 0.0 : d);
    if (margin < worst_margin) {
      worst_margin = margin;
      out.at = k;
    }
  }
  out.worst = std::isfinite(worst_margin) ? std::max(0.0, -worst_margin) : 0.0;
  return out;
}

}  // namespace dslab::sampling
