#include "dslab/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sampling.hpp"

namespace dslab {

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::non_strict: return "non-strict";
    case Status::fail: return "fail";
    case Status::not_checked: return "not-checked";
  }
  return "unknown";
}

const HypothesisEntry& HypothesisReport::at(const std::string& id) const {
  for (const auto& e : entries) {
    if (e.id == id) return e;
  }
  throw std::out_of_range("no hypothesis entry '" + id + "'");
}

bool HypothesisReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const HypothesisEntry& e) { return e.status == Status::pass || e.status == Status::not_checked; });
}

void HypothesisReport::merge(const HypothesisReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

namespace {

// Tracks the worst sampled violation and the first witness of a failure.
struct Tracker {
  HypothesisEntry entry;
  explicit Tracker(std::string id, std::string note = {}) {
    entry.id = std::move(id);
    entry.status = Status::pass;
    entry.note = std::move(note);
  }
  void fail(double violation, const Witness& w) {
    if (entry.status != Status::fail || violation > entry.worst_violation) {
      entry.witness = w;
    }
    entry.status = Status::fail;
    entry.worst_violation = std::max(entry.worst_violation, violation);
  }
  void non_strict(const Witness& w) {
    if (entry.status == Status::pass) {
      entry.status = Status::non_strict;
      entry.witness = w;
    }
  }
};

// Monotonicity of a profile along a ladder, strict or not.
void scan_ladder(Tracker& tr, std::size_t point, const std::vector<double>& s, const std::vector<double>& v,
                 int direction, bool strict, bool nonstrict_is_failure) {
  const auto scan = sampling::scan_monotone(v, direction);
  const Witness w{point, s[scan.at], s.size() > scan.at + 1 ? std::optional<double>(s[scan.at + 1]) : std::nullopt};
  if (!scan.nonstrict_ok) {
    tr.fail(scan.worst, w);
  } else if (strict && !scan.strict_ok) {
    if (nonstrict_is_failure) tr.fail(scan.worst, w);
    else tr.non_strict(w);
  }
}

}  // namespace

HypothesisReport check_limit_monotone(const OperatorFamily& fam, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Tracker h4("H4", "Φ(x,2^-k), k = 1..40; final value must be < 1e-8");
  Tracker h5("H5", "Φ(x,·) strictly increasing on sampled ladders");
  const double s_last = std::ldexp(1.0, -40);
  for (std::size_t i = 0; i < fam.points(); ++i) {
    const double last = fam.phi(i, s_last);
    if (!(last < 1e-8)) h4.fail(last, {i, s_last, std::nullopt});

    const auto s = sampling::log_ladder(rng, 1e-6, 1e3, samples);
    std::vector<double> v;
    for (double x : s) v.push_back(fam.phi(i, x));
    scan_ladder(h5, i, s, v, +1, true, false);
  }
  HypothesisReport rep;
  rep.entries = {h4.entry, h5.entry};
  return rep;
}

HypothesisReport check_growth(const OperatorFamily& fam, const std::vector<double>& a_bound, double b_bound,
                              std::size_t samples, std::uint64_t seed) {
  if (a_bound.size() != fam.points()) throw std::invalid_argument("growth bound a(x) has the wrong length");
  std::mt19937_64 rng(seed);
  Tracker h6("H6", "Φ(x,s) ≤ a(x) + b s^{p(x)-1} for sampled s ≤ 1e3");
  h6.entry.note += "; b = " + std::to_string(b_bound);
  for (std::size_t i = 0; i < fam.points(); ++i) {
    const double p = fam.exponent()[i];
    for (double s : sampling::log_ladder(rng, 1e-6, 1e3, samples)) {
      const double phi = fam.phi(i, s);
      const double bound = a_bound[i] + b_bound * std::pow(s, p - 1.0);
      const double excess = (phi - bound) / std::max({std::abs(phi), std::abs(bound), 1e-300});
      if (phi > bound && excess > 1e-12) h6.fail(excess, {i, s, std::nullopt});
    }
  }
  HypothesisReport rep;
  rep.entries = {h6.entry};
  return rep;
}

HypothesisReport check_monotone_ratio(const OperatorFamily& fam, double r, bool strict, std::size_t samples,
                                      std::uint64_t seed) {
  if (r < 1.0) throw std::invalid_argument("monotonicity order must be >= 1");
  std::mt19937_64 rng(seed);
  Tracker tr(strict ? "H7'" : "H7", "Φ(x,s)/s^{r-1} with r = " + std::to_string(r));
  for (std::size_t i = 0; i < fam.points(); ++i) {
    const auto s = sampling::log_ladder(rng, 1e-6, 1e3, samples);
    std::vector<double> v;
    for (double x : s) v.push_back(fam.phi(i, x) / std::pow(x, r - 1.0));
    scan_ladder(tr, i, s, v, +1, strict, false);
  }
  HypothesisReport rep;
  rep.entries = {tr.entry};
  return rep;
}

HypothesisReport check_coercivity(const OperatorFamily& fam, CoercivityMode mode, const CoercivityConstantsIn& k,
                                  const std::vector<JetField>& trial_fields, const Grid& grid) {
  if (k.d0 < 0.0 || k.d0_tilde < 0.0 || k.c1 < 0.0 || k.c2 < 0.0) {
    throw std::invalid_argument("coercivity constants must be nonnegative");
  }
  const bool px = mode == CoercivityMode::pX;
  Tracker tr(px ? "H8" : "H8-alpha", px ? "A(v) >= d0*int|grad v|^p(x) - d0~" : "A(v) >= c1*int|grad v|^alpha - c2");
  tr.entry.note += "; witness point = trial index, s = energy, t = lower bound";
  const double alpha = fam.r_order();
  for (std::size_t m = 0; m < trial_fields.size(); ++m) {
    const auto& v = trial_fields[m];
    v.validate(grid);
    std::vector<double> a(grid.size()), g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = norm(v.grads[i]);
      a[i] = fam.density(i, t);
      g[i] = std::pow(t, px ? fam.exponent()[i] : alpha);
    }
    const double energy = integrate(a, grid);
    const double bound = px ? k.d0 * integrate(g, grid) - k.d0_tilde : k.c1 * integrate(g, grid) - k.c2;
    const double deficit = bound - energy;
    if (deficit > 1e-12 * std::max({1.0, std::abs(energy), std::abs(bound)})) {
      tr.fail(deficit, {m, energy, bound});
    }
  }
  HypothesisReport rep;
  rep.entries = {tr.entry};
  return rep;
}

HypothesisReport check_source_hypotheses(const SourceFamily& src, std::size_t samples, std::uint64_t seed,
                                         std::optional<double> p_minus) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = src.alpha();

  HypothesisEntry h2{"H2", Status::not_checked, 0.0, std::nullopt,
                     "log-Hölder continuity of p(x) is not decidable from samples"};
  Tracker h11("H11", "f(x,0) >= 0 and f(x,1) <= 0");
  Tracker h12("H12", "s -> f(x,s) + lambda0*s strictly increasing and f gamma-Lipschitz on [0,1]");
  Tracker h13("H13", "s -> f(x,s^{1/a})/s^{(a-1)/a} decreasing on (0,1]");
  Tracker h13s("H13'", "strictly decreasing version; requires a < 2");

  const double cap = p_minus ? std::min(2.0, *p_minus) : 2.0;
  if (!(a > 1.0) || a > cap) {
    h13.fail(a - cap, {0, a, std::nullopt});
    h13.entry.note += "; alpha exceeds min{p-, 2}";
  }
  if (!(a < 2.0) || a > cap) {
    h13s.fail(std::max(0.0, a - std::min(cap, 2.0)), {0, a, std::nullopt});
    h13s.entry.note += "; strict version needs alpha < 2 and alpha <= p-";
  }

  for (std::size_t i = 0; i < src.points(); ++i) {
    const double f0 = src.f(i, 0.0), f1 = src.f(i, 1.0);
    if (f0 < 0.0) h11.fail(-f0, {i, 0.0, std::nullopt});
    if (f1 > 0.0) h11.fail(f1, {i, 1.0, std::nullopt});

    const auto ladder = sampling::uniform_ladder(rng, 0.0, 1.0, samples);
    std::vector<double> shifted;
    for (double s : ladder) shifted.push_back(src.f(i, s) + src.lambda0() * s);
    scan_ladder(h12, i, ladder, shifted, +1, true, true);
    for (std::size_t k = 0; k < samples; ++k) {
      const double s = unit(rng), t = unit(rng);
      const double fs = src.f(i, s), ft = src.f(i, t);
      const double excess = std::abs(fs - ft) - src.gamma() * std::abs(s - t);
      if (excess > 1e-12 * (1.0 + std::abs(fs) + std::abs(ft))) h12.fail(excess, {i, s, t});
    }

    const auto s = sampling::log_ladder(rng, 1e-6, 1.0, samples);
    std::vector<double> ratio;
    for (double x : s) ratio.push_back(src.f(i, std::pow(x, 1.0 / a)) / std::pow(x, (a - 1.0) / a));
    scan_ladder(h13, i, s, ratio, -1, false, true);
    scan_ladder(h13s, i, s, ratio, -1, true, true);
  }
  HypothesisReport rep;
  rep.entries = {h2, h11.entry, h12.entry, h13.entry, h13s.entry};
  return rep;
}

}  // namespace dslab
