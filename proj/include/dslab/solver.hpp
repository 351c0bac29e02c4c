#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dslab/grid.hpp"
#include "dslab/operators.hpp"
#include "dslab/sources.hpp"

namespace dslab {

/// Discrete 𝒥(U) = Σ w_c A(x_c, |∇_h U_c|) − Σ w_c F̄(x_c, U_c), with ∇_h the
/// reflected-ghost centered stencil.
double discrete_energy(const OperatorFamily& fam, const SourceFamily& src, const GridFunction& U, const Grid& grid);

/// 𝒥(U1) − 𝒥(U0) accumulated cell by cell from primitive differences, so the
/// result stays accurate when U1 is a small perturbation of U0.
double energy_difference(const OperatorFamily& fam, const SourceFamily& src, const GridFunction& U0,
                         const GridFunction& U1, const Grid& grid);

/// R_k = ∂𝒥/∂U_k: the exact adjoint of the stencil applied to a(x,∇_h U),
/// minus w_k f̄(x_k, U_k). No boundary flux term (homogeneous Neumann).
GridFunction discrete_residual(const OperatorFamily& fam, const SourceFamily& src, const GridFunction& U,
                               const Grid& grid);

struct SolveConfig {
  const OperatorFamily* fam = nullptr;
  const SourceFamily* src = nullptr;
  const Grid* grid = nullptr;
  GridFunction init;
  std::size_t max_iters = 50000;
  double residual_tol = 1e-8;  ///< on the sup norm of the residual
  double initial_step = 1.0;
  double armijo = 1e-4;
  double backtrack = 0.5;
};

enum class SolveStatus { converged, max_iters, line_search_failed };
const char* to_string(SolveStatus s);

struct SolveResult {
  GridFunction U;
  double energy = 0.0;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  double ess_inf = 0.0;   ///< minimum nodal value
  double ess_sup = 0.0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iters;
  bool admissible = false;        ///< 0 ≤ U ≤ 1 at every node (reported, never enforced)
  bool strongly_positive = false; ///< ess_inf > 1e-6
  std::vector<double> energy_trace;  ///< energy after each accepted step, starting with the initial state
};

/// Gradient descent with Armijo backtracking. Each trial step starts from
/// min(initial_step, 2·previous accepted step).
SolveResult minimize(const SolveConfig& cfg);

struct WeakSolutionReport {
  std::vector<double> test_values;  ///< |Σ a·∇_hφ w − Σ f̄(U)φ w| / Σ|φ_k|, per test function
  double max_value = 0.0;
  double threshold = 0.0;
  bool admissible = false;
  bool passed = false;
};

/// Random smooth catalog test functions (the first one constant). Passes when
/// every normalized test value is below 10·residual_tol and U is admissible.
WeakSolutionReport verify_weak_solution(const OperatorFamily& fam, const SourceFamily& src, const GridFunction& U,
                                        const Grid& grid, std::size_t n_tests, std::uint64_t seed,
                                        double residual_tol = 1e-8);

struct UniquenessReport {
  std::vector<SolveResult> solutions;
  std::vector<double> initial_values;  ///< constant inits, when used
  double max_pairwise_distance = 0.0;
  std::size_t worst_i = 0, worst_j = 0;
  bool uniqueness_asserted = false;  ///< strict hypotheses and strongly positive limits
  bool passed = false;
  // Scaling diagnostics for the worst pair, emitted when uniqueness is not asserted.
  std::optional<double> lambda_hat, phi_scaling_residual, f_scaling_residual;
};

/// Solves from every initial state. Throws if a precondition fails (the family's
/// order is below α, the source's ratio check fails, an init leaves (0,1]) or
/// any solve does not converge.
UniquenessReport uniqueness_experiment(const SolveConfig& cfg, const std::vector<GridFunction>& inits);

}  // namespace dslab
