#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dslab/grid.hpp"
#include "dslab/operators.hpp"
#include "dslab/sources.hpp"

namespace dslab {

/// Any problem with the run configuration; maps to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Field-valued entries accept a number (constant) or {"name": ..., "params": {...}}.
AnalyticFieldSpec field_spec_from_json(const nlohmann::json& j);
std::vector<double> field_values_from_json(const nlohmann::json& j, const Grid& grid);
ExponentField exponent_from_json(const nlohmann::json& j, const Grid& grid);

/// {"dim": 1|2, "n": int | [nx,ny], "extent": number | [Lx,Ly], "origin"?: number | [x0,y0]}
Grid grid_from_json(const nlohmann::json& j);

/// kind "single" {p, weight?}, "multiphase" {phases: [{p, weight?}], omega?},
/// "image" {p, eps, delta}.
OperatorFamily operator_from_json(const nlohmann::json& j, const Grid& grid, double alpha);

/// kind "power" {r1, q1, r2?, q2?}, "fidelity" {mu, g}, "zero" {}.
/// A fidelity g of the form {"image": path} is read from a PGM matching the grid.
SourceFamily source_from_json(const nlohmann::json& j, const Grid& grid, double alpha);

struct SolverSettings {
  double tol = 1e-8;
  std::size_t max_iters = 50000;
  double step = 1.0;
};
SolverSettings solver_from_json(const nlohmann::json& j);

/// The parsed config plus the objects built from it.
struct Problem {
  nlohmann::json resolved;  ///< input config with defaults filled in
  Grid grid;
  double alpha = 2.0;
  std::optional<OperatorFamily> fam;
  std::optional<SourceFamily> src;
  SolverSettings solver;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

/// Reads the JSON file (or takes `config` directly), applies the seed/output
/// overrides and builds grid, operator and source when present.
Problem load_problem(const nlohmann::json& config, std::optional<std::uint64_t> seed_override,
                     std::optional<std::string> out_override);
nlohmann::json read_config_file(const std::string& path);

}  // namespace dslab
