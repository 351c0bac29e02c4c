#include "dslab/config.hpp"

#include <fstream>

#include "dslab/image.hpp"

namespace dslab {

using nlohmann::json;

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

const json& section(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_object()) throw ConfigError(std::string("missing object '") + key + "'");
  return j.at(key);
}

Vec2 pair_of(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), j.get<double>()};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(std::string("'") + what + "' must be a number or a pair");
}

}  // namespace

AnalyticFieldSpec field_spec_from_json(const json& j) {
  if (j.is_number()) return {"constant", {{"value", j.get<double>()}}};
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string()) {
    throw ConfigError("field must be a number or {\"name\": ..., \"params\": {...}}");
  }
  AnalyticFieldSpec spec{j.at("name").get<std::string>(), {}};
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw ConfigError("field params must be an object");
    for (const auto& [k, v] : j.at("params").items()) {
      if (!v.is_number()) throw ConfigError("field parameter '" + k + "' must be a number");
      spec.params[k] = v.get<double>();
    }
  }
  return spec;
}

std::vector<double> field_values_from_json(const json& j, const Grid& grid) {
  if (j.is_array()) {
    if (j.size() != grid.size()) throw ConfigError("explicit field has the wrong number of values");
    std::vector<double> v;
    for (const auto& e : j) {
      if (!e.is_number()) throw ConfigError("explicit field values must be numbers");
      v.push_back(e.get<double>());
    }
    return v;
  }
  try {
    return sample_nodal(field_spec_from_json(j), grid).values;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

ExponentField exponent_from_json(const json& j, const Grid& grid) {
  try {
    return ExponentField::from_values(field_values_from_json(j, grid));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("exponent: ") + e.what());
  }
}

Grid grid_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("grid must be an object");
  const int dim = static_cast<int>(number(j, "dim"));
  if (dim != 1 && dim != 2) throw ConfigError("grid.dim must be 1 or 2");
  if (!j.contains("n") || !j.contains("extent")) throw ConfigError("grid needs n and extent");
  const Vec2 n = pair_of(j.at("n"), "grid.n");
  const Vec2 extent = pair_of(j.at("extent"), "grid.extent");
  const Vec2 origin = j.contains("origin") ? pair_of(j.at("origin"), "grid.origin") : Vec2{0.0, 0.0};
  try {
    if (dim == 1) return build_grid(1, {static_cast<int>(n[0]), 1}, {extent[0], 1.0}, {origin[0], 0.0});
    return build_grid(2, {static_cast<int>(n[0]), static_cast<int>(n[1])}, extent, origin);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

OperatorFamily operator_from_json(const json& j, const Grid& grid, double alpha) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("operator needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "single" || kind == "multiphase") {
      std::vector<Phase> phases;
      auto add_phase = [&](const json& pj) {
        if (!pj.contains("p")) throw ConfigError("phase needs an exponent p");
        phases.push_back({exponent_from_json(pj.at("p"), grid),
                          pj.contains("weight") ? field_values_from_json(pj.at("weight"), grid)
                                                : std::vector<double>(grid.size(), 1.0)});
      };
      if (kind == "single") {
        add_phase(j);
      } else {
        if (!j.contains("phases") || !j.at("phases").is_array() || j.at("phases").empty()) {
          throw ConfigError("multiphase operator needs a non-empty phases array");
        }
        for (const auto& pj : j.at("phases")) add_phase(pj);
      }
      std::optional<double> omega;
      if (j.contains("omega")) omega = number(j, "omega");
      return make_multiphase(phases, alpha, omega);
    }
    if (kind == "image") {
      if (!j.contains("p")) throw ConfigError("image operator needs p");
      return make_image_operator(exponent_from_json(j.at("p"), grid), number(j, "eps"), number(j, "delta"), alpha);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("operator: ") + e.what());
  }
  throw ConfigError("unknown operator kind '" + kind + "'");
}

SourceFamily source_from_json(const json& j, const Grid& grid, double alpha) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("source needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "power") {
      auto field = [&](const char* key, double fallback) {
        return j.contains(key) ? field_values_from_json(j.at(key), grid) : std::vector<double>(grid.size(), fallback);
      };
      if (!j.contains("r1") || !j.contains("q1")) throw ConfigError("power source needs r1 and q1");
      return make_power_source(field("r1", 0.0), field("r2", 0.0), field("q1", 1.0), field("q2", 1.0), alpha);
    }
    if (kind == "fidelity") {
      if (!j.contains("g")) throw ConfigError("fidelity source needs g");
      std::vector<double> g;
      const json& gj = j.at("g");
      if (gj.is_object() && gj.contains("image")) {
        const Image img = read_pgm(gj.at("image").get<std::string>());
        if (grid.dim != 2 || img.width != grid.n[0] || img.height != grid.n[1]) {
          throw ConfigError("fidelity image does not match the grid");
        }
        g = img.pixels;
      } else {
        g = field_values_from_json(gj, grid);
      }
      return make_fidelity_source(g, number(j, "mu"), alpha);
    }
    if (kind == "zero") return make_zero_source(grid.size(), alpha);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("source: ") + e.what());
  }
  throw ConfigError("unknown source kind '" + kind + "'");
}

SolverSettings solver_from_json(const json& j) {
  SolverSettings s;
  if (j.is_null()) return s;
  if (!j.is_object()) throw ConfigError("solver must be an object");
  s.tol = number_or(j, "tol", s.tol);
  const double iters = number_or(j, "max_iters", static_cast<double>(s.max_iters));
  s.step = number_or(j, "step", s.step);
  if (!(s.tol > 0.0) || !(iters >= 1.0) || !(s.step > 0.0)) throw ConfigError("solver settings out of range");
  s.max_iters = static_cast<std::size_t>(iters);
  return s;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

Problem load_problem(const json& config, std::optional<std::uint64_t> seed_override,
                     std::optional<std::string> out_override) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  Problem p;
  p.resolved = config;
  json& r = p.resolved;
  try {
    if (seed_override) r["seeds"]["base"] = *seed_override;
    if (!r.contains("seeds")) r["seeds"] = json::object();
    if (!r["seeds"].contains("base")) r["seeds"]["base"] = 0;
    p.seed = r["seeds"]["base"].get<std::uint64_t>();
    if (out_override) r["output"]["dir"] = *out_override;
    if (!r.contains("output")) r["output"] = json::object();
    if (!r["output"].contains("dir")) r["output"]["dir"] = ".";
    p.out_dir = r["output"]["dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("seeds/output: ") + e.what());
  }
  p.solver = solver_from_json(r.contains("solver") ? r["solver"] : json());
  r["solver"] = {{"tol", p.solver.tol}, {"max_iters", p.solver.max_iters}, {"step", p.solver.step}};
  if (r.contains("alpha")) p.alpha = number(r, "alpha");
  r["alpha"] = p.alpha;
  if (r.contains("grid")) {
    p.grid = grid_from_json(r["grid"]);
    if (!r["grid"].contains("origin")) r["grid"]["origin"] = {p.grid.origin[0], p.grid.origin[1]};
    if (r.contains("operator")) p.fam = operator_from_json(section(r, "operator"), p.grid, p.alpha);
    if (r.contains("source")) p.src = source_from_json(section(r, "source"), p.grid, p.alpha);
  }
  return p;
}

}  // namespace dslab
