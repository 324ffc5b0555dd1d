#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "incdyn/dynamics.hpp"
#include "incdyn/errors.hpp"
#include "incdyn/games.hpp"
#include "incdyn/geometry.hpp"
#include "incdyn/incentives.hpp"
#include "incdyn/io.hpp"

namespace incdyn {

/// Parameters for the certificate commands.
struct CheckParams {
  double radius = 0.1;
  std::size_t samples = 1000;
  std::optional<std::uint64_t> seed;
  double min_component = kDefaultMinComponent;
};

/// One fully parsed run configuration: everything a command needs, plus the
/// hash of the raw file bytes for reproducibility bookkeeping.
struct RunConfig {
  RunConfig(Game g, Incentive inc) : game(std::move(g)), incentive(std::move(inc)) {}

  Game game;
  Incentive incentive;
  std::vector<StateProfile> initial_states;
  SolverConfig solver;
  std::optional<StateProfile> target;
  CheckParams check;
  std::string output_prefix = "run";
  std::string config_hash;
};

namespace detail {

using json = nlohmann::json;

inline Matrix parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw ConfigError("config: " + name + " must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols)
      throw ConfigError("config: " + name + " rows have inconsistent lengths");
    for (const auto& v : row) {
      if (!v.is_number()) throw ConfigError("config: " + name + " entries must be numbers");
      data.push_back(v.get<double>());
    }
  }
  return Matrix(rows, cols, std::move(data));
}

inline Game parse_game(const json& j) {
  if (!j.is_object()) throw ConfigError("config: game section missing or not an object");
  const int pops = j.value("populations", 1);
  if (pops == 1) {
    if (!j.contains("matrix")) throw ConfigError("config: single-population game needs 'matrix'");
    Matrix a = parse_matrix(j.at("matrix"), "game.matrix");
    if (a.rows() != a.cols())
      throw ConfigError("config: single-population payoff matrix must be square");
    return Game::single_population(std::move(a));
  }
  if (pops == 2) {
    if (!j.contains("matrix_a") || !j.contains("matrix_b"))
      throw ConfigError("config: two-population game needs 'matrix_a' and 'matrix_b'");
    Matrix a = parse_matrix(j.at("matrix_a"), "game.matrix_a");
    Matrix b = parse_matrix(j.at("matrix_b"), "game.matrix_b");
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw ConfigError("config: matrix_a and matrix_b must have identical shape");
    return Game::two_population(std::move(a), std::move(b));
  }
  throw ConfigError("config: game.populations must be 1 or 2");
}

inline Incentive parse_incentive(const json& j) {
  if (!j.is_object()) throw ConfigError("config: incentive section missing or not an object");
  const std::string kind = j.value("kind", "");
  if (kind == "replicator") return Incentive::replicator();
  if (kind == "projection") return Incentive::projection();
  if (kind == "best-reply") {
    const std::string tb = j.value("tiebreak", "lowest-index");
    if (tb == "lowest-index") return Incentive::best_reply(Tiebreak::LowestIndex);
    if (tb == "uniform-mixture") return Incentive::best_reply(Tiebreak::UniformMixture);
    throw ConfigError("config: incentive.tiebreak must be lowest-index or uniform-mixture");
  }
  throw ConfigError("config: incentive.kind must be replicator, best-reply, or projection");
}

inline SolverConfig parse_solver(const json& j) {
  SolverConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) throw ConfigError("config: solver must be an object");
  const std::string method = j.value("method", "rk4-fixed");
  if (method == "rk4-fixed")
    cfg.method = Method::Rk4Fixed;
  else if (method == "euler-fixed")
    cfg.method = Method::EulerFixed;
  else
    throw ConfigError("config: solver.method must be rk4-fixed or euler-fixed");
  cfg.step = j.value("step", cfg.step);
  cfg.t_end = j.value("t_end", cfg.t_end);
  if (j.contains("record_every")) {
    const long long re = j.at("record_every").get<long long>();
    if (re < 1) throw ConfigError("config: solver.record_every must be >= 1");
    cfg.record_every = static_cast<std::size_t>(re);
  }
  const std::string policy = j.value("boundary_policy", "clamp");
  if (policy == "clamp")
    cfg.boundary_policy = BoundaryPolicy::Clamp;
  else if (policy == "reject")
    cfg.boundary_policy = BoundaryPolicy::Reject;
  else
    throw ConfigError("config: solver.boundary_policy must be clamp or reject");
  cfg.interior_eps = j.value("interior_eps", cfg.interior_eps);
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

/// A profile is either a plain weight vector (single population) or an
/// array of per-population weight vectors. Weights are normalized on load.
inline StateProfile parse_profile(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string("config: ") + name + " must be a nonempty array");
  try {
    if (j.front().is_number()) {
      std::vector<double> w = j.get<std::vector<double>>();
      return StateProfile({make_simplex_point(std::move(w))});
    }
    RawProfile raw;
    for (const auto& row : j) {
      if (!row.is_array()) throw ConfigError(std::string("config: ") + name + " has a non-array population");
      raw.push_back(row.get<std::vector<double>>());
    }
    return StateProfile::from_raw(raw);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + name + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + name + ": " + e.what());
  }
}

}  // namespace detail

/// Loads and fully validates a JSON run configuration. Every defect is
/// reported as ConfigError (the CLI maps those to exit code 2).
inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  detail::json j;
  try {
    j = detail::json::parse(bytes);
  } catch (const detail::json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  try {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    Game game = detail::parse_game(j.value("game", detail::json()));
    Incentive incentive = detail::parse_incentive(j.value("incentive", detail::json()));
    RunConfig cfg(std::move(game), std::move(incentive));
    cfg.config_hash = fnv1a_hex(bytes);

    if (j.contains("initial_states")) {
      const auto& arr = j.at("initial_states");
      if (!arr.is_array() || arr.empty())
        throw ConfigError("config: initial_states must be a nonempty array");
      for (const auto& entry : arr)
        cfg.initial_states.push_back(detail::parse_profile(entry, "initial_states[]"));
    }
    for (const auto& x : cfg.initial_states) {
      try {
        cfg.game.require_compatible(x);
      } catch (const Error& e) {
        throw ConfigError(std::string("config: initial state incompatible with game: ") + e.what());
      }
    }

    cfg.solver = detail::parse_solver(j.value("solver", detail::json()));

    if (j.contains("target")) {
      cfg.target = detail::parse_profile(j.at("target"), "target");
      try {
        cfg.game.require_compatible(*cfg.target);
      } catch (const Error& e) {
        throw ConfigError(std::string("config: target incompatible with game: ") + e.what());
      }
    }

    if (j.contains("check")) {
      const auto& c = j.at("check");
      if (!c.is_object()) throw ConfigError("config: check must be an object");
      cfg.check.radius = c.value("radius", cfg.check.radius);
      if (!(cfg.check.radius > 0.0)) throw ConfigError("config: check.radius must be > 0");
      if (c.contains("samples")) {
        const long long s = c.at("samples").get<long long>();
        if (s < 1) throw ConfigError("config: check.samples must be >= 1");
        cfg.check.samples = static_cast<std::size_t>(s);
      }
      if (c.contains("seed")) cfg.check.seed = c.at("seed").get<std::uint64_t>();
      cfg.check.min_component = c.value("min_component", cfg.check.min_component);
      if (!(cfg.check.min_component > 0.0))
        throw ConfigError("config: check.min_component must be > 0");
    }

    if (j.contains("output")) {
      const auto& o = j.at("output");
      if (!o.is_object()) throw ConfigError("config: output must be an object");
      cfg.output_prefix = o.value("prefix", cfg.output_prefix);
    }
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const detail::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace incdyn
