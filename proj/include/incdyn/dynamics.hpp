#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "incdyn/errors.hpp"
#include "incdyn/games.hpp"
#include "incdyn/geometry.hpp"
#include "incdyn/incentives.hpp"
#include "incdyn/information.hpp"

namespace incdyn {

/// Per-population velocity vectors xdot_i; coordinates sum to 0 within
/// roundoff for any incentive.
using TangentVector = std::vector<std::vector<double>>;

/// Right-hand side of the dynamic, evaluated on raw weights so that solver
/// stages need not satisfy simplex invariants.
using FieldFn = std::function<RawProfile(const RawProfile&)>;

enum class Method { Rk4Fixed, EulerFixed };
enum class BoundaryPolicy { Clamp, Reject };

struct SolverConfig {
  Method method = Method::Rk4Fixed;
  double step = 1e-3;
  double t_end = 10.0;
  std::size_t record_every = 1;
  BoundaryPolicy boundary_policy = BoundaryPolicy::Clamp;
  double interior_eps = 1e-12;

  void validate() const {
    if (!(step > 0.0)) throw ConfigError("solver: step must be > 0");
    if (!(t_end > 0.0)) throw ConfigError("solver: t_end must be > 0");
    if (record_every < 1) throw ConfigError("solver: record_every must be >= 1");
    if (!(interior_eps > 0.0)) throw ConfigError("solver: interior_eps must be > 0");
  }
};

/// Time-stamped states with optional Lyapunov monitor channels, plus the
/// ingredients needed to re-derive any monitored quantity.
struct Trajectory {
  Trajectory(Game g, Incentive inc, SolverConfig cfg, std::optional<StateProfile> tgt)
      : game(std::move(g)), incentive(std::move(inc)), config(cfg), target(std::move(tgt)) {}

  std::vector<double> times;
  std::vector<StateProfile> states;
  std::vector<double> lyapunov;       // V(x) at recorded points, when monitored
  std::vector<double> lyapunov_rate;  // analytic Vdot at recorded points

  Game game;
  Incentive incentive;
  SolverConfig config;
  std::optional<StateProfile> target;

  bool monitored() const { return target.has_value(); }
  std::size_t record_count() const { return times.size(); }
};

/// The incentive vector field xdot_ia = phi_ia(x) - x_ia * sum_b phi_ib(x),
/// packaged as a raw-state callable for the integrators.
inline FieldFn make_field(const Incentive& inc, const Game& game) {
  return [inc, game](const RawProfile& x) {
    const IncentiveVector phi = detail::evaluate_incentive_raw(inc, game, x);
    RawProfile v(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
      double total = 0.0;
      for (double p : phi[i]) total += p;
      v[i].resize(phi[i].size());
      for (std::size_t a = 0; a < phi[i].size(); ++a) v[i][a] = phi[i][a] - x[i][a] * total;
    }
    return v;
  };
}

/// xdot at a validated state. Propagates incentive errors (e.g. the
/// projection incentive's interiority requirement).
inline TangentVector vector_field(const Incentive& inc, const Game& game, const StateProfile& x) {
  game.require_compatible(x);
  const IncentiveVector phi = evaluate_incentive(inc, game, x);
  RawProfile raw = x.raw();
  TangentVector v(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double total = 0.0;
    for (double p : phi[i]) total += p;
    v[i].resize(phi[i].size());
    for (std::size_t a = 0; a < phi[i].size(); ++a) v[i][a] = phi[i][a] - raw[i][a] * total;
  }
  return v;
}

namespace detail {

inline RawProfile axpy(const RawProfile& x, double h, const RawProfile& v) {
  RawProfile out = x;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t a = 0; a < out[i].size(); ++a) out[i][a] += h * v[i][a];
  return out;
}

/// One raw explicit step, before any boundary policy.
inline RawProfile raw_step(const FieldFn& field, const RawProfile& x, double h, Method method) {
  if (method == Method::EulerFixed) return axpy(x, h, field(x));
  const RawProfile k1 = field(x);
  const RawProfile k2 = field(axpy(x, 0.5 * h, k1));
  const RawProfile k3 = field(axpy(x, 0.5 * h, k2));
  const RawProfile k4 = field(axpy(x, h, k3));
  RawProfile out = x;
  const double w = h / 6.0;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t a = 0; a < out[i].size(); ++a)
      out[i][a] += w * (k1[i][a] + 2.0 * k2[i][a] + 2.0 * k3[i][a] + k4[i][a]);
  return out;
}

/// Applies the boundary policy to a raw step result and restores simplex
/// invariants. Clamp renormalizes then waterfills to the eps-interior;
/// Reject throws LeftSimplex on any negative coordinate and renormalizes
/// away roundoff drift.
inline StateProfile apply_boundary_policy(RawProfile y, const SolverConfig& cfg) {
  std::vector<SimplexPoint> pops;
  pops.reserve(y.size());
  for (auto& w : y) {
    double total = 0.0;
    for (double v : w) {
      if (!std::isfinite(v)) throw NonFinite("integration produced a non-finite state");
      total += v;
    }
    if (!(total > 0.0)) throw NonFinite("integration lost all probability mass");
    if (cfg.boundary_policy == BoundaryPolicy::Reject) {
      for (double v : w)
        if (v < 0.0) throw LeftSimplex("state left the simplex under the reject policy");
      for (double& v : w) v /= total;
    } else {
      for (double& v : w) v /= total;
      bool below = false;
      for (double v : w)
        if (v < cfg.interior_eps) below = true;
      if (below) clamp_weights(w, cfg.interior_eps);
    }
    pops.emplace_back(SimplexPoint::Unchecked{}, std::move(w));
  }
  return StateProfile(std::move(pops));
}

}  // namespace detail

/// One explicit step of the configured method followed by the boundary
/// policy.
inline StateProfile step(const FieldFn& field, const StateProfile& x, const SolverConfig& cfg) {
  cfg.validate();
  return detail::apply_boundary_policy(detail::raw_step(field, x.raw(), cfg.step, cfg.method), cfg);
}

inline StateProfile step(const Incentive& inc, const Game& game, const StateProfile& x,
                         const SolverConfig& cfg) {
  game.require_compatible(x);
  return step(make_field(inc, game), x, cfg);
}

/// Integrates the incentive dynamic from x0 with fixed steps, recording
/// every record_every-th step (plus the initial and final states). When a
/// target is supplied, V and the analytic Vdot are recorded alongside each
/// state. Deterministic: identical inputs give bitwise identical output.
inline Trajectory integrate(const Game& game, const Incentive& inc, const StateProfile& x0,
                            const SolverConfig& cfg,
                            const std::optional<StateProfile>& target = std::nullopt) {
  cfg.validate();
  game.require_compatible(x0);
  if (target) {
    game.require_compatible(*target);
    if (!target->is_interior())
      throw BoundaryState("integrate: monitor target must be interior");
  }

  const FieldFn field = make_field(inc, game);
  Trajectory traj(game, inc, cfg, target);

  auto record = [&](double t, const StateProfile& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    if (target) {
      const double v = lyapunov_value(*target, x);
      const IncentiveVector phi = detail::evaluate_incentive_raw(inc, game, x.raw());
      const double vdot = lyapunov_derivative(*target, x, phi);
      if (!std::isfinite(v) || !std::isfinite(vdot))
        throw NonFinite("integrate: monitor became non-finite");
      traj.lyapunov.push_back(v);
      traj.lyapunov_rate.push_back(vdot);
    }
  };

  long long n_steps = std::llround(cfg.t_end / cfg.step);
  if (n_steps < 1) n_steps = 1;

  StateProfile x = x0;
  record(0.0, x);
  for (long long k = 1; k <= n_steps; ++k) {
    x = detail::apply_boundary_policy(detail::raw_step(field, x.raw(), cfg.step, cfg.method), cfg);
    if (k % static_cast<long long>(cfg.record_every) == 0 || k == n_steps)
      record(static_cast<double>(k) * cfg.step, x);
  }
  return traj;
}

}  // namespace incdyn
