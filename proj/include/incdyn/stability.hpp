#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "incdyn/dynamics.hpp"
#include "incdyn/errors.hpp"
#include "incdyn/games.hpp"
#include "incdyn/geometry.hpp"
#include "incdyn/incentives.hpp"
#include "incdyn/information.hpp"

namespace incdyn {

/// Samples with a non-positive margin (or payoff gap) inside a certificate.
struct MarginViolation {
  std::size_t sample_index;
  StateProfile state;
  double margin;
};

/// Sampling-based certificate for incentive stability of a candidate rest
/// point: margins over a seeded neighborhood sample, reproducible and
/// falsifiable from the recorded (radius, samples, seed).
struct IssCertificate {
  explicit IssCertificate(StateProfile cand) : candidate(std::move(cand)) {}

  StateProfile candidate;
  double radius = 0.0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<double> sample_margins;  // per-sample minimum over populations
  double min_margin = 0.0;
  std::vector<MarginViolation> violations;
  bool verdict = false;  // true iff every sampled margin > 0
  std::string incentive_id;
  std::string game_id;
};

/// Same scheme for the evolutionary stability payoff gap u(candidate,x) - u(x,x).
struct EssCertificate {
  explicit EssCertificate(StateProfile cand) : candidate(std::move(cand)) {}

  StateProfile candidate;
  double radius = 0.0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<double> sample_gaps;  // per-sample minimum over populations
  double min_gap = 0.0;
  std::vector<MarginViolation> violations;
  bool verdict = false;
  std::string game_id;
};

/// Evaluates iss_margin on a seeded neighborhood sample of the candidate.
inline IssCertificate check_iss(const Game& game, const Incentive& inc,
                                const StateProfile& candidate, double radius,
                                std::size_t samples, std::uint64_t seed,
                                double min_component = kDefaultMinComponent) {
  game.require_compatible(candidate);
  const std::vector<StateProfile> points =
      sample_profile_neighborhood(candidate, radius, samples, min_component, seed);

  IssCertificate cert(candidate);
  cert.radius = radius;
  cert.sample_count = samples;
  cert.seed = seed;
  cert.incentive_id = inc.name();
  cert.game_id = game.describe();
  cert.sample_margins.reserve(samples);

  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const IncentiveVector phi = detail::evaluate_incentive_raw(inc, game, points[k].raw());
    const std::vector<double> margins = iss_margin(candidate, points[k], phi);
    const double m = *std::min_element(margins.begin(), margins.end());
    cert.sample_margins.push_back(m);
    min_margin = std::min(min_margin, m);
    if (!(m > 0.0)) cert.violations.push_back({k, points[k], m});
  }
  cert.min_margin = min_margin;
  cert.verdict = cert.violations.empty();
  return cert;
}

/// Evaluates the payoff gap on the same sampling scheme (identical seed and
/// parameters reproduce the exact sample set used by check_iss).
inline EssCertificate check_ess(const Game& game, const StateProfile& candidate, double radius,
                                std::size_t samples, std::uint64_t seed,
                                double min_component = kDefaultMinComponent) {
  game.require_compatible(candidate);
  const std::vector<StateProfile> points =
      sample_profile_neighborhood(candidate, radius, samples, min_component, seed);

  EssCertificate cert(candidate);
  cert.radius = radius;
  cert.sample_count = samples;
  cert.seed = seed;
  cert.game_id = game.describe();
  cert.sample_gaps.reserve(samples);

  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const std::vector<double> u_cand = expected_payoff(game, candidate, points[k]);
    const std::vector<double> u_self = expected_payoff(game, points[k], points[k]);
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u_cand.size(); ++i) g = std::min(g, u_cand[i] - u_self[i]);
    cert.sample_gaps.push_back(g);
    min_gap = std::min(min_gap, g);
    if (!(g > 0.0)) cert.violations.push_back({k, points[k], g});
  }
  cert.min_gap = min_gap;
  cert.verdict = cert.violations.empty();
  return cert;
}

namespace detail {

/// Gaussian elimination with partial pivoting; matrices here are
/// simplex-tangent sized (a handful of rows).
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                        std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-14)
      throw NoConvergence("rest point search: singular Jacobian");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

inline double inf_norm(const RawProfile& v) {
  double m = 0.0;
  for (const auto& row : v)
    for (double x : row) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// Damped Newton iteration on the stationarity residual F(x) = phi(x) -
/// x .* sum phi(x), reduced to the tangent parameterization that drops each
/// population's last coordinate. The Jacobian is central finite differences
/// (step 1e-7); incentives need not be smooth enough for analytic ones.
inline StateProfile find_interior_rest_point(const Game& game, const Incentive& inc,
                                             const StateProfile& guess, double tol = 1e-10) {
  game.require_compatible(guess);
  if (!guess.is_interior())
    throw LeftInterior("rest point search: guess must be interior");

  const FieldFn field = make_field(inc, game);
  const auto counts = game.strategy_counts();
  std::size_t reduced_dim = 0;
  for (std::size_t c : counts) reduced_dim += c - 1;

  auto pack = [&](const RawProfile& x) {
    std::vector<double> y;
    y.reserve(reduced_dim);
    for (std::size_t i = 0; i < counts.size(); ++i)
      for (std::size_t a = 0; a + 1 < counts[i]; ++a) y.push_back(x[i][a]);
    return y;
  };
  auto unpack = [&](const std::vector<double>& y) {
    RawProfile x(counts.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      x[i].resize(counts[i]);
      double head = 0.0;
      for (std::size_t a = 0; a + 1 < counts[i]; ++a) {
        x[i][a] = y[j++];
        head += x[i][a];
      }
      x[i][counts[i] - 1] = 1.0 - head;
    }
    return x;
  };
  auto reduced_residual = [&](const std::vector<double>& y) {
    return pack(field(unpack(y)));
  };
  auto to_profile = [&](const RawProfile& x) {
    std::vector<SimplexPoint> pops;
    pops.reserve(x.size());
    for (const auto& w : x) pops.emplace_back(SimplexPoint::Unchecked{}, w);
    return StateProfile(std::move(pops));
  };
  auto interior = [](const RawProfile& x) {
    for (const auto& row : x)
      for (double w : row)
        if (!(w > 0.0)) return false;
    return true;
  };

  constexpr int kMaxIterations = 200;
  constexpr double kFdStep = 1e-7;

  RawProfile x = guess.raw();
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const double residual = detail::inf_norm(field(x));
    if (residual < tol) {
      if (!interior(x)) throw LeftInterior("rest point search: converged outside the interior");
      return to_profile(x);
    }

    std::vector<double> y = pack(x);
    const std::vector<double> g = reduced_residual(y);

    std::vector<std::vector<double>> jac(reduced_dim, std::vector<double>(reduced_dim, 0.0));
    for (std::size_t j = 0; j < reduced_dim; ++j) {
      std::vector<double> yp = y, ym = y;
      yp[j] += kFdStep;
      ym[j] -= kFdStep;
      const std::vector<double> gp = reduced_residual(yp);
      const std::vector<double> gm = reduced_residual(ym);
      for (std::size_t r = 0; r < reduced_dim; ++r)
        jac[r][j] = (gp[r] - gm[r]) / (2.0 * kFdStep);
    }

    std::vector<double> rhs(reduced_dim);
    for (std::size_t r = 0; r < reduced_dim; ++r) rhs[r] = -g[r];
    const std::vector<double> direction = detail::solve_linear(std::move(jac), std::move(rhs));

    bool accepted = false;
    bool any_interior_trial = false;
    for (double lambda = 1.0; lambda >= 1e-8; lambda *= 0.5) {
      std::vector<double> y_trial = y;
      for (std::size_t j = 0; j < reduced_dim; ++j) y_trial[j] += lambda * direction[j];
      const RawProfile x_trial = unpack(y_trial);
      if (!interior(x_trial)) continue;
      any_interior_trial = true;
      if (detail::inf_norm(field(x_trial)) < residual) {
        x = x_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!any_interior_trial)
        throw LeftInterior("rest point search: every damped step leaves the interior");
      throw NoConvergence("rest point search: damped step cannot reduce the residual");
    }
  }
  throw NoConvergence("rest point search: iteration limit reached");
}

/// Aligned Lyapunov diagnostics for a recorded trajectory: V, analytic Vdot,
/// finite-difference Vdot, their agreement, and a monotonicity verdict.
struct LyapunovReport {
  std::vector<double> times;
  std::vector<double> v;
  std::vector<double> vdot_analytic;
  std::vector<double> vdot_fd;
  double max_rel_error = 0.0;   // over points with |vdot_analytic| > rate_floor
  std::size_t compared = 0;     // points entering the error statistic
  bool monotone = false;
  std::size_t monotonicity_violations = 0;
  std::vector<std::size_t> switch_flagged;  // record indices adjacent to a best-reply switch
  double per_step_tolerance = 0.0;
  double rate_floor = 0.0;
};

namespace detail {

/// Derivative of the quadratic through three samples, evaluated at te.
/// Handles nonuniform spacing and one-sided stencils at series ends.
inline double three_point_derivative(double t0, double v0, double t1, double v1, double t2,
                                     double v2, double te) {
  return v0 * (2.0 * te - t1 - t2) / ((t0 - t1) * (t0 - t2)) +
         v1 * (2.0 * te - t0 - t2) / ((t1 - t0) * (t1 - t2)) +
         v2 * (2.0 * te - t0 - t1) / ((t2 - t0) * (t2 - t1));
}

}  // namespace detail

/// Rebuilds the V and Vdot series from the recorded states (the trajectory
/// need not have been monitored), cross-checks the analytic derivative
/// against finite differences, and verdicts monotone decrease. For
/// best-reply runs the records within one step of a change of best-reply
/// set are flagged and excluded: the field is discontinuous there and a
/// fixed-step integrator commits O(h) switch error.
inline LyapunovReport lyapunov_report(const Trajectory& traj, const StateProfile& target,
                                      double per_step_tolerance = 1e-12,
                                      double rate_floor = 1e-10) {
  const std::size_t n = traj.states.size();
  if (n < 3) throw TooShort("lyapunov_report: need at least 3 records");
  traj.game.require_compatible(target);
  if (!target.is_interior()) throw BoundaryState("lyapunov_report: target must be interior");

  LyapunovReport rep;
  rep.per_step_tolerance = per_step_tolerance;
  rep.rate_floor = rate_floor;
  rep.times = traj.times;
  rep.v.resize(n);
  rep.vdot_analytic.resize(n);
  rep.vdot_fd.resize(n);

  for (std::size_t k = 0; k < n; ++k) {
    rep.v[k] = lyapunov_value(target, traj.states[k]);
    const IncentiveVector phi =
        detail::evaluate_incentive_raw(traj.incentive, traj.game, traj.states[k].raw());
    rep.vdot_analytic[k] = lyapunov_derivative(target, traj.states[k], phi);
  }

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = (k == 0) ? 0 : (k == n - 1 ? n - 3 : k - 1);
    rep.vdot_fd[k] =
        detail::three_point_derivative(rep.times[lo], rep.v[lo], rep.times[lo + 1], rep.v[lo + 1],
                                       rep.times[lo + 2], rep.v[lo + 2], rep.times[k]);
  }

  std::vector<char> flagged(n, 0);
  if (traj.incentive.kind() == IncentiveKind::BestReply) {
    std::vector<std::vector<std::vector<std::size_t>>> sets(n);
    for (std::size_t k = 0; k < n; ++k)
      sets[k] = detail::best_reply_set_raw(traj.game, traj.states[k].raw(), kTieTolerance);
    for (std::size_t k = 1; k < n; ++k)
      if (sets[k] != sets[k - 1]) flagged[k - 1] = flagged[k] = 1;
    for (std::size_t k = 0; k < n; ++k)
      if (flagged[k]) rep.switch_flagged.push_back(k);
  }

  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (flagged[k] || flagged[k + 1]) continue;
    if (rep.v[k + 1] - rep.v[k] > per_step_tolerance) ++rep.monotonicity_violations;
  }
  rep.monotone = rep.monotonicity_violations == 0;

  for (std::size_t k = 0; k < n; ++k) {
    if (flagged[k]) continue;
    if (std::abs(rep.vdot_analytic[k]) <= rate_floor) continue;
    const double err = std::abs(rep.vdot_analytic[k] - rep.vdot_fd[k]) /
                       std::abs(rep.vdot_analytic[k]);
    rep.max_rel_error = std::max(rep.max_rel_error, err);
    ++rep.compared;
  }
  return rep;
}

}  // namespace incdyn
