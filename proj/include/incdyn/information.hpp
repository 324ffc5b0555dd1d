#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "incdyn/errors.hpp"
#include "incdyn/geometry.hpp"
#include "incdyn/incentives.hpp"

namespace incdyn {

/// Shannon entropy H(p) = -sum p ln p in nats, with 0 ln 0 := 0.
inline double shannon_entropy(const SimplexPoint& p) {
  double h = 0.0;
  for (double w : p.weights())
    if (w > 0.0) h -= w * std::log(w);
  return h;
}

/// Cross entropy H(p, q) = -sum p ln q in nats; +inf when some p_a > 0 has
/// q_a = 0.
inline double cross_entropy(const SimplexPoint& p, const SimplexPoint& q) {
  if (p.dimension() != q.dimension())
    throw DimensionMismatch("cross_entropy: dimensions differ");
  double h = 0.0;
  for (std::size_t a = 0; a < p.dimension(); ++a) {
    if (p[a] == 0.0) continue;
    if (q[a] == 0.0) return std::numeric_limits<double>::infinity();
    h -= p[a] * std::log(q[a]);
  }
  return h;
}

/// KL divergence D(p||q) = sum p ln(p/q) in nats; +inf on support mismatch.
/// Zero exactly when p and q are bitwise equal.
inline double kl_divergence(const SimplexPoint& p, const SimplexPoint& q) {
  if (p.dimension() != q.dimension())
    throw DimensionMismatch("kl_divergence: dimensions differ");
  double d = 0.0;
  for (std::size_t a = 0; a < p.dimension(); ++a) {
    if (p[a] == 0.0) continue;
    if (q[a] == 0.0) return std::numeric_limits<double>::infinity();
    d += p[a] * std::log(p[a] / q[a]);
  }
  return d;
}

/// V(x) = sum_i D(target_i || x_i), the Lyapunov candidate for the
/// incentive dynamics at an interior rest point.
inline double lyapunov_value(const StateProfile& target, const StateProfile& x) {
  if (!target.same_shape(x)) throw DimensionMismatch("lyapunov_value: profile shapes differ");
  double v = 0.0;
  for (std::size_t i = 0; i < target.population_count(); ++i)
    v += kl_divergence(target[i], x[i]);
  return v;
}

namespace detail {

inline void require_interior_matching(const StateProfile& target, const StateProfile& x,
                                      const IncentiveVector& phi, const char* who) {
  if (!target.same_shape(x)) throw DimensionMismatch(std::string(who) + ": profile shapes differ");
  if (phi.size() != x.population_count())
    throw DimensionMismatch(std::string(who) + ": incentive population count differs");
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (phi[i].size() != x[i].dimension())
      throw DimensionMismatch(std::string(who) + ": incentive strategy count differs");
  if (!x.is_interior()) throw BoundaryState(std::string(who) + ": state must be strictly interior");
}

}  // namespace detail

/// Time derivative of V along the incentive dynamic, in the closed form
/// Vdot = sum_i sum_a ((x_ia - target_ia) / x_ia) phi_ia(x).
inline double lyapunov_derivative(const StateProfile& target, const StateProfile& x,
                                  const IncentiveVector& phi) {
  detail::require_interior_matching(target, x, phi, "lyapunov_derivative");
  double vdot = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i)
    for (std::size_t a = 0; a < phi[i].size(); ++a)
      vdot += ((x[i][a] - target[i][a]) / x[i][a]) * phi[i][a];
  return vdot;
}

/// Per-population stability margin
///   margin_i = target_i . (phi_i(x)/x_i) - x_i . (phi_i(x)/x_i)
/// (componentwise division). The state is incentive-stable at x when every
/// margin is strictly positive; note sum_i margin_i = -Vdot.
inline std::vector<double> iss_margin(const StateProfile& target, const StateProfile& x,
                                      const IncentiveVector& phi) {
  detail::require_interior_matching(target, x, phi, "iss_margin");
  std::vector<double> margins(phi.size(), 0.0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double m = 0.0;
    for (std::size_t a = 0; a < phi[i].size(); ++a)
      m += ((target[i][a] - x[i][a]) / x[i][a]) * phi[i][a];
    margins[i] = m;
  }
  return margins;
}

}  // namespace incdyn
