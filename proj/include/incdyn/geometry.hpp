#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "incdyn/errors.hpp"
#include "incdyn/rng.hpp"

namespace incdyn {

/// Sum-to-one slack accepted on simplex points.
inline constexpr double kSumTolerance = 1e-12;

/// Default interiority floor used by neighborhood sampling and certificates.
inline constexpr double kDefaultMinComponent = 1e-6;

/// Per-population weight vectors without simplex invariants attached.
/// Integrator stages and finite-difference probes run on these.
using RawProfile = std::vector<std::vector<double>>;

/// A probability vector over one population's pure strategies.
/// Construction normalizes the input and then asserts the invariants
/// (entrywise >= 0, sum within kSumTolerance of 1).
class SimplexPoint {
 public:
  /// Tag for weights that are already normalized (only the invariants are
  /// checked, no renormalization happens). Used where renormalizing would
  /// perturb bits the caller is contractually required to preserve.
  struct Unchecked {};

  explicit SimplexPoint(std::vector<double> raw) : weights_(std::move(raw)) {
    if (weights_.empty()) throw ZeroMass("simplex point: no entries");
    double total = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] < 0.0)
        throw NegativeWeight("simplex point: entry " + std::to_string(i) + " is negative");
      total += weights_[i];
    }
    if (!(total > 0.0)) throw ZeroMass("simplex point: entries sum to zero");
    for (auto& w : weights_) w /= total;
    check_invariants();
  }

  SimplexPoint(Unchecked, std::vector<double> weights) : weights_(std::move(weights)) {
    check_invariants();
  }

  std::size_t dimension() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  double min_weight() const { return *std::min_element(weights_.begin(), weights_.end()); }

  /// Every weight strictly positive.
  bool is_interior() const { return min_weight() > 0.0; }

  /// Every weight >= eps.
  bool is_eps_interior(double eps) const { return min_weight() >= eps; }

  friend bool operator==(const SimplexPoint& a, const SimplexPoint& b) {
    return a.weights_ == b.weights_;
  }
  friend bool operator!=(const SimplexPoint& a, const SimplexPoint& b) { return !(a == b); }

 private:
  void check_invariants() const {
    if (weights_.empty()) throw ZeroMass("simplex point: no entries");
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw NegativeWeight("simplex point: negative weight after normalization");
      total += w;
    }
    if (std::abs(total - 1.0) > kSumTolerance)
      throw ZeroMass("simplex point: weights do not sum to one");
  }

  std::vector<double> weights_;
};

/// One SimplexPoint per population; the state x of a dynamic. Populations
/// may have different strategy counts.
class StateProfile {
 public:
  explicit StateProfile(std::vector<SimplexPoint> populations)
      : populations_(std::move(populations)) {
    if (populations_.empty()) throw ZeroMass("state profile: no populations");
  }

  static StateProfile from_raw(const RawProfile& raw) {
    std::vector<SimplexPoint> pops;
    pops.reserve(raw.size());
    for (const auto& w : raw) pops.emplace_back(w);
    return StateProfile(std::move(pops));
  }

  std::size_t population_count() const { return populations_.size(); }
  const SimplexPoint& operator[](std::size_t i) const { return populations_[i]; }
  const std::vector<SimplexPoint>& populations() const { return populations_; }

  std::vector<std::size_t> strategy_counts() const {
    std::vector<std::size_t> out;
    out.reserve(populations_.size());
    for (const auto& p : populations_) out.push_back(p.dimension());
    return out;
  }

  RawProfile raw() const {
    RawProfile out;
    out.reserve(populations_.size());
    for (const auto& p : populations_) out.push_back(p.weights());
    return out;
  }

  bool is_interior() const {
    return std::all_of(populations_.begin(), populations_.end(),
                       [](const SimplexPoint& p) { return p.is_interior(); });
  }

  bool is_eps_interior(double eps) const {
    return std::all_of(populations_.begin(), populations_.end(),
                       [eps](const SimplexPoint& p) { return p.is_eps_interior(eps); });
  }

  bool same_shape(const StateProfile& other) const {
    if (population_count() != other.population_count()) return false;
    for (std::size_t i = 0; i < population_count(); ++i)
      if (populations_[i].dimension() != other[i].dimension()) return false;
    return true;
  }

  friend bool operator==(const StateProfile& a, const StateProfile& b) {
    return a.populations_ == b.populations_;
  }
  friend bool operator!=(const StateProfile& a, const StateProfile& b) { return !(a == b); }

 private:
  std::vector<SimplexPoint> populations_;
};

/// Normalizes nonnegative raw weights to a SimplexPoint.
inline SimplexPoint make_simplex_point(std::vector<double> raw) {
  return SimplexPoint(std::move(raw));
}

namespace detail {

/// Waterfill clamp on weights that sum to ~1: pin every entry below eps to
/// eps, rescale the rest proportionally onto the remaining mass, repeat
/// until no entry is below eps. Terminates in at most dimension passes
/// because eps < 1/dimension keeps at least one entry unpinned.
inline void clamp_weights(std::vector<double>& w, double eps) {
  const std::size_t n = w.size();
  std::vector<double> original = w;
  std::vector<char> pinned(n, 0);
  for (;;) {
    bool changed = false;
    std::size_t pinned_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!pinned[i] && w[i] < eps) {
        pinned[i] = 1;
        changed = true;
      }
      if (pinned[i]) ++pinned_count;
    }
    if (!changed) break;
    double free_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!pinned[i]) free_sum += original[i];
    if (!(free_sum > 0.0)) throw NonFinite("clamp: no free mass left");
    const double scale = (1.0 - eps * static_cast<double>(pinned_count)) / free_sum;
    for (std::size_t i = 0; i < n; ++i) w[i] = pinned[i] ? eps : original[i] * scale;
  }
}

/// One accepted draw near `center`: a uniform simplex point pulled toward
/// the center so the move stays inside the inf-norm ball, resampled until
/// it is min_component-interior and distinct from the center.
inline std::vector<double> draw_near(Rng& rng, const std::vector<double>& center, double radius,
                                     double min_component, int max_attempts) {
  const std::size_t n = center.size();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::vector<double> q = rng.simplex_uniform(n);
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) dist = std::max(dist, std::abs(q[i] - center[i]));
    if (dist == 0.0) continue;
    const double lambda = std::min(1.0, radius / dist) * rng.uniform01_pos();
    std::vector<double> cand(n);
    bool ok = true;
    bool distinct = false;
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cand[i] = center[i] + lambda * (q[i] - center[i]);
      moved = std::max(moved, std::abs(cand[i] - center[i]));
      if (cand[i] != center[i]) distinct = true;
      if (cand[i] < min_component) ok = false;
    }
    if (ok && distinct && moved <= radius) return cand;
  }
  throw InfeasibleRadius("neighborhood sampling: no valid point found");
}

}  // namespace detail

/// Raises every weight to at least eps and redistributes the excess from
/// the remaining entries, so the result is eps-interior and sums to 1.
/// Exact no-op (bitwise) when the input is already eps-interior, which
/// makes the operation idempotent.
inline SimplexPoint interior_clamp(const SimplexPoint& p, double eps) {
  const double dim = static_cast<double>(p.dimension());
  if (!(eps > 0.0) || !(eps < 1.0 / dim))
    throw BadEpsilon("interior_clamp: eps must lie in (0, 1/dimension)");
  if (p.is_eps_interior(eps)) return p;
  std::vector<double> w = p.weights();
  detail::clamp_weights(w, eps);
  return SimplexPoint(SimplexPoint::Unchecked{}, std::move(w));
}

/// Draws `count` points p with ||p - center||_inf <= radius, p != center,
/// and min(p) >= min_component. Deterministic in `seed`. Throws
/// BoundaryCenter when the center itself is not min_component-interior and
/// InfeasibleRadius when the resampling budget is exhausted.
inline std::vector<SimplexPoint> sample_neighborhood(const SimplexPoint& center, double radius,
                                                     std::size_t count, double min_component,
                                                     std::uint64_t seed) {
  if (!(radius > 0.0)) throw std::invalid_argument("sample_neighborhood: radius must be > 0");
  if (count < 1) throw std::invalid_argument("sample_neighborhood: count must be >= 1");
  if (!center.is_eps_interior(min_component))
    throw BoundaryCenter("sample_neighborhood: center is not min_component-interior");
  Rng rng(seed);
  std::vector<SimplexPoint> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    out.emplace_back(SimplexPoint::Unchecked{},
                     detail::draw_near(rng, center.weights(), radius, min_component, 10000));
  return out;
}

/// Profile-level neighborhood: each population is perturbed independently
/// with the same radius and interiority floor, one RNG stream overall.
inline std::vector<StateProfile> sample_profile_neighborhood(const StateProfile& center,
                                                             double radius, std::size_t count,
                                                             double min_component,
                                                             std::uint64_t seed) {
  if (!(radius > 0.0)) throw std::invalid_argument("sample_profile_neighborhood: radius must be > 0");
  if (count < 1) throw std::invalid_argument("sample_profile_neighborhood: count must be >= 1");
  if (!center.is_eps_interior(min_component))
    throw BoundaryCenter("sample_profile_neighborhood: center is not min_component-interior");
  Rng rng(seed);
  std::vector<StateProfile> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<SimplexPoint> pops;
    pops.reserve(center.population_count());
    for (std::size_t i = 0; i < center.population_count(); ++i)
      pops.emplace_back(SimplexPoint::Unchecked{},
                        detail::draw_near(rng, center[i].weights(), radius, min_component, 10000));
    out.emplace_back(std::move(pops));
  }
  return out;
}

}  // namespace incdyn
