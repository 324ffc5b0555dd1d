#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "incdyn/errors.hpp"
#include "incdyn/games.hpp"
#include "incdyn/geometry.hpp"
#include "incdyn/rng.hpp"

namespace incdyn {

/// Tolerance on the "coordinate sum never equals -1" validity condition.
inline constexpr double kValiditySumTolerance = 1e-9;

/// Per-population incentive vectors phi_i(x).
using IncentiveVector = std::vector<std::vector<double>>;

enum class IncentiveKind { Replicator, BestReply, Projection, CustomTable };

/// Optional per-population fitness shift g_i(x) for the replicator family.
/// It cancels in the induced dynamic but changes phi itself.
using GShift = std::function<double(std::size_t population, const RawProfile& state)>;

/// User-supplied incentive: a deterministic map from state to per-population
/// vectors. Determinism is a contract on the caller; certificates are
/// meaningless otherwise.
using CustomIncentiveFn = std::function<RawProfile(const RawProfile& state)>;

/// An incentive phi(x) generating a game dynamic.
class Incentive {
 public:
  static Incentive replicator() { return Incentive(IncentiveKind::Replicator, "replicator"); }

  static Incentive replicator(GShift g_shift) {
    Incentive inc(IncentiveKind::Replicator, "replicator+shift");
    inc.g_shift_ = std::move(g_shift);
    return inc;
  }

  static Incentive best_reply(Tiebreak tiebreak = Tiebreak::LowestIndex) {
    Incentive inc(IncentiveKind::BestReply,
                  tiebreak == Tiebreak::LowestIndex ? "best-reply(lowest-index)"
                                                    : "best-reply(uniform-mixture)");
    inc.tiebreak_ = tiebreak;
    return inc;
  }

  static Incentive projection() { return Incentive(IncentiveKind::Projection, "projection"); }

  static Incentive custom_table(CustomIncentiveFn fn, std::string label = "custom-table") {
    Incentive inc(IncentiveKind::CustomTable, std::move(label));
    inc.custom_ = std::move(fn);
    return inc;
  }

  IncentiveKind kind() const { return kind_; }
  Tiebreak tiebreak() const { return tiebreak_; }
  const GShift& g_shift() const { return g_shift_; }
  const CustomIncentiveFn& custom() const { return custom_; }
  const std::string& name() const { return name_; }

 private:
  Incentive(IncentiveKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  IncentiveKind kind_;
  std::string name_;
  GShift g_shift_;
  Tiebreak tiebreak_ = Tiebreak::LowestIndex;
  CustomIncentiveFn custom_;
};

namespace detail {

/// Incentive evaluation without the public-surface gates. Solver stages and
/// boundary-face probes call this on raw weight vectors that need not
/// satisfy simplex invariants; every built-in formula is arithmetic-safe
/// there.
inline IncentiveVector evaluate_incentive_raw(const Incentive& inc, const Game& game,
                                              const RawProfile& x) {
  switch (inc.kind()) {
    case IncentiveKind::Replicator: {
      const FitnessVector f = fitness_raw(game, x);
      IncentiveVector phi(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double g = inc.g_shift() ? inc.g_shift()(i, x) : 0.0;
        phi[i].resize(f[i].size());
        for (std::size_t a = 0; a < f[i].size(); ++a) phi[i][a] = x[i][a] * (f[i][a] + g);
      }
      return phi;
    }
    case IncentiveKind::BestReply:
      return best_reply_indicator_raw(game, x, inc.tiebreak(), kTieTolerance);
    case IncentiveKind::Projection: {
      // phi = f - mean(f) + x: sums to 1 per population and induces the
      // field xdot = f - mean(f).
      const FitnessVector f = fitness_raw(game, x);
      IncentiveVector phi(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) {
        double mean = 0.0;
        for (double v : f[i]) mean += v;
        mean /= static_cast<double>(f[i].size());
        phi[i].resize(f[i].size());
        for (std::size_t a = 0; a < f[i].size(); ++a) phi[i][a] = f[i][a] - mean + x[i][a];
      }
      return phi;
    }
    case IncentiveKind::CustomTable: {
      if (!inc.custom()) throw Error("custom-table incentive has no function");
      IncentiveVector phi = inc.custom()(x);
      if (phi.size() != x.size()) throw DimensionMismatch("custom incentive: population count");
      for (std::size_t i = 0; i < phi.size(); ++i)
        if (phi[i].size() != x[i].size())
          throw DimensionMismatch("custom incentive: strategy count");
      return phi;
    }
  }
  throw Error("unreachable incentive kind");
}

}  // namespace detail

/// Evaluates phi(x). The projection incentive requires an interior state;
/// its dynamic can exit through simplex faces and boundary handling is the
/// integrator's job, not the incentive's.
inline IncentiveVector evaluate_incentive(const Incentive& inc, const Game& game,
                                          const StateProfile& x) {
  game.require_compatible(x);
  if (inc.kind() == IncentiveKind::Projection && !x.is_interior())
    throw BoundaryState("projection incentive requires an interior state");
  return detail::evaluate_incentive_raw(inc, game, x.raw());
}

enum class ViolationKind { NegativityAtZero, SumEqualsMinusOne };

struct ValidityViolation {
  RawProfile state;
  std::size_t population;
  std::size_t strategy;  // npos for sum violations
  ViolationKind kind;
  double value;  // offending phi entry, or the coordinate sum

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
};

/// Findings of a sampling-based validity scan.
struct ValidityReport {
  std::size_t sampled_states = 0;
  std::vector<ValidityViolation> violations;
  bool verdict = false;  // true iff violations is empty
};

/// Samples states (cycling every boundary face, each coordinate pinned to 0
/// in turn, plus interior draws) and records violations of the two validity
/// conditions: x_{ia}=0 => phi_{ia}(x) >= 0, and sum_a phi_{ia}(x) != -1
/// (tested as |sum + 1| > sum_tol).
inline ValidityReport validate_incentive(const Incentive& inc, const Game& game,
                                         std::size_t samples, std::uint64_t seed,
                                         double sum_tol = kValiditySumTolerance) {
  if (samples < 1) throw std::invalid_argument("validate_incentive: samples must be >= 1");
  const auto counts = game.strategy_counts();
  std::size_t faces = 0;
  for (std::size_t c : counts) faces += c;

  Rng rng(seed);
  ValidityReport report;
  report.sampled_states = samples;

  for (std::size_t k = 0; k < samples; ++k) {
    RawProfile x(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) x[i] = rng.simplex_uniform(counts[i]);

    // Cycle position: first the faces in declaration order, then one
    // interior state, repeating.
    const std::size_t c = k % (faces + 1);
    if (c < faces) {
      std::size_t rest = c;
      std::size_t pop = 0;
      while (rest >= counts[pop]) {
        rest -= counts[pop];
        ++pop;
      }
      if (counts[pop] > 1) {
        const std::vector<double> others = rng.simplex_uniform(counts[pop] - 1);
        std::size_t j = 0;
        for (std::size_t a = 0; a < counts[pop]; ++a)
          x[pop][a] = (a == rest) ? 0.0 : others[j++];
      }
    }

    const IncentiveVector phi = detail::evaluate_incentive_raw(inc, game, x);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      for (std::size_t a = 0; a < phi[i].size(); ++a)
        if (x[i][a] == 0.0 && phi[i][a] < 0.0)
          report.violations.push_back(
              {x, i, a, ViolationKind::NegativityAtZero, phi[i][a]});
      double sum = 0.0;
      for (double v : phi[i]) sum += v;
      if (std::abs(sum + 1.0) <= sum_tol)
        report.violations.push_back(
            {x, i, ValidityViolation::npos, ViolationKind::SumEqualsMinusOne, sum});
    }
  }
  report.verdict = report.violations.empty();
  return report;
}

}  // namespace incdyn
