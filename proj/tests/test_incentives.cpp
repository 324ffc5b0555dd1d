#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "incdyn/incentives.hpp"
#include "test_helpers.hpp"

using namespace incdyn;

TEST_CASE("replicator incentive is state-weighted fitness") {
  const Game zero = Game::single_population(Matrix::zero(3, 3));
  const auto phi0 = evaluate_incentive(Incentive::replicator(), zero, testutil::single({1, 1, 1}));
  CHECK(phi0[0] == std::vector<double>{0.0, 0.0, 0.0});

  const auto phi1 = evaluate_incentive(Incentive::replicator(), testutil::rps_game(2, 1),
                                       testutil::single({1, 1, 1}));
  for (double v : phi1[0]) CHECK(v == Catch::Approx(1.0 / 9.0).margin(1e-15));
}

TEST_CASE("replicator g-shift changes phi by x-weighted g") {
  const Game rps = testutil::rps_game(2, 1);
  const GShift g = [](std::size_t, const RawProfile& x) { return 0.7 + 0.3 * x[0][0]; };
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const StateProfile x = testutil::random_interior_profile(rng, {3});
    const auto shifted = evaluate_incentive(Incentive::replicator(g), rps, x);
    const auto plain = evaluate_incentive(Incentive::replicator(), rps, x);
    const double gv = 0.7 + 0.3 * x[0][0];
    for (std::size_t a = 0; a < 3; ++a)
      CHECK(shifted[0][a] - plain[0][a] == Catch::Approx(x[0][a] * gv).margin(1e-12));
  }
}

TEST_CASE("best-reply incentive is the tie-broken indicator") {
  const Game diag = Game::single_population(Matrix(2, 2, {2, 0, 0, 1}));
  const auto phi = evaluate_incentive(Incentive::best_reply(), diag, testutil::single({0.4, 0.6}));
  CHECK(phi[0] == std::vector<double>{1.0, 0.0});
}

TEST_CASE("best-reply incentive has unit mass") {
  Rng rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const StateProfile x = testutil::random_interior_profile(rng, {3});
    const auto phi = evaluate_incentive(Incentive::best_reply(), testutil::rps_game(2, 1), x);
    double sum = 0.0;
    for (double v : phi[0]) sum += v;
    CHECK(sum == Catch::Approx(1.0).margin(1e-15));
  }
}

TEST_CASE("projection incentive sums to one at interior states") {
  const Game rps = testutil::rps_game(2, 1);
  Rng rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const StateProfile x = testutil::random_interior_profile(rng, {3});
    const auto phi = evaluate_incentive(Incentive::projection(), rps, x);
    double sum = 0.0;
    for (double v : phi[0]) sum += v;
    CHECK(sum == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("projection incentive rejects boundary states") {
  const Game rps = testutil::rps_game(2, 1);
  CHECK_THROWS_AS(evaluate_incentive(Incentive::projection(), rps, testutil::single({1, 0, 0})),
                  BoundaryState);
}

TEST_CASE("evaluate_incentive checks dimensions") {
  const Game rps = testutil::rps_game(2, 1);
  CHECK_THROWS_AS(evaluate_incentive(Incentive::replicator(), rps, testutil::single({1, 1})),
                  DimensionMismatch);
  const Incentive bad = Incentive::custom_table(
      [](const RawProfile&) { return RawProfile{{0.0, 0.0}}; });
  CHECK_THROWS_AS(evaluate_incentive(bad, rps, testutil::single({1, 1, 1})), DimensionMismatch);
}

TEST_CASE("replicator and best-reply incentives validate") {
  const Game rps = testutil::rps_game(2, 1);
  const ValidityReport rep = validate_incentive(Incentive::replicator(), rps, 500, 7);
  CHECK(rep.verdict);
  CHECK(rep.sampled_states == 500);
  CHECK(rep.violations.empty());

  const ValidityReport br = validate_incentive(Incentive::best_reply(), rps, 500, 7);
  CHECK(br.verdict);
}

TEST_CASE("validity scan catches negativity on a vanished strategy") {
  // phi_0 < 0 while x_0 = 0: invalid by the negativity condition.
  const Game diag = Game::single_population(Matrix(2, 2, {2, 0, 0, 1}));
  const Incentive bad = Incentive::custom_table([](const RawProfile& x) {
    RawProfile phi{{0.5, 0.5}};
    if (x[0][0] == 0.0) phi[0][0] = -1.0;
    return phi;
  });
  const ValidityReport rep = validate_incentive(bad, diag, 50, 3);
  CHECK_FALSE(rep.verdict);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.kind == ViolationKind::NegativityAtZero && v.population == 0 && v.strategy == 0)
      found = true;
  CHECK(found);
}

TEST_CASE("validity scan catches a coordinate sum of minus one") {
  const Game diag = Game::single_population(Matrix(2, 2, {2, 0, 0, 1}));
  const Incentive bad = Incentive::custom_table(
      [](const RawProfile&) { return RawProfile{{-0.5, -0.5}}; });
  const ValidityReport rep = validate_incentive(bad, diag, 20, 3);
  CHECK_FALSE(rep.verdict);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.kind == ViolationKind::SumEqualsMinusOne) found = true;
  CHECK(found);
}
