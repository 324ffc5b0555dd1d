#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "incdyn/games.hpp"
#include "test_helpers.hpp"

using namespace incdyn;

namespace {
const Game kDiag = Game::single_population(Matrix(2, 2, {2, 0, 0, 1}));
}

TEST_CASE("fitness is the payoff matrix applied to the state") {
  const Game zero = Game::single_population(Matrix::zero(3, 3));
  const auto f0 = fitness(zero, testutil::single({1, 1, 1}));
  CHECK(f0[0] == std::vector<double>{0.0, 0.0, 0.0});

  // Circulant RPS rows each sum to a-b, so the barycenter equalizes fitness.
  const auto f1 = fitness(testutil::rps_game(2, 1), testutil::single({1, 1, 1}));
  for (double v : f1[0]) CHECK(v == Catch::Approx(1.0 / 3.0).margin(1e-15));

  const auto f2 = fitness(kDiag, testutil::single({0.4, 0.6}));
  CHECK(f2[0][0] == Catch::Approx(0.8).margin(1e-15));
  CHECK(f2[0][1] == Catch::Approx(0.6).margin(1e-15));
}

TEST_CASE("fitness checks dimensions") {
  CHECK_THROWS_AS(fitness(kDiag, testutil::single({1, 1, 1})), DimensionMismatch);
  CHECK_THROWS_AS(Matrix(2, 2, {1, 2, 3}), DimensionMismatch);
  CHECK_THROWS_AS(Game::single_population(Matrix(2, 3, {1, 2, 3, 4, 5, 6})), DimensionMismatch);
}

TEST_CASE("two-population fitness couples the states") {
  // f1 = A x2, f2 = B^T x1 with both matrices n1 x n2.
  const Matrix a(2, 3, {1, 2, 3, 4, 5, 6});
  const Matrix b(2, 3, {1, 0, 0, 0, 1, 0});
  const Game g = Game::two_population(a, b);
  const StateProfile x = StateProfile::from_raw({{0.5, 0.5}, {0.2, 0.3, 0.5}});
  const auto f = fitness(g, x);
  CHECK(f[0][0] == Catch::Approx(0.2 + 0.6 + 1.5).margin(1e-15));
  CHECK(f[0][1] == Catch::Approx(0.8 + 1.5 + 3.0).margin(1e-15));
  CHECK(f[1] == std::vector<double>{0.5, 0.5, 0.0});

  CHECK_THROWS_AS(Game::two_population(a, Matrix(3, 2, {1, 2, 3, 4, 5, 6})), DimensionMismatch);
}

TEST_CASE("expected payoff of a zero-sum game against itself vanishes") {
  const Game rps11 = testutil::rps_game(1, 1);  // antisymmetric
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const StateProfile x = testutil::random_interior_profile(rng, {3});
    const auto u = expected_payoff(rps11, x, x);
    CHECK(std::abs(u[0]) <= 1e-12);
  }
}

TEST_CASE("expected payoff at the RPS barycenter is (a-b)/3") {
  const Game rps = testutil::rps_game(2, 1);
  const StateProfile bary = testutil::single({1, 1, 1});
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const StateProfile x = testutil::random_interior_profile(rng, {3});
    const auto u = expected_payoff(rps, bary, x);
    CHECK(u[0] == Catch::Approx(1.0 / 3.0).margin(1e-13));
  }
}

TEST_CASE("expected payoff against self equals state-dotted fitness") {
  const Game rps = testutil::rps_game(2, 1);
  const StateProfile x = testutil::single({0.5, 0.3, 0.2});
  const auto u = expected_payoff(rps, x, x);
  const auto f = fitness(rps, x);
  double dot = 0.0;
  for (std::size_t a = 0; a < 3; ++a) dot += x[0][a] * f[0][a];
  CHECK(u[0] == Catch::Approx(dot).margin(1e-15));
}

TEST_CASE("expected payoff is linear in its first argument") {
  const Game rps = testutil::rps_game(2, 1);
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const StateProfile p = testutil::random_interior_profile(rng, {3});
    const StateProfile q = testutil::random_interior_profile(rng, {3});
    const StateProfile x = testutil::random_interior_profile(rng, {3});
    const double lambda = rng.uniform01();
    std::vector<double> mixed(3);
    for (std::size_t a = 0; a < 3; ++a)
      mixed[a] = lambda * p[0][a] + (1.0 - lambda) * q[0][a];
    const StateProfile pm({SimplexPoint(SimplexPoint::Unchecked{}, mixed)});
    const double lhs = expected_payoff(rps, pm, x)[0];
    const double rhs = lambda * expected_payoff(rps, p, x)[0] +
                       (1.0 - lambda) * expected_payoff(rps, q, x)[0];
    CHECK(lhs == Catch::Approx(rhs).margin(1e-12));
  }
}

TEST_CASE("best reply set follows the fitness argmax") {
  CHECK(best_reply_set(kDiag, testutil::single({0.4, 0.6})) ==
        std::vector<std::vector<std::size_t>>{{0}});

  const Game zero = Game::single_population(Matrix::zero(3, 3));
  CHECK(best_reply_set(zero, testutil::single({1, 1, 1})) ==
        std::vector<std::vector<std::size_t>>{{0, 1, 2}});

  // Equal fitness at the barycenter ties every strategy.
  CHECK(best_reply_set(testutil::rps_game(2, 1), testutil::single({1, 1, 1})) ==
        std::vector<std::vector<std::size_t>>{{0, 1, 2}});
}

TEST_CASE("best reply indicator applies the tiebreak rule") {
  const StateProfile lowest = best_reply_indicator(kDiag, testutil::single({0.4, 0.6}));
  CHECK(lowest[0][0] == 1.0);
  CHECK(lowest[0][1] == 0.0);

  const StateProfile uniform = best_reply_indicator(
      testutil::rps_game(2, 1), testutil::single({1, 1, 1}), Tiebreak::UniformMixture);
  for (std::size_t a = 0; a < 3; ++a)
    CHECK(uniform[0][a] == Catch::Approx(1.0 / 3.0).margin(1e-15));

  // Away from ties the rules agree.
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const StateProfile x = testutil::random_interior_profile(rng, {3});
    const auto set = best_reply_set(testutil::rps_game(2, 1), x);
    if (set[0].size() != 1) continue;
    const StateProfile li =
        best_reply_indicator(testutil::rps_game(2, 1), x, Tiebreak::LowestIndex);
    const StateProfile um =
        best_reply_indicator(testutil::rps_game(2, 1), x, Tiebreak::UniformMixture);
    CHECK(li == um);
  }
}

TEST_CASE("best reply indicator is a valid state profile") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const StateProfile x = testutil::random_interior_profile(rng, {3});
    const StateProfile br = best_reply_indicator(testutil::rps_game(2, 1), x);
    double sum = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(br[0][a] >= 0.0);
      sum += br[0][a];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}
