#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "incdyn/errors.hpp"
#include "incdyn/geometry.hpp"

namespace incdyn {

/// Absolute tolerance on fitness comparison when collecting best replies.
/// Raw float argmax is unstable under integration noise.
inline constexpr double kTieTolerance = 1e-9;

/// Dense row-major matrix, sized for payoff tables (a handful of strategies).
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
      : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (rows_ == 0 || cols_ == 0 || data_.size() != rows_ * cols_)
      throw DimensionMismatch("matrix: entry count does not match rows*cols");
  }

  static Matrix zero(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols, std::vector<double>(rows * cols, 0.0));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<double>& row_major() const { return data_; }

  /// A * v
  std::vector<double> multiply(const std::vector<double>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix multiply: vector length != cols");
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) acc += data_[i * cols_ + j] * v[j];
      out[i] = acc;
    }
    return out;
  }

  /// A^T * v
  std::vector<double> transpose_multiply(const std::vector<double>& v) const {
    if (v.size() != rows_) throw DimensionMismatch("matrix transpose multiply: vector length != rows");
    std::vector<double> out(cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) acc += data_[i * cols_ + j] * v[i];
      out[j] = acc;
    }
    return out;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

/// Per-population fitness vectors f_i(x), one entry per pure strategy.
using FitnessVector = std::vector<std::vector<double>>;

/// Payoff structure for one or two populations with bilinear fitness.
/// Single population: f(x) = A x. Two populations with matrices (A, B) of
/// identical shape n1 x n2: f1(x) = A x2 and f2(x) = B^T x1.
class Game {
 public:
  static Game single_population(Matrix a) { return Game(std::move(a), std::nullopt); }

  static Game two_population(Matrix a, Matrix b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw DimensionMismatch("two-population game: A and B must have identical shape");
    return Game(std::move(a), std::move(b));
  }

  std::size_t population_count() const { return b_ ? 2 : 1; }

  std::vector<std::size_t> strategy_counts() const {
    if (b_) return {a_.rows(), a_.cols()};
    if (a_.rows() != a_.cols())
      throw DimensionMismatch("single-population game requires a square matrix");
    return {a_.rows()};
  }

  const Matrix& payoff_a() const { return a_; }
  const Matrix& payoff_b() const {
    if (!b_) throw DimensionMismatch("game has a single population, no B matrix");
    return *b_;
  }

  void require_compatible(const StateProfile& x) const {
    const auto counts = strategy_counts();
    if (x.population_count() != counts.size())
      throw DimensionMismatch("state profile population count does not match game");
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (x[i].dimension() != counts[i])
        throw DimensionMismatch("state profile strategy count does not match game");
  }

  /// Compact deterministic identifier used by certificates.
  std::string describe() const;

 private:
  Game(Matrix a, std::optional<Matrix> b) : a_(std::move(a)), b_(std::move(b)) {
    if (!b_ && a_.rows() != a_.cols())
      throw DimensionMismatch("single-population game requires a square matrix");
  }

  Matrix a_;
  std::optional<Matrix> b_;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_matrix(const Matrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i > 0) out += ";";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ",";
      out += format_double(m(i, j));
    }
  }
  out += "]";
  return out;
}

inline void require_raw_compatible(const Game& game, const RawProfile& x) {
  const auto counts = game.strategy_counts();
  if (x.size() != counts.size())
    throw DimensionMismatch("raw profile population count does not match game");
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (x[i].size() != counts[i])
      throw DimensionMismatch("raw profile strategy count does not match game");
}

inline FitnessVector fitness_raw(const Game& game, const RawProfile& x) {
  require_raw_compatible(game, x);
  if (game.population_count() == 1) return {game.payoff_a().multiply(x[0])};
  return {game.payoff_a().multiply(x[1]), game.payoff_b().transpose_multiply(x[0])};
}

inline std::vector<std::vector<std::size_t>> best_reply_set_raw(const Game& game,
                                                                const RawProfile& x,
                                                                double tie_tol) {
  const FitnessVector f = fitness_raw(game, x);
  std::vector<std::vector<std::size_t>> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double top = *std::max_element(f[i].begin(), f[i].end());
    for (std::size_t a = 0; a < f[i].size(); ++a)
      if (f[i][a] >= top - tie_tol) out[i].push_back(a);
  }
  return out;
}

}  // namespace detail

/// f_i(x) as defined by the payoff matrices.
inline FitnessVector fitness(const Game& game, const StateProfile& x) {
  return detail::fitness_raw(game, x.raw());
}

/// u_i(p, x) = p_i . f_i(x), one value per population.
inline std::vector<double> expected_payoff(const Game& game, const StateProfile& p,
                                           const StateProfile& x) {
  game.require_compatible(p);
  const FitnessVector f = fitness(game, x);
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double acc = 0.0;
    for (std::size_t a = 0; a < f[i].size(); ++a) acc += p[i][a] * f[i][a];
    out[i] = acc;
  }
  return out;
}

/// Strategy indices within tie_tol of the per-population fitness maximum.
inline std::vector<std::vector<std::size_t>> best_reply_set(const Game& game,
                                                            const StateProfile& x,
                                                            double tie_tol = kTieTolerance) {
  return detail::best_reply_set_raw(game, x.raw(), tie_tol);
}

inline std::string Game::describe() const {
  if (population_count() == 1)
    return "1pop A=" + detail::format_matrix(payoff_a());
  return "2pop A=" + detail::format_matrix(payoff_a()) + " B=" + detail::format_matrix(payoff_b());
}

enum class Tiebreak { LowestIndex, UniformMixture };

namespace detail {

inline RawProfile best_reply_indicator_raw(const Game& game, const RawProfile& x,
                                           Tiebreak tiebreak, double tie_tol) {
  const auto sets = best_reply_set_raw(game, x, tie_tol);
  RawProfile out;
  out.reserve(sets.size());
  const auto counts = game.strategy_counts();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<double> row(counts[i], 0.0);
    if (tiebreak == Tiebreak::LowestIndex) {
      row[sets[i].front()] = 1.0;
    } else {
      const double share = 1.0 / static_cast<double>(sets[i].size());
      for (std::size_t a : sets[i]) row[a] = share;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

/// Tie-broken best reply as a state profile: the pure unit vector of the
/// lowest best-reply index, or the uniform mixture over the tie set.
inline StateProfile best_reply_indicator(const Game& game, const StateProfile& x,
                                         Tiebreak tiebreak = Tiebreak::LowestIndex,
                                         double tie_tol = kTieTolerance) {
  const RawProfile raw = detail::best_reply_indicator_raw(game, x.raw(), tiebreak, tie_tol);
  std::vector<SimplexPoint> pops;
  pops.reserve(raw.size());
  for (const auto& row : raw) pops.emplace_back(SimplexPoint::Unchecked{}, row);
  return StateProfile(std::move(pops));
}

}  // namespace incdyn
