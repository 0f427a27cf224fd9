#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ned/system.hpp"
#include "support.hpp"

using namespace ned;
using ned::testing::rel_diff;

namespace {

// f(j) = a j (-1)^j; e_j = -omega + f(j) - f(j-1), so sums over j telescope.
double f(double a, long j) { return a * static_cast<double>(j) * (j % 2 == 0 ? 1.0 : -1.0); }

double closed_log_phi(double omega, double a, long k, long l) {
  return -omega * static_cast<double>(k - l) + f(a, k - 1) - f(a, l - 1);
}

}  // namespace

TEST(Evolution, IdentityAtEqualIndices) {
  std::mt19937_64 rng(7);
  const auto sys = ned::testing::random_table(rng, 3, -10, 10);
  EXPECT_EQ(evolution(sys, 5, 5), Matrix::Identity(3, 3));
}

TEST(Evolution, OscillatingExponentTelescopes) {
  for (long j = -9; j <= 9; ++j)
    EXPECT_NEAR(oscillating_exponent(1.0, 0.1, j), -1.0 + f(0.1, j) - f(0.1, j - 1), 1e-15);
}

TEST(Evolution, Paper2dClosedForm) {
  const auto sys = builtin_example("paper_2d", {1.0, 0.1});
  double worst = 0.0;
  for (long l = -30; l <= 30; ++l)
    for (long k = l; k <= 30; ++k) {
      const Matrix phi = evolution(sys, k, l);
      const double e = std::exp(closed_log_phi(1.0, 0.1, k, l));
      worst = std::max(worst, std::abs(phi(0, 0) - e) / std::max(1.0, e));
      worst = std::max(worst, std::abs(phi(1, 1) - 1.0 / e) / std::max(1.0, 1.0 / e));
      EXPECT_EQ(phi(0, 1), 0.0);
      EXPECT_EQ(phi(1, 0), 0.0);
    }
  EXPECT_LE(worst, 1e-10);
}

TEST(Evolution, ProductOracleOnRandomTable) {
  std::mt19937_64 rng(11);
  const auto sys = ned::testing::random_table(rng, 3, -5, 10);
  Matrix direct = Matrix::Identity(3, 3);
  for (long j = 0; j < 4; ++j) direct = sys.transition(j) * direct;
  EXPECT_LE(rel_diff(evolution(sys, 4, 0), direct), 1e-12);
  EXPECT_LE(rel_diff(evolution(sys, 4, 2) * evolution(sys, 2, 0), evolution(sys, 4, 0)), 1e-12);
}

TEST(Evolution, CocycleAndInverseProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> idx(-12, 12);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 2;
    const auto sys = ned::testing::random_table(rng, n, -15, 15);
    const long k = idx(rng), m = idx(rng), l = idx(rng);
    const Matrix kl = evolution(sys, k, l);
    EXPECT_LE(norm2(evolution(sys, k, m) * evolution(sys, m, l) - kl) / std::max(1.0, norm2(kl)), 1e-10);
    const Matrix lk = evolution(sys, l, k);
    EXPECT_LE(norm2(lk - kl.inverse()) / std::max(1.0, norm2(lk)), 1e-10);
  }
}

TEST(Evolution, IndexOutOfRange) {
  std::mt19937_64 rng(3);
  const auto sys = ned::testing::random_table(rng, 2, 0, 4);
  try {
    evolution(sys, 9, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IndexOutOfRange);
  }
}

TEST(Evolution, SingularTransition) {
  Matrix s = Matrix::Identity(2, 2);
  s(1, 1) = 1e-15;
  const auto sys = MatrixSequence::table(0, {Matrix::Identity(2, 2), s});
  try {
    evolution(sys, 2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularTransition);
  }
}

TEST(WeightedEvolution, UnitWeightIsEvolution) {
  std::mt19937_64 rng(5);
  const auto sys = ned::testing::random_table(rng, 3, -10, 10);
  EXPECT_EQ(weighted_evolution(sys, 1.0, 6, -3), evolution(sys, 6, -3));
}

TEST(WeightedEvolution, ExactCancellation) {
  const auto sys = builtin_example("constant_diag", {2.0, 2.0});
  EXPECT_LE(rel_diff(weighted_evolution(sys, 2.0, 7, 1), Matrix::Identity(2, 2)), 1e-15);
}

TEST(WeightedEvolution, ScalarClosedForm) {
  const auto sys = builtin_example("paper_scalar", {1.0, 0.1});
  for (double gamma : {0.3, 1.0, 2.7})
    for (long l = -12; l <= 12; l += 3)
      for (long k = -12; k <= 12; k += 2) {
        const double expected = std::exp(closed_log_phi(1.0, 0.1, k, l) - (k - l) * std::log(gamma));
        const double got = weighted_evolution(sys, gamma, k, l)(0, 0);
        EXPECT_NEAR(got / expected, 1.0, 1e-10) << gamma << " " << k << " " << l;
      }
}

TEST(WeightedEvolution, WeightLaw) {
  std::mt19937_64 rng(9);
  const auto sys = ned::testing::random_table(rng, 2, -10, 10);
  const double gamma = 1.7;
  EXPECT_LE(rel_diff(weighted_evolution(sys, gamma, 8, -4), std::pow(gamma, -12) * evolution(sys, 8, -4)),
            1e-14);
  EXPECT_LE(rel_diff(weighted_system(sys, gamma).transition(3), sys.transition(3) / gamma), 1e-15);
}

TEST(WeightedEvolution, NonpositiveWeight) {
  const auto sys = builtin_example("constant_diag", {2.0});
  for (double gamma : {0.0, -1.0}) {
    try {
      weighted_evolution(sys, gamma, 1, 0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NonpositiveWeight);
    }
  }
}

TEST(Builtin, Constructors) {
  const auto scalar = builtin_example("paper_scalar", {1.0, 0.1});
  EXPECT_EQ(scalar.dimension(), 1);
  EXPECT_NEAR(scalar.transition(3)(0, 0), std::exp(oscillating_exponent(1.0, 0.1, 3)), 1e-15);
  const auto diag = builtin_example("constant_diag", {2.0, 0.5});
  for (long k : {-100L, 0L, 41L}) {
    EXPECT_EQ(diag.transition(k)(0, 0), 2.0);
    EXPECT_EQ(diag.transition(k)(1, 1), 0.5);
    EXPECT_EQ(diag.transition(k)(0, 1), 0.0);
  }
  EXPECT_EQ(builtin_example("paper_2d", {1.0, 0.1}).dimension(), 2);
}

TEST(Builtin, Errors) {
  const auto kind_of = [](const std::string& name, std::vector<double> p) {
    try {
      builtin_example(name, p);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind_of("paper_2d", {0.1, 0.5}), ErrorKind::ParamConstraintViolated);
  EXPECT_EQ(kind_of("paper_scalar", {0.5, 0.1}), ErrorKind::ParamConstraintViolated);
  EXPECT_EQ(kind_of("nope", {}), ErrorKind::UnknownName);
}
