#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "descent_tails/exact.hpp"
#include "descent_tails/level.hpp"
#include "oracles.hpp"

using namespace descent_tails;

TEST(Level, ParsesExactDecimalsAndFractions) {
  EXPECT_EQ(Level::parse("0.7").exact(), mpq_class(7, 10));
  EXPECT_EQ(Level::parse("7/10").exact(), mpq_class(7, 10));
  EXPECT_EQ(Level::parse("7e-1").exact(), mpq_class(7, 10));
  EXPECT_EQ(Level::parse("-0.25").exact(), mpq_class(-1, 4));
  EXPECT_THROW(Level::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Level::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Level::parse(""), std::invalid_argument);
}

TEST(Level, BinaryValueIsExact) {
  // 0.8 in binary64 lies above 4/5, so ceil(800 x) differs.
  EXPECT_EQ(Level(0.8).ceil_scaled(800), 641);
  EXPECT_EQ(Level::parse("0.8").ceil_scaled(800), 640);
  EXPECT_EQ(Level::parse("0.8").ceil_gap(800), 0.0);
  EXPECT_NEAR(Level::parse("0.7").ceil_gap(9), 0.7, 1e-15);  // ceil(6.3) - 6.3
  EXPECT_EQ(Level::parse("1/3").complement().exact(), mpq_class(2, 3));
}

TEST(Level, RoundUpAndLog) {
  const mpq_class third(1, 3);
  const double up = round_up(third);
  EXPECT_GE(mpq_class(up), third);
  EXPECT_LT(mpq_class(std::nextafter(up, 0.0)), third);
  EXPECT_EQ(round_up(mpq_class(1, 4)), 0.25);
  mpz_class big;
  mpz_fac_ui(big.get_mpz_t(), 2000);
  EXPECT_NEAR(log_of(big), std::lgamma(2001.0), 1e-9 * std::lgamma(2001.0));
  EXPECT_EQ(log_of(mpq_class(0)), -INFINITY);
}

TEST(Eulerian, SmallRows) {
  const auto one = eulerian_distribution(1);
  ASSERT_EQ(one.weights().size(), 1u);
  EXPECT_EQ(one.weights()[0], 1);
  const std::vector<mpz_class> three{1, 4, 1};
  EXPECT_EQ(eulerian_distribution(3).weights(), three);
  const std::vector<mpz_class> four{1, 11, 11, 1};
  EXPECT_EQ(eulerian_distribution(4).weights(), four);
}

TEST(Eulerian, MatchesEnumeration) {
  for (int n = 1; n <= 9; ++n) {
    const auto counts = oracle::enumerate_descents(n);
    const auto dist = eulerian_distribution(n);
    for (int k = 0; k < n; ++k) EXPECT_EQ(dist.weights()[static_cast<std::size_t>(k)], counts[static_cast<std::size_t>(k)]);
  }
}

TEST(Eulerian, Invariants) {
  for (int n = 1; n <= 100; ++n) {
    const auto d = eulerian_distribution(n);
    mpz_class sum = 0;
    for (const auto& w : d.weights()) sum += w;
    EXPECT_EQ(sum, d.total());
    EXPECT_EQ(d.weights().front(), 1);
    EXPECT_EQ(d.weights().back(), 1);
    for (int k = 0; k < n; ++k) {
      EXPECT_EQ(d.weights()[static_cast<std::size_t>(k)], d.weights()[static_cast<std::size_t>(n - 1 - k)]);
    }
    EXPECT_EQ(d.mean(), oracle::ratio(n - 1, 2));
    EXPECT_EQ(d.variance(), n == 1 ? mpq_class(0) : oracle::ratio(n + 1, 12)) << n;
  }
}

TEST(Eulerian, SizeCap) {
  EXPECT_THROW(eulerian_distribution(0), std::domain_error);
  EXPECT_THROW(eulerian_distribution(2001), std::out_of_range);
  EXPECT_THROW(eulerian_distribution(51, 50), std::out_of_range);
  EXPECT_NO_THROW(eulerian_distribution(50, 50));
}

TEST(ExactPmf, Examples) {
  EXPECT_EQ(exact_pmf(2, 0), mpq_class(1, 2));
  EXPECT_EQ(exact_pmf(3, 1), oracle::ratio(4, 6));
  EXPECT_EQ(exact_pmf(5, 7), 0);
  EXPECT_EQ(exact_pmf(5, -1), 0);
  for (int n : {1, 7, 40}) {
    const auto d = eulerian_distribution(n);
    mpq_class sum = 0;
    for (int k = 0; k < n; ++k) sum += d.pmf(k);
    EXPECT_EQ(sum, 1);
  }
}

TEST(ExactTail, Examples) {
  EXPECT_EQ(exact_tail(3, Level::parse("2/3")), mpq_class(1, 6));
  EXPECT_EQ(exact_tail(2, Level::parse("0.51")), 0);
  EXPECT_EQ(exact_tail(2, Level::parse("0.49")), mpq_class(1, 2));
  // ceil(9.99) = 10 exceeds the support; the reversal alone is the top atom
  EXPECT_EQ(exact_tail(10, Level::parse("0.999")), 0);
  EXPECT_EQ(exact_tail(10, Level::parse("0.9")), mpq_class(1, 3628800));
  EXPECT_EQ(exact_pmf(10, 9), mpq_class(1, 3628800));
}

TEST(ExactTail, ComplementSymmetry) {
  for (int n = 1; n <= 100; n += 3) {
    const auto d = eulerian_distribution(n);
    for (const char* xs : {"0.1", "0.37", "0.5", "0.61", "0.9"}) {
      const Level x = Level::parse(xs);
      const long c = x.ceil_scaled(n).get_si();
      // P(D >= c) = P(D <= n-1-c) by the palindrome
      EXPECT_EQ(d.tail(x), c >= n ? mpq_class(0) : d.cdf(n - 1 - c)) << n << ' ' << xs;
    }
  }
}

TEST(IrwinHall, Examples) {
  EXPECT_EQ(irwin_hall_interval(2, 1), mpq_class(1, 2));
  EXPECT_EQ(irwin_hall_interval(3, 0), mpq_class(1, 6));
  EXPECT_EQ(irwin_hall_interval(1, 0), 1);
  EXPECT_THROW(irwin_hall_interval(3, 3), std::out_of_range);
  EXPECT_THROW(irwin_hall_interval(3, -1), std::out_of_range);
}

TEST(IrwinHall, TannyEquivalence) {
  for (int n = 1; n <= 30; ++n) {
    const auto d = eulerian_distribution(n);
    for (int k = 0; k < n; ++k) EXPECT_EQ(d.pmf(k), irwin_hall_interval(n, k)) << n << ' ' << k;
  }
}

TEST(ExactLaplace, Examples) {
  for (double t : {-3.0, 0.0, 0.7, 5.0}) EXPECT_NEAR(exact_log_laplace(1, t), 0.0, 1e-15);
  for (double t : {-3.0, 0.7, 5.0}) EXPECT_NEAR(exact_log_laplace(2, t), std::log((1 + std::exp(t)) / 2), 1e-14);
  EXPECT_NEAR(exact_log_laplace(3, 0.0), 0.0, 1e-15);
}

TEST(ExactLaplace, NoOverflowForLargeArguments) {
  const auto d = eulerian_distribution(500);
  const double v = d.log_laplace(10.0);
  EXPECT_TRUE(std::isfinite(v));
  // dominated by the top term k = n-1 plus a few neighbours
  EXPECT_GT(v, d.log_pmf(499) + 10.0 * 499);
}

TEST(ExactLaplace, ComplexAgreesWithDirectSumAndIsPeriodic) {
  const auto counts = oracle::enumerate_descents(8);
  const auto d = eulerian_distribution(8);
  for (double v : {0.0, 0.4, 2.9, -1.3}) {
    const auto ref = oracle::laplace_sum(counts, 0.6L, v);
    const LogComplex got = d.laplace(0.6, v);
    EXPECT_NEAR(got.log_abs, std::log(static_cast<double>(std::abs(ref))), 1e-13);
    const LogComplex shifted = d.laplace(0.6, v + 2.0 * std::numbers::pi);
    EXPECT_NEAR(std::abs(shifted.scaled() - got.scaled()), 0.0, 1e-12);
  }
}
