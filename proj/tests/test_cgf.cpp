#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "descent_tails/cgf.hpp"
#include "oracles.hpp"

using namespace descent_tails;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> grid(double lo, double hi, int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(std::min(hi, lo + (hi - lo) * i / (points - 1)));
  return out;
}
}  // namespace

TEST(Cgf, ValuesAtZero) {
  EXPECT_EQ(cgf(0.0), 0.0);
  EXPECT_EQ(cgf_prime(0.0), 0.5);
  EXPECT_DOUBLE_EQ(cgf_second(0.0), 1.0 / 12.0);
}

TEST(Cgf, ReferenceValues) {
  // mpmath at 30 digits
  EXPECT_NEAR(cgf(1.0), 0.541324854612918108978, 1e-15);
  EXPECT_NEAR(cgf(-1.0), -0.458675145387081891022, 1e-15);
  EXPECT_NEAR(cgf_prime(1.0), 0.5819767068693264243850, 1e-15);
  EXPECT_NEAR(cgf_second(2.0), 0.06898458475842238339800, 1e-15);
  EXPECT_NEAR(cgf_prime(30.0), 0.9666666666667602429, 1e-15);
}

TEST(Cgf, MatchesDirectFormulaAwayFromZero) {
  for (double t : {-20.0, -5.0, -1.0, -0.1, 0.1, 1.0, 5.0, 20.0}) {
    EXPECT_NEAR(cgf(t), static_cast<double>(oracle::naive_cgf(t)), 1e-13 * std::max(1.0, std::abs(cgf(t)))) << t;
    EXPECT_NEAR(cgf_prime(t), oracle::naive_cgf_prime(t), 1e-12) << t;
  }
}

TEST(Cgf, LargeArgumentsStayFinite) {
  EXPECT_NEAR(cgf(1000.0), 1000.0 - std::log(1000.0), 1e-12);
  EXPECT_NEAR(cgf(-1000.0), -std::log(1000.0), 1e-12);
  EXPECT_NEAR(cgf_prime(1e4), 1.0, 1e-3);
  EXPECT_NEAR(cgf_prime(-1e4), 0.0, 1e-3);
  EXPECT_GT(cgf_second(700.0), 0.0);
  EXPECT_GT(cgf_second(-700.0), 0.0);
}

TEST(Cgf, SeriesBranchIsContinuous) {
  for (double t : {1e-3, -1e-3}) {
    const double below = std::nextafter(t, 0.0);
    EXPECT_NEAR(cgf(below), cgf(t), 1e-15);
    EXPECT_NEAR(cgf_prime(below), cgf_prime(t), 1e-13);
    EXPECT_NEAR(cgf_second(below), cgf_second(t), 1e-12);
  }
}

TEST(Cgf, MonotoneAndConvexOnGrid) {
  const auto ts = grid(-30.0, 30.0, 1000);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    EXPECT_LT(cgf_prime(ts[i]), cgf_prime(ts[i + 1])) << ts[i];
  }
  for (double t : ts) EXPECT_GT(cgf_second(t), 0.0) << t;
  for (double t : {-5.0, -1.0, 1.0, 5.0}) EXPECT_GT(cgf_second(t), 0.0);
}

TEST(Cgf, DerivativesMatchFiniteDifferences) {
  const double h = 1e-5;
  for (double t : grid(-30.0, 30.0, 1000)) {
    if (std::abs(t) < 1e-2) continue;
    EXPECT_NEAR(cgf_prime(t), (cgf(t + h) - cgf(t - h)) / (2 * h), 1e-5) << t;
    EXPECT_NEAR(cgf_second(t), (cgf_prime(t + h) - cgf_prime(t - h)) / (2 * h), 1e-5) << t;
  }
  EXPECT_NEAR(cgf_prime(1.0), (cgf(1.0 + 1e-6) - cgf(1.0 - 1e-6)) / 2e-6, 1e-6);
  EXPECT_NEAR(cgf_second(2.0), (cgf_prime(2.0 + 1e-6) - cgf_prime(2.0 - 1e-6)) / 2e-6, 1e-6);
}

TEST(Saddlepoint, SymmetryPoint) {
  const RatePoint rp = solve_saddlepoint(0.5);
  EXPECT_EQ(rp.t, 0.0);
  EXPECT_EQ(rp.rate, 0.0);
  EXPECT_DOUBLE_EQ(rp.sigma_sq, 1.0 / 12.0);
}

TEST(Saddlepoint, AgreesWithBisection) {
  for (double x : {0.6, 0.7, 0.8, 0.9, 0.99, 0.3, 0.05}) {
    const double t_ref = oracle::bisect(oracle::naive_cgf_prime, x, -200.3, 200.3);
    const RatePoint rp = solve_saddlepoint(x);
    EXPECT_NEAR(rp.t, t_ref, 1e-9 * std::max(1.0, std::abs(t_ref))) << x;
    EXPECT_NEAR(cgf_prime(rp.t), x, 1e-12);
    EXPECT_NEAR(rp.rate, x * rp.t - cgf(rp.t), 1e-14 * std::max(1.0, std::abs(rp.t)));
  }
}

TEST(Saddlepoint, ReferenceValues) {
  const RatePoint a = solve_saddlepoint(0.7);
  EXPECT_NEAR(a.t, 2.672103855273385544649, 1e-11);
  EXPECT_NEAR(a.rate, 0.2528455630041859762721, 1e-13);
  EXPECT_NEAR(a.sigma_sq, 0.06030521953306503840552, 1e-13);
  const RatePoint b = solve_saddlepoint(0.99);
  EXPECT_NEAR(b.rate, 3.605170185988091368036, 1e-10);
  EXPECT_GT(b.t, 90.0);
}

TEST(Saddlepoint, SignOfT) {
  EXPECT_GT(solve_saddlepoint(0.51).t, 0.0);
  EXPECT_LT(solve_saddlepoint(0.49).t, 0.0);
  EXPECT_GT(solve_saddlepoint(0.51).sigma_sq, 0.0);
}

TEST(Saddlepoint, RoundTripAndRateSymmetry) {
  for (double x : grid(0.01, 0.99, 197)) {
    const RatePoint rp = solve_saddlepoint(x);
    EXPECT_NEAR(cgf_prime(rp.t), x, 1e-10) << x;
    EXPECT_GE(rp.rate, 0.0);
    EXPECT_NEAR(rp.rate, rate_function(1.0 - x), 1e-10) << x;
  }
}

TEST(Saddlepoint, Deterministic) {
  const RatePoint a = solve_saddlepoint(0.731);
  const RatePoint b = solve_saddlepoint(0.731);
  EXPECT_EQ(a.t, b.t);
  EXPECT_EQ(a.rate, b.rate);
  EXPECT_EQ(a.sigma_sq, b.sigma_sq);
}

TEST(Saddlepoint, DomainErrors) {
  EXPECT_THROW(solve_saddlepoint(0.0), std::domain_error);
  EXPECT_THROW(solve_saddlepoint(1.0), std::domain_error);
  EXPECT_THROW(solve_saddlepoint(-0.2), std::domain_error);
  EXPECT_THROW(solve_saddlepoint(std::nan("")), std::domain_error);
}

TEST(ComplexBound, CollapsesAtZeroImaginaryPart) {
  for (double t : {-3.0, 0.5, 2.0}) {
    const RealPartBound b = complex_L_realpart_bound(t, 0.0);
    EXPECT_NEAR(b.lhs, cgf(t), 1e-14);
    EXPECT_NEAR(b.rhs, cgf(t), 1e-14);
  }
}

TEST(ComplexBound, StrictAtReferencePoints) {
  const auto a = complex_L_realpart_bound(1.0, kPi / 2);
  EXPECT_LT(a.lhs, a.rhs);
  const auto b = complex_L_realpart_bound(-2.0, 3.0);
  EXPECT_LT(b.lhs, b.rhs);
  // lhs against direct complex arithmetic
  const std::complex<double> w(1.0, kPi / 2);
  EXPECT_NEAR(a.lhs, std::log(std::abs((std::exp(w) - 1.0) / w)), 1e-14);
}

TEST(ComplexBound, HoldsOnGrid) {
  for (double t : grid(-10.0, 10.0, 100)) {
    for (double v : grid(-kPi, kPi, 100)) {
      const auto b = complex_L_realpart_bound(t, v);
      EXPECT_LE(b.lhs, b.rhs + 1e-12) << t << ' ' << v;
    }
  }
}

TEST(ComplexBound, DomainErrors) {
  EXPECT_THROW(complex_L_realpart_bound(0.0, 1.0), std::domain_error);
  EXPECT_THROW(complex_L_realpart_bound(1.0, 3.2), std::domain_error);
}

TEST(ComplexHelpers, TiltedRatioAndPower) {
  const std::complex<double> w(1.5, 2.0);
  const std::complex<double> direct = ((std::exp(w) - 1.0) / w) / ((std::exp(1.5) - 1.0) / 1.5);
  EXPECT_NEAR(std::abs(tilted_ratio(1.5, 2.0) - direct), 0.0, 1e-15);
  EXPECT_LE(std::abs(tilted_ratio(2.0, kPi)), 1.0);
  const std::complex<double> z = std::polar(0.999, 2.5);
  EXPECT_NEAR(std::abs(integer_power(z, 37) - std::pow(z, 37)), 0.0, 1e-13);
  EXPECT_EQ(integer_power(z, 0), std::complex<double>(1.0, 0.0));
}
