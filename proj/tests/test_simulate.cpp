#include <gtest/gtest.h>

#include <cmath>

#include "descent_tails/exact.hpp"
#include "descent_tails/simulate.hpp"

using namespace descent_tails;

namespace {
std::vector<double> pmf_row(int n) {
  const auto d = eulerian_distribution(n);
  std::vector<double> p;
  for (int k = 0; k < n; ++k) p.push_back(d.pmf(k).get_d());
  return p;
}
}  // namespace

TEST(Rng, CounterBased) {
  const CounterRng a(42, 7);
  const CounterRng b(42, 7);
  const CounterRng c(42, 8);
  EXPECT_EQ(a.at(100), b.at(100));
  EXPECT_NE(a.at(100), c.at(100));
  EXPECT_NE(a.at(100), a.at(101));
  EXPECT_EQ(bounded(0, 7), 0u);
  EXPECT_EQ(bounded(~0ULL, 7), 6u);
}

TEST(SamplePath, Trivial) {
  const DescentPath p = sample_path(1, 5);
  ASSERT_EQ(p.d.size(), 1u);
  EXPECT_EQ(p.d[0], 0);
  EXPECT_THROW(sample_path(0, 5), std::domain_error);
}

TEST(SamplePath, Reproducible) {
  const DescentPath a = sample_path(500, 11, 3);
  const DescentPath b = sample_path(500, 11, 3);
  EXPECT_EQ(a.d, b.d);
  EXPECT_EQ(sample_endpoint(500, 11, 3), a.d.back());
  EXPECT_NE(sample_path(500, 12, 3).d, a.d);
}

TEST(SamplePath, ValidityFuzz) {
  for (std::uint64_t p = 0; p < 100000; ++p) {
    const int n = 1 + static_cast<int>(p % 40);
    ASSERT_TRUE(sample_path(n, 2024, p).valid()) << p;
  }
  DescentPath bad = sample_path(5, 1);
  bad.d[3] = bad.d[2] + 2;
  EXPECT_FALSE(bad.valid());
}

TEST(SamplePath, TwoIsFair) {
  const auto h = endpoint_histogram(2, 1000000, 31);
  EXPECT_GT(chi_square_test(h, {0.5, 0.5}).p_value, 0.001);
}

TEST(SamplePath, SixWithinFourStandardErrors) {
  const long paths = 1000000;
  const auto h = endpoint_histogram(6, paths, 77);
  const auto p = pmf_row(6);
  for (int k = 0; k < 6; ++k) {
    const double freq = static_cast<double>(h[static_cast<std::size_t>(k)]) / paths;
    const double se = std::sqrt(p[static_cast<std::size_t>(k)] * (1 - p[static_cast<std::size_t>(k)]) / paths);
    EXPECT_LE(std::abs(freq - p[static_cast<std::size_t>(k)]), 4 * se) << k;
  }
}

TEST(SamplePath, ChiSquareAgreementSmallN) {
  for (int n = 2; n <= 8; ++n) {
    const auto h = endpoint_histogram(n, 1000000, 1000 + n);
    EXPECT_GT(chi_square_test(h, pmf_row(n)).p_value, 0.001) << n;
  }
}

TEST(SamplePath, ThreadCountDoesNotChangeResults) {
  EXPECT_EQ(endpoint_histogram(9, 20000, 5, 1), endpoint_histogram(9, 20000, 5, 3));
  const auto a = run_summary(200, 3000, {0.5, 1.0}, 9, 1);
  const auto b = run_summary(200, 3000, {0.5, 1.0}, 9, 4);
  EXPECT_EQ(a.mean.value, b.mean.value);
  EXPECT_EQ(a.fclt_cov[0][1].value, b.fclt_cov[0][1].value);
}

TEST(FisherYates, Trivial) {
  std::mt19937_64 engine(1);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(fisher_yates_descents(1, engine), 0);
}

TEST(FisherYates, ThreeWithinFourStandardErrors) {
  const std::size_t draws = 1000000;
  const auto s = fisher_yates_sample(3, draws, 3);
  std::vector<long> h(3, 0);
  for (int v : s) ++h[static_cast<std::size_t>(v)];
  const std::vector<double> p{1.0 / 6, 4.0 / 6, 1.0 / 6};
  for (int k = 0; k < 3; ++k) {
    const double freq = static_cast<double>(h[static_cast<std::size_t>(k)]) / draws;
    const double se = std::sqrt(p[static_cast<std::size_t>(k)] * (1 - p[static_cast<std::size_t>(k)]) / draws);
    EXPECT_LE(std::abs(freq - p[static_cast<std::size_t>(k)]), 4 * se);
  }
}

TEST(FisherYates, KolmogorovSmirnovAgainstChain) {
  const auto fy = fisher_yates_sample(50, 20000, 8);
  std::vector<int> chain;
  for (std::uint64_t p = 0; p < 20000; ++p) chain.push_back(sample_endpoint(50, 8, p));
  const KsResult ks = ks_two_sample(fy, chain, 0.001);
  EXPECT_NEAR(ks.critical, 1.949 * std::sqrt(2.0 / 20000), 1e-4);
  EXPECT_FALSE(ks.reject) << ks.statistic << " > " << ks.critical;
}

TEST(Diagnostics, ChiSquareAndKsSanity) {
  EXPECT_EQ(chi_square_test({10, 0}, {0.5, 0.0}).dof, 0);
  EXPECT_EQ(chi_square_test({10, 1}, {1.0, 0.0}).p_value, 0.0);
  EXPECT_LT(chi_square_test({900, 100}, {0.5, 0.5}).p_value, 1e-10);
  EXPECT_TRUE(ks_two_sample(std::vector<int>(1000, 0), std::vector<int>(1000, 1), 0.001).reject);
  EXPECT_THROW(ks_two_sample({}, {1}, 0.01), std::invalid_argument);
}

TEST(Martingale, AllAscentsDegenerate) {
  DescentPath p;
  p.n = 12;
  for (int k = 1; k <= 12; ++k) p.d.push_back(k - 1);
  const MartingaleStats s = martingale_stats(p);
  for (int k = 1; k <= 12; ++k) EXPECT_DOUBLE_EQ(s.m[static_cast<std::size_t>(k - 1)], k * (k - 1) / 2.0);
  // (k - D_k)(D_k + 1) = k for D_k = k-1
  EXPECT_DOUBLE_EQ(s.bracket, 66.0);
}

TEST(Martingale, StatsAgreeWithSummaryPipeline) {
  const DescentPath p = sample_path(1000, 4, 0);
  const MartingaleStats s = martingale_stats(p);
  double qsl = 0;
  for (int k = 1; k <= 1000; ++k) qsl += std::pow(static_cast<double>(p.at(k)) / k - 0.5, 2);
  EXPECT_NEAR(s.qsl, qsl / std::log(1000.0), 1e-12);
  EXPECT_NEAR(s.lil, std::sqrt(1000 / (2 * std::log(std::log(1000.0)))) * (p.at(1000) / 1000.0 - 0.5), 1e-12);
}

TEST(Martingale, CenteredAtZero) {
  const auto s = run_summary(1000, 20000, {1.0}, 123);
  EXPECT_LE(std::abs(s.martingale.value), 3 * s.martingale.std_error);
}

TEST(Martingale, IncrementsUncorrelatedWithState) {
  // regression of M_{k+1} - M_k on D_k across paths at fixed k
  const int k = 200;
  const int paths = 50000;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int p = 0; p < paths; ++p) {
    const DescentPath path = sample_path(k + 1, 55, static_cast<std::uint64_t>(p));
    const MartingaleStats s = martingale_stats(path);
    const double x = path.at(k);
    const double y = s.m[static_cast<std::size_t>(k)] - s.m[static_cast<std::size_t>(k - 1)];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double mx = sx / paths, my = sy / paths;
  const double vx = sxx / paths - mx * mx;
  const double slope = (sxy / paths - mx * my) / vx;
  const double resid = syy / paths - my * my - slope * slope * vx;
  const double slope_se = std::sqrt(resid / (paths * vx));
  EXPECT_LE(std::abs(slope), 4 * slope_se) << slope << ' ' << slope_se;
  EXPECT_LE(std::abs(my), 4 * std::sqrt((syy / paths - my * my) / paths));
}

TEST(Martingale, BracketScaling) {
  const int n = 10000;
  const auto s = run_summary(n, 1000, {1.0}, 2718);
  // E<M>_n = sum_{k=1}^{n-1} ((k-1)^2/4 + k - (k+1)/12)
  double expected = 0;
  for (int k = 1; k < n; ++k) expected += (k - 1.0) * (k - 1.0) / 4 + k - (k + 1.0) / 12;
  expected /= static_cast<double>(n) * n * n;
  EXPECT_LE(std::abs(s.bracket.value - expected), 3 * s.bracket.std_error);
  EXPECT_NEAR(s.bracket.value, 1.0 / 12, 1e-3);
}

TEST(Summary, MomentsAtThousand) {
  const auto s = run_summary(1000, 100000, {0.5, 1.0}, 20261017);
  EXPECT_LE(std::abs(s.mean.value - 499.5), 3 * s.mean.std_error);
  EXPECT_LE(std::abs(s.variance.value / (1001.0 / 12) - 1), 0.05);
  EXPECT_GE(s.mean.std_error, 0.0);
  EXPECT_GE(s.variance.std_error, 0.0);
  ASSERT_EQ(s.fclt_cov.size(), 2u);
  EXPECT_EQ(s.fclt_cov[0][1].value, s.fclt_cov[1][0].value);
}

TEST(Summary, FcltCovariance) {
  const auto s = run_summary(10000, 10000, {0.5, 1.0}, 7);
  EXPECT_LE(std::abs(s.fclt_cov[0][1].value - 0.5 / 12), 4 * s.fclt_cov[0][1].std_error);
  // Var X_1 = n Var(D_n/n) = (n+1)/(12 n)
  EXPECT_LE(std::abs(s.fclt_cov[1][1].value - 10001.0 / 120000), 4 * s.fclt_cov[1][1].std_error);
}

TEST(Summary, DomainErrors) {
  EXPECT_THROW(run_summary(100, 99, {1.0}, 1), std::domain_error);
  EXPECT_THROW(run_summary(100, 100, {0.0}, 1), std::domain_error);
  EXPECT_THROW(run_summary(100, 100, {1.5}, 1), std::domain_error);
  EXPECT_THROW(run_summary(10, 100, {0.01}, 1), std::domain_error);
}

TEST(Summary, ThreadEnvironment) {
  setenv("DESCENT_TAILS_THREADS", "3", 1);
  EXPECT_EQ(default_thread_count(), 3);
  setenv("DESCENT_TAILS_THREADS", "zero", 1);
  EXPECT_GE(default_thread_count(), 1);
  unsetenv("DESCENT_TAILS_THREADS");
}
