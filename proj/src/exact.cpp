#include "descent_tails/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "compensated_sum.hpp"

namespace descent_tails {

ExactDistribution ExactDistribution::eulerian(int n, int cap) {
  if (n < 1) throw std::domain_error("eulerian_distribution: n must be at least 1");
  if (n > cap) {
    throw std::out_of_range("eulerian_distribution: n = " + std::to_string(n) + " exceeds the size cap " +
                            std::to_string(cap));
  }
  ExactDistribution out;
  out.n_ = n;
  std::vector<mpz_class>& row = out.weights_;
  row.reserve(static_cast<std::size_t>(n));
  row.emplace_back(1);
  for (int m = 2; m <= n; ++m) {
    // Row m-1 has m-1 entries; row m has m. Update from the top so that
    // row[k-1] still holds the previous row when row[k] is rewritten.
    row.emplace_back(0);
    for (int k = m - 1; k >= 0; --k) {
      mpz_class next = row[static_cast<std::size_t>(k)] * static_cast<unsigned long>(k + 1);
      if (k > 0) next += row[static_cast<std::size_t>(k - 1)] * static_cast<unsigned long>(m - k);
      row[static_cast<std::size_t>(k)] = std::move(next);
    }
  }
  mpz_fac_ui(out.total_.get_mpz_t(), static_cast<unsigned long>(n));

  const double log_total = log_of(out.total_);
  out.log_pmf_.reserve(row.size());
  for (const auto& w : row) out.log_pmf_.push_back(log_of(w) - log_total);
  return out;
}

mpq_class ExactDistribution::pmf(long k) const {
  if (k < 0 || k >= n_) return mpq_class(0);
  mpq_class out(weights_[static_cast<std::size_t>(k)], total_);
  out.canonicalize();
  return out;
}

mpz_class ExactDistribution::count_at_least(const mpz_class& k) const {
  mpz_class count = 0;
  if (k >= n_) return count;
  const long start = k <= 0 ? 0L : k.get_si();
  for (long j = start; j < n_; ++j) count += weights_[static_cast<std::size_t>(j)];
  return count;
}

mpq_class ExactDistribution::tail(const Level& x) const {
  mpq_class out(count_at_least(x.ceil_scaled(n_)), total_);
  out.canonicalize();
  return out;
}

mpq_class ExactDistribution::cdf(long k) const {
  mpz_class count = 0;
  const long last = std::min<long>(k, n_ - 1);
  for (long j = 0; j <= last; ++j) count += weights_[static_cast<std::size_t>(j)];
  mpq_class out(count, total_);
  out.canonicalize();
  return out;
}

mpq_class ExactDistribution::mean() const {
  mpz_class first = 0;
  for (int k = 0; k < n_; ++k) first += weights_[static_cast<std::size_t>(k)] * static_cast<unsigned long>(k);
  mpq_class out(first, total_);
  out.canonicalize();
  return out;
}

mpq_class ExactDistribution::variance() const {
  mpz_class second = 0;
  for (int k = 0; k < n_; ++k) {
    second += weights_[static_cast<std::size_t>(k)] * static_cast<unsigned long>(k) * static_cast<unsigned long>(k);
  }
  mpq_class raw(second, total_);
  raw.canonicalize();
  const mpq_class mu = mean();
  return raw - mu * mu;
}

double ExactDistribution::log_pmf(long k) const {
  if (k < 0 || k >= n_) return -std::numeric_limits<double>::infinity();
  return log_pmf_[static_cast<std::size_t>(k)];
}

double ExactDistribution::log_laplace(double t) const {
  double shift = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_; ++k) shift = std::max(shift, log_pmf_[static_cast<std::size_t>(k)] + t * k);
  detail::CompensatedSum sum;
  for (int k = 0; k < n_; ++k) sum.add(std::exp(log_pmf_[static_cast<std::size_t>(k)] + t * k - shift));
  return shift + std::log(sum.value());
}

LogComplex ExactDistribution::laplace(double t, double v) const {
  double shift = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_; ++k) shift = std::max(shift, log_pmf_[static_cast<std::size_t>(k)] + t * k);
  detail::CompensatedSum re;
  detail::CompensatedSum im;
  for (int k = 0; k < n_; ++k) {
    const double mag = std::exp(log_pmf_[static_cast<std::size_t>(k)] + t * k - shift);
    const double phase = std::remainder(v * k, 2.0 * std::numbers::pi);
    re.add(mag * std::cos(phase));
    im.add(mag * std::sin(phase));
  }
  const std::complex<double> s(re.value(), im.value());
  return {shift + std::log(std::abs(s)), std::arg(s)};
}

ExactDistribution eulerian_distribution(int n, int cap) { return ExactDistribution::eulerian(n, cap); }

mpq_class exact_pmf(int n, long k) {
  if (n < 1) throw std::domain_error("exact_pmf: n must be at least 1");
  if (k < 0 || k >= n) return mpq_class(0);
  return ExactDistribution::eulerian(n).pmf(k);
}

mpq_class exact_tail(int n, const Level& x) { return ExactDistribution::eulerian(n).tail(x); }

mpq_class irwin_hall_interval(int n, long k) {
  if (n < 1) throw std::domain_error("irwin_hall_interval: n must be at least 1");
  if (k < 0 || k >= n) throw std::out_of_range("irwin_hall_interval: k must lie in 0..n-1");

  // n! F_n(y) at an integer point y in 0..n.
  const auto scaled_cdf = [n](long y) {
    mpz_class acc = 0;
    mpz_class binom;
    mpz_class power;
    for (long j = 0; j <= y; ++j) {
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(j));
      mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(y - j), static_cast<unsigned long>(n));
      if (j % 2 == 0) acc += binom * power;
      else acc -= binom * power;
    }
    return acc;
  };

  mpz_class factorial;
  mpz_fac_ui(factorial.get_mpz_t(), static_cast<unsigned long>(n));
  mpq_class out(scaled_cdf(k + 1) - scaled_cdf(k), factorial);
  out.canonicalize();
  return out;
}

double exact_log_laplace(int n, double t) { return ExactDistribution::eulerian(n).log_laplace(t); }

}  // namespace descent_tails
