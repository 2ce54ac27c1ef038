#pragma once

#include <gmpxx.h>

#include <vector>

#include "descent_tails/cgf.hpp"
#include "descent_tails/level.hpp"

namespace descent_tails {

inline constexpr int kDefaultSizeCap = 2000;

/// Exact law of D_n, the number of descents of a uniform permutation of
/// size n. weights()[k] is the Eulerian number A(n,k), the count of
/// permutations with exactly k descents, and total() is n!.
///
/// Instances are immutable once built and safe to share between threads.
class ExactDistribution {
 public:
  /// Builds the Eulerian row by the recurrence
  /// A(n,k) = (k+1) A(n-1,k) + (n-k) A(n-1,k-1), keeping one row in memory.
  /// Throws std::domain_error for n < 1 and std::out_of_range for n > cap.
  static ExactDistribution eulerian(int n, int cap = kDefaultSizeCap);

  int size() const { return n_; }
  const std::vector<mpz_class>& weights() const { return weights_; }
  const mpz_class& total() const { return total_; }

  /// P(D_n = k); zero outside 0..n-1.
  mpq_class pmf(long k) const;
  /// P(D_n >= k) as an unreduced count over n!.
  mpz_class count_at_least(const mpz_class& k) const;
  /// P(D_n / n >= x) = sum_{k >= ceil(n x)} P(D_n = k).
  mpq_class tail(const Level& x) const;
  /// P(D_n <= k)
  mpq_class cdf(long k) const;

  mpq_class mean() const;
  mpq_class variance() const;

  /// log P(D_n = k) in binary64 (-inf outside the support).
  double log_pmf(long k) const;

  /// log m_n(t) = log E[exp(t D_n)], summed in log-space with compensation.
  double log_laplace(double t) const;
  /// m_n(t + iv) in log-polar form.
  LogComplex laplace(double t, double v) const;

 private:
  ExactDistribution() = default;

  int n_ = 0;
  std::vector<mpz_class> weights_;
  mpz_class total_;
  std::vector<double> log_pmf_;
};

ExactDistribution eulerian_distribution(int n, int cap = kDefaultSizeCap);

/// P(D_n = k) as an exact rational.
mpq_class exact_pmf(int n, long k);

/// P(D_n / n >= x) as an exact rational.
mpq_class exact_tail(int n, const Level& x);

/// P(k <= S_n < k+1) for the Irwin-Hall sum S_n of n independent uniforms,
/// from the inclusion-exclusion form of its CDF at integer points:
/// n! F_n(y) = sum_{j=0}^{y} (-1)^j C(n,j) (y-j)^n.
/// Throws std::out_of_range unless 0 <= k <= n-1.
mpq_class irwin_hall_interval(int n, long k);

/// log m_n(t), see ExactDistribution::log_laplace.
double exact_log_laplace(int n, double t);

}  // namespace descent_tails
