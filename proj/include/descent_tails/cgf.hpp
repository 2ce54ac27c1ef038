#pragma once

#include <complex>

namespace descent_tails {

/// A complex number carried as (log-modulus, argument) so that huge or tiny
/// moduli survive; `arg` is not reduced to (-pi, pi].
struct LogComplex {
  double log_abs = 0.0;
  double arg = 0.0;

  /// exp(log_abs - log_scale) * e^{i arg}
  std::complex<double> scaled(double log_scale = 0.0) const;
};

/// The asymptotic cumulant generating function of D_n / n,
/// L(t) = log((e^t - 1) / t), continuously extended by L(0) = 0.
/// This is also the log-Laplace transform of a uniform [0,1] variable.
double cgf(double t);

/// L'(t) = 1/(1 - e^{-t}) - 1/t, a strictly increasing bijection onto (0,1)
/// with L'(0) = 1/2.
double cgf_prime(double t);

/// L''(t) = 1/t^2 - 1/(4 sinh^2(t/2)) > 0, with L''(0) = 1/12.
double cgf_second(double t);

/// Saddlepoint data for a level x in (0,1).
struct RatePoint {
  double x = 0.5;
  double t = 0.0;         ///< t_x, the unique root of L'(t) = x
  double rate = 0.0;      ///< I(x) = x t_x - L(t_x)
  double sigma_sq = 1.0 / 12.0;  ///< L''(t_x)

  double sigma() const;
};

/// Solves L'(t) = x to |L'(t_x) - x| <= 1e-12 by safeguarded Newton
/// iterations inside a bisection bracket. Deterministic.
/// Throws std::domain_error unless 0 < x < 1.
RatePoint solve_saddlepoint(double x);

/// Rate function I(x) = sup_t {x t - L(t)}.
double rate_function(double x);

/// C(t) = t^2 L''(t) / (t^2 + pi^2), the curvature constant in the bound
/// Re L(t+iv) <= L(t) - C(t) v^2 / 2 for |v| <= pi.
double complex_curvature(double t);

struct RealPartBound {
  double lhs = 0.0;  ///< Re L(t + iv)
  double rhs = 0.0;  ///< L(t) - C(t) v^2 / 2
};

/// Evaluates both sides of the real-part bound on the complex extension of L.
/// Throws std::domain_error when t == 0 or |v| > pi.
RealPartBound complex_L_realpart_bound(double t, double v);

/// log |e^{t+iv} - 1| and arg(e^{t+iv} - 1), without overflow for large t.
LogComplex log_expm1(double t, double v);

/// ((e^w - 1)/w) / ((e^t - 1)/t) with w = t + iv, for t != 0.
/// Its modulus is at most 1 for |v| <= pi, and the leading term of the
/// Laplace transform is ((e^t - 1)/t)^n times its n-th power.
std::complex<double> tilted_ratio(double t, double v);

/// z^n by binary exponentiation; no principal-log branch is involved.
std::complex<double> integer_power(std::complex<double> z, unsigned long n);

}  // namespace descent_tails
