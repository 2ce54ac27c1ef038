#include "descent_tails/cgf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace descent_tails {

namespace {

constexpr double kSeriesCut = 1e-3;
constexpr double kLogSpaceCut = 30.0;
constexpr double kSaddleTolerance = 1e-12;
constexpr double kPi = std::numbers::pi;

// sinh(h) - h without cancellation near 0.
double sinh_minus_identity(double h) {
  if (std::abs(h) > 1.0) return std::sinh(h) - h;
  const double h2 = h * h;
  double term = h * h2 / 6.0;
  double sum = term;
  for (int k = 2; k < 30 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
    term *= h2 / static_cast<double>((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

// (e^{t+iv} - 1) scaled by e^{-max(t,0)}.
std::complex<double> scaled_expm1(double t, double v) {
  const double half_sin = std::sin(0.5 * v);
  const double versine = 2.0 * half_sin * half_sin;  // 1 - cos v
  if (t > 0.0) return {-versine - std::expm1(-t), std::sin(v)};
  return {std::expm1(t) * std::cos(v) - versine, std::exp(t) * std::sin(v)};
}

}  // namespace

std::complex<double> LogComplex::scaled(double log_scale) const {
  return std::polar(std::exp(log_abs - log_scale), arg);
}

double cgf(double t) {
  if (std::abs(t) < kSeriesCut) {
    const double t2 = t * t;
    return t / 2.0 + t2 * (1.0 / 24.0 + t2 * (-1.0 / 2880.0 + t2 / 181440.0));
  }
  if (t > kLogSpaceCut) return t + std::log1p(-std::exp(-t)) - std::log(t);
  if (t < -kLogSpaceCut) return std::log1p(-std::exp(t)) - std::log(-t);
  return std::log(std::expm1(t) / t);
}

double cgf_prime(double t) {
  if (std::abs(t) < kSeriesCut) {
    const double t2 = t * t;
    return 0.5 + t * (1.0 / 12.0 + t2 * (-1.0 / 720.0 + t2 / 30240.0));
  }
  return -1.0 / std::expm1(-t) - 1.0 / t;
}

double cgf_second(double t) {
  if (std::abs(t) < kSeriesCut) {
    const double t2 = t * t;
    return 1.0 / 12.0 + t2 * (-1.0 / 240.0 + t2 / 6048.0);
  }
  const double a = std::abs(t);
  if (a > kLogSpaceCut) {
    const double q = std::exp(-a) / ((1.0 - std::exp(-a)) * (1.0 - std::exp(-a)));
    return 1.0 / (t * t) - q;
  }
  // 1/t^2 - 1/(4 sinh^2 h), h = t/2, rewritten as a product of
  // (sinh h - h)(sinh h + h) to keep the small-t digits.
  const double h = 0.5 * a;
  const double s = std::sinh(h);
  return sinh_minus_identity(h) * (s + h) / (4.0 * h * h * s * s);
}

double RatePoint::sigma() const { return std::sqrt(sigma_sq); }

RatePoint solve_saddlepoint(double x) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("solve_saddlepoint: level must lie in (0,1)");
  RatePoint out;
  out.x = x;
  if (x == 0.5) return out;

  double lo = -100.0;
  double hi = 100.0;
  while (cgf_prime(lo) > x) {
    hi = lo;
    lo *= 2.0;
    if (!std::isfinite(lo)) throw std::domain_error("solve_saddlepoint: level too close to 0");
  }
  while (cgf_prime(hi) < x) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::domain_error("solve_saddlepoint: level too close to 1");
  }

  double t = std::clamp(0.0, lo, hi);
  double best_t = t;
  double best_residual = std::abs(cgf_prime(t) - x);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = cgf_prime(t) - x;
    if (std::abs(f) < best_residual) {
      best_residual = std::abs(f);
      best_t = t;
    }
    if (f == 0.0) break;
    if (f < 0.0) lo = t;
    else hi = t;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) break;
    const double newton = t - f / cgf_second(t);
    t = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
  }
  if (!(best_residual <= kSaddleTolerance)) {
    throw std::runtime_error("solve_saddlepoint: root not resolved to tolerance");
  }
  out.t = best_t;
  out.rate = std::max(0.0, x * best_t - cgf(best_t));
  out.sigma_sq = cgf_second(best_t);
  return out;
}

double rate_function(double x) { return solve_saddlepoint(x).rate; }

double complex_curvature(double t) {
  const double t2 = t * t;
  return t2 * cgf_second(t) / (t2 + kPi * kPi);
}

LogComplex log_expm1(double t, double v) {
  const std::complex<double> s = scaled_expm1(t, v);
  return {std::max(t, 0.0) + std::log(std::abs(s)), std::arg(s)};
}

RealPartBound complex_L_realpart_bound(double t, double v) {
  if (t == 0.0) throw std::domain_error("complex_L_realpart_bound: t must be nonzero");
  if (!(std::abs(v) <= kPi)) throw std::domain_error("complex_L_realpart_bound: |v| must not exceed pi");
  RealPartBound out;
  out.lhs = log_expm1(t, v).log_abs - std::log(std::hypot(t, v));
  out.rhs = cgf(t) - complex_curvature(t) * v * v / 2.0;
  return out;
}

std::complex<double> tilted_ratio(double t, double v) {
  if (t == 0.0) throw std::domain_error("tilted_ratio: t must be nonzero");
  const std::complex<double> num = scaled_expm1(t, v);
  const double den = t > 0.0 ? -std::expm1(-t) : std::expm1(t);
  return (num / den) * (t / std::complex<double>(t, v));
}

std::complex<double> integer_power(std::complex<double> z, unsigned long n) {
  std::complex<double> result(1.0, 0.0);
  while (n > 0) {
    if (n & 1UL) result *= z;
    n >>= 1;
    if (n > 0) z *= z;
  }
  return result;
}

}  // namespace descent_tails
