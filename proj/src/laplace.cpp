#include "descent_tails/laplace.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace descent_tails {

namespace {

namespace bmp = boost::multiprecision;

constexpr double kPi = std::numbers::pi;
constexpr unsigned kDigits = 400;

using Mp = bmp::number<bmp::mpfr_float_backend<kDigits>, bmp::et_off>;

struct MpComplex {
  Mp re;
  Mp im;
};

MpComplex operator*(const MpComplex& a, const MpComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

MpComplex operator/(const MpComplex& a, const MpComplex& b) {
  const Mp den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

MpComplex mp_exp(const Mp& re, const Mp& im) {
  const Mp mag = exp(re);
  return {mag * cos(im), mag * sin(im)};
}

MpComplex mp_power(MpComplex z, unsigned long n) {
  MpComplex result{Mp(1), Mp(0)};
  while (n > 0) {
    if (n & 1UL) result = result * z;
    n >>= 1;
    if (n > 0) z = z * z;
  }
  return result;
}

Mp mp_abs(const MpComplex& z) { return sqrt(z.re * z.re + z.im * z.im); }

Mp from_mpz(const mpz_class& z) {
  Mp out;
  mpfr_set_z(out.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return out;
}

double log_to_double(const Mp& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(log(x));
}

void require_nonzero(double t, const char* where) {
  if (t == 0.0 || !std::isfinite(t)) throw std::domain_error(std::string(where) + ": t must be finite and nonzero");
}

// Sum of p_k e^{(t+iv)k} and of its term moduli, in high precision.
struct PreciseSum {
  MpComplex value;
  Mp abs_sum;
};

PreciseSum precise_sum(const ExactDistribution& dist, double t, double v) {
  const Mp mt(t);
  const Mp mv(v);
  const Mp total = from_mpz(dist.total());
  PreciseSum out{{Mp(0), Mp(0)}, Mp(0)};
  for (int k = 0; k < dist.size(); ++k) {
    const Mp p = from_mpz(dist.weights()[static_cast<std::size_t>(k)]) / total;
    const Mp mag = p * exp(mt * k);
    out.abs_sum += mag;
    if (v == 0.0) {
      out.value.re += mag;
    } else {
      out.value.re += mag * cos(mv * k);
      out.value.im += mag * sin(mv * k);
    }
  }
  return out;
}

// ((1 - e^{-w})/w) ((e^w - 1)/w)^n in high precision.
MpComplex precise_leading(int n, double t, double v) {
  const Mp mt(t);
  const Mp mv(v);
  const MpComplex w{mt, mv};
  const MpComplex ew = mp_exp(mt, mv);
  const MpComplex emw = mp_exp(-mt, -mv);
  const MpComplex head = MpComplex{1 - emw.re, -emw.im} / w;
  const MpComplex base = MpComplex{ew.re - 1, ew.im} / w;
  return head * mp_power(base, static_cast<unsigned long>(n));
}

LaplaceEstimate estimate(const ExactDistribution& dist, double t, double v, double log_envelope) {
  const int n = dist.size();
  const PreciseSum exact = precise_sum(dist, t, v);
  const MpComplex leading = precise_leading(n, t, v);
  const MpComplex ratio = exact.value / leading;
  const MpComplex remainder{ratio.re - 1, ratio.im};

  LaplaceEstimate out;
  out.n = n;
  out.t = t;
  out.v = v;
  out.log_leading = log_to_double(mp_abs(leading));
  out.log_exact = log_to_double(mp_abs(exact.value));
  out.log_abs_remainder = log_to_double(mp_abs(remainder));
  out.log_envelope = log_envelope;
  // Rounding error of the sum relative to |m_n|, widened by cancellation
  // between terms and by a generous safety factor.
  const double cancellation = log_to_double(exact.abs_sum) - out.log_exact;
  out.log_resolution = -static_cast<double>(kDigits) * std::log(10.0) + std::log(n + 1.0) + cancellation +
                       std::log(1e12);
  return out;
}

}  // namespace

double log_leading_term(int n, double t) {
  require_nonzero(t, "log_leading_term");
  if (n < 0) throw std::domain_error("log_leading_term: n must be nonnegative");
  return cgf(-t) + n * cgf(t);
}

double log_remainder_envelope_real(int n, double t) {
  require_nonzero(t, "remainder_envelope_real");
  if (n < 1) throw std::domain_error("remainder_envelope_real: n must be at least 1");
  const double t2 = t * t;
  const double bracket = 1.0 + 1.0 / kPi + (2.0 + n) / std::sqrt(t2 + 4.0 * kPi * kPi);
  return std::log(std::abs(t)) + 1.0 + std::log(bracket) - 0.5 * n * std::log1p(4.0 * kPi * kPi / t2);
}

double remainder_envelope_real(int n, double t) { return std::exp(log_remainder_envelope_real(n, t)); }

double ComplexLeading::envelope() const { return std::exp(log_envelope); }

ComplexLeading complex_leading_and_envelope(int n, double t, double v) {
  require_nonzero(t, "complex_leading_and_envelope");
  if (n < 0) throw std::domain_error("complex_leading_and_envelope: n must be nonnegative");
  if (!(std::abs(v) < kPi)) throw std::domain_error("complex_leading_and_envelope: |v| must be below pi");

  // 1 - e^{-w} = -(e^{-w} - 1)
  const LogComplex head = log_expm1(-t, -v);
  const std::complex<double> ratio = tilted_ratio(t, v);
  const double ratio_abs = std::abs(ratio);
  const std::complex<double> unit_power = integer_power(ratio / ratio_abs, static_cast<unsigned long>(n));

  ComplexLeading out;
  out.leading.log_abs = head.log_abs - std::log(std::hypot(t, v)) + n * cgf(t) + n * std::log(ratio_abs);
  out.leading.arg = head.arg + kPi - std::atan2(v, t) + std::arg(unit_power);

  const double t2 = t * t;
  const double r2 = t2 + v * v;
  const double bracket = 1.0 + 1.0 / kPi + std::sqrt(t2 + 4.0 * kPi * kPi) / (kPi * (kPi - std::abs(v)));
  out.log_envelope = 0.5 * std::log(r2) + std::log(bracket) + 0.5 * n * (std::log(r2) - std::log(t2 + kPi * kPi));
  return out;
}

double log_complex_modulus_bound(int n, double t, double v) {
  require_nonzero(t, "complex_modulus_bound");
  if (n < 0) throw std::domain_error("complex_modulus_bound: n must be nonnegative");
  if (!(std::abs(v) <= kPi)) throw std::domain_error("complex_modulus_bound: |v| must not exceed pi");

  const double t2 = t * t;
  const double curvature = cgf_second(t);
  const double first = -0.5 * std::log(t2 + v * v) - n * t2 * curvature / (t2 + kPi * kPi) * v * v / 2.0;
  const double constant = 1.0 + 1.0 / kPi + 2.0 * std::sqrt(t2 + kPi * kPi) / (kPi * kPi - 4.0);
  const double second =
      std::log(constant) - n * 4.0 * t2 * curvature / (kPi * kPi * (t2 + 4.0)) * v * v / 2.0;
  const double top = std::max(first, second);
  const double combined = top + std::log(std::exp(first - top) + std::exp(second - top));
  return log_expm1(-t, -v).log_abs + n * cgf(t) + combined;
}

double LaplaceEstimate::remainder() const { return std::exp(log_abs_remainder); }

double LaplaceEstimate::envelope() const { return std::exp(log_envelope); }

bool LaplaceEstimate::resolved() const { return log_abs_remainder > log_resolution; }

bool LaplaceEstimate::within_envelope() const {
  if (resolved()) return log_abs_remainder <= log_envelope;
  return log_envelope >= log_resolution;
}

LaplaceEstimate laplace_estimate(const ExactDistribution& dist, double t) {
  return estimate(dist, t, 0.0, log_remainder_envelope_real(dist.size(), t));
}

LaplaceEstimate laplace_estimate(const ExactDistribution& dist, double t, double v) {
  const ComplexLeading lead = complex_leading_and_envelope(dist.size(), t, v);
  return estimate(dist, t, v, lead.log_envelope);
}

LogComplex precise_laplace(const ExactDistribution& dist, double t, double v) {
  const PreciseSum sum = precise_sum(dist, t, v);
  return {log_to_double(mp_abs(sum.value)), static_cast<double>(atan2(sum.value.im, sum.value.re))};
}

}  // namespace descent_tails
