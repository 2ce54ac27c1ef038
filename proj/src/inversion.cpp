#include "descent_tails/inversion.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "descent_tails/cgf.hpp"
#include "descent_tails/exact.hpp"
#include "descent_tails/laplace.hpp"

namespace descent_tails {

namespace {

constexpr double kPi = std::numbers::pi;

// Panels so that each one spans at most about two periods of e^{-iu(m+n)}.
long oscillation_panels(double a, double b, long frequency) {
  const double count = std::ceil((b - a) * static_cast<double>(frequency) / (4.0 * kPi));
  if (!(count < 1e9)) return std::numeric_limits<long>::max();
  return std::max(1L, static_cast<long>(count));
}

// t^2 e^t / (e^t - 1)^2
double tilt_weight(double t) {
  const double d = -std::expm1(-t);
  return t * t * std::exp(-t) / (d * d);
}

// log of 2 (t^2 + 4c)^{n/2} / (n B^n), which bounds int_{|u|>B} |integrand|
// because |rho(t,u)|^2 <= (t^2 + 4c)/(t^2 + u^2) and |t + iu| >= |u|.
double log_far_bound(int n, double t, double cut) {
  const double c = tilt_weight(t);
  return std::log(2.0) + 0.5 * n * std::log(t * t + 4.0 * c) - std::log(static_cast<double>(n)) -
         n * std::log(cut);
}

double far_cut_for(int n, double t, double target) {
  const double c = tilt_weight(t);
  return std::exp((std::log(2.0) + 0.5 * n * std::log(t * t + 4.0 * c) - std::log(static_cast<double>(n)) -
                   std::log(target)) /
                  n);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
  if (max_panels < 8) throw std::invalid_argument("QuadratureSpec: max_panels must be at least 8");
  if (truncation && !(*truncation > 0.0 && std::isfinite(*truncation))) {
    throw std::invalid_argument("QuadratureSpec: truncation must be positive and finite");
  }
}

double default_truncation(double t) {
  if (!(t > 0.0)) throw std::domain_error("default_truncation: t must be positive");
  return std::sqrt(t * t + 8.0 * tilt_weight(t));
}

std::complex<double> parseval_integrand(int n, long m, double t, double u) {
  const std::complex<double> power = integer_power(tilted_ratio(t, u), static_cast<unsigned long>(n));
  const double phase = std::remainder(u * static_cast<double>(m), 2.0 * kPi);
  return std::polar(1.0, -phase) * power / std::complex<double>(t, u);
}

double TailInversion::error_bound() const { return quadrature_error + truncation_bound; }

TailInversion parseval_tail(int n, const Level& x, const QuadratureSpec& spec) {
  spec.validate();
  if (n < 1) throw std::domain_error("parseval_tail: n must be at least 1");
  if (!(x.exact() > mpq_class(1, 2) && x.exact() < 1)) {
    throw std::domain_error("parseval_tail: level must lie in (1/2, 1), got " + x.str());
  }

  TailInversion out;
  out.n = n;
  out.m = x.ceil_scaled(n).get_si();
  out.t = solve_saddlepoint(x.value()).t;
  const double t = out.t;
  const long m = out.m;
  out.log_scale = n * cgf(t) - t * static_cast<double>(m) - std::log(2.0 * kPi);
  out.core_cut = spec.truncation.value_or(default_truncation(t));

  const auto re_integrand = [n, m, t](double u) { return parseval_integrand(n, m, t, u).real(); };
  const long frequency = m + n;

  const long core_start = oscillation_panels(0.0, out.core_cut, frequency);
  if (core_start > spec.max_panels) throw NonConvergence("parseval_tail: core region needs more than max_panels");
  const auto core = integrate_adaptive<double>(re_integrand, 0.0, out.core_cut, spec.abs_tol / 4.0,
                                               spec.rel_tol / 4.0, spec.max_panels, static_cast<int>(core_start));
  out.core_integral = 2.0 * core.value;

  const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.core_integral)) / 4.0;
  out.far_cut = std::max(out.core_cut, far_cut_for(n, t, target));

  double far_value = 0.0;
  double far_error = 0.0;
  int panels = core.panels;
  if (out.far_cut > out.core_cut) {
    const int budget = spec.max_panels - core.panels;
    const long far_start = oscillation_panels(out.core_cut, out.far_cut, frequency);
    if (budget < 8 || far_start > budget) {
      throw NonConvergence("parseval_tail: the integrand decays too slowly (n = " + std::to_string(n) +
                           "); the far region up to u = " + std::to_string(out.far_cut) +
                           " exceeds the panel budget");
    }
    const auto far = integrate_adaptive<double>(re_integrand, out.core_cut, out.far_cut, target / 2.0,
                                                spec.rel_tol / 4.0, budget, static_cast<int>(far_start));
    far_value = far.value;
    far_error = far.error;
    panels += far.panels;
  }

  out.integral = 2.0 * (core.value + far_value);
  out.panels = panels;
  const double scale = std::exp(out.log_scale);
  out.value = scale * out.integral;
  out.log_value = out.integral > 0.0 ? out.log_scale + std::log(out.integral)
                                     : -std::numeric_limits<double>::infinity();
  out.quadrature_error = scale * 2.0 * (core.error + far_error);
  out.truncation_bound = std::exp(out.log_scale + log_far_bound(n, t, out.far_cut));
  return out;
}

bool PmfInversion::contains(double p) const { return std::abs(p - value) <= error_bar; }

PmfInversion fourier_pmf(int n, long k, double t, const QuadratureSpec& spec, std::optional<double> epsilon) {
  spec.validate();
  if (n < 1 || n > kDefaultSizeCap) throw std::domain_error("fourier_pmf: n out of range");
  if (k < 0 || k >= n) throw std::out_of_range("fourier_pmf: k must lie in 0..n-1");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("fourier_pmf: t must be positive");

  PmfInversion out;
  out.n = n;
  out.k = k;
  out.t = t;
  out.epsilon = epsilon.value_or(std::pow(static_cast<double>(n), -0.75));
  if (!(out.epsilon > 0.0 && out.epsilon < kPi)) throw std::domain_error("fourier_pmf: epsilon must lie in (0, pi)");

  const double log_leading = log_leading_term(n, t);
  out.log_scale = log_leading - t * static_cast<double>(k) - std::log(2.0 * kPi);
  const double cut = kPi - out.epsilon;

  // leading(t+iv) / leading(t)
  const auto normalized_leading = [n, t](double v) {
    return tilted_ratio(-t, -v) * integer_power(tilted_ratio(t, v), static_cast<unsigned long>(n));
  };
  const auto main = [&](double v) {
    const double phase = std::remainder(v * static_cast<double>(k), 2.0 * kPi);
    return (normalized_leading(v) * std::polar(1.0, -phase)).real();
  };
  const auto envelope = [&](double v) {
    return std::abs(normalized_leading(v)) * std::exp(complex_leading_and_envelope(n, t, v).log_envelope);
  };
  const auto edge = [&](double v) { return std::exp(log_complex_modulus_bound(n, t, v) - log_leading); };

  const int start = static_cast<int>(std::min<long>(oscillation_panels(0.0, cut, k + n), spec.max_panels));
  const auto main_part = integrate_adaptive<double>(main, 0.0, cut, spec.abs_tol, spec.rel_tol, spec.max_panels, start);
  const auto env_part = integrate_adaptive<double>(envelope, 0.0, cut, spec.abs_tol, spec.rel_tol, spec.max_panels, 4);
  const auto edge_part = integrate_adaptive<double>(edge, cut, kPi, spec.abs_tol, spec.rel_tol, spec.max_panels, 1);

  out.integral = 2.0 * main_part.value;
  out.envelope_integral = 2.0 * env_part.value;
  out.edge_integral = 2.0 * edge_part.value;
  out.quadrature_error = 2.0 * (main_part.error + env_part.error + edge_part.error);
  out.panels = main_part.panels + env_part.panels + edge_part.panels;

  const double scale = std::exp(out.log_scale);
  out.value = scale * out.integral;
  out.error_bar = scale * (out.envelope_integral + out.edge_integral + out.quadrature_error);
  return out;
}

}  // namespace descent_tails
