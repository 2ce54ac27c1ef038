#pragma once

#include <complex>
#include <optional>

#include "descent_tails/level.hpp"
#include "descent_tails/quadrature.hpp"

namespace descent_tails {

struct QuadratureSpec {
  double abs_tol = 1e-15;
  double rel_tol = 1e-12;
  int max_panels = 200000;
  /// Cut A between the core and the far region of infinite-range integrals,
  /// in units of the imaginary shift u. Defaults to default_truncation(t).
  std::optional<double> truncation;

  /// Throws std::invalid_argument unless tolerances are positive and
  /// max_panels >= 8.
  void validate() const;
};

/// A with A^2 = t^2 + 8 t^2 e^t / (e^t - 1)^2, for t > 0.
double default_truncation(double t);

/// e^{-ium} rho(t,u)^n / (t + iu) with rho(t,u) = ((e^w-1)/w) / ((e^t-1)/t),
/// w = t + iu. Its value at -u is the conjugate of its value at u.
std::complex<double> parseval_integrand(int n, long m, double t, double u);

/// Tail P(D_n / n >= x) by the tilted Parseval integral along Re w = t_x:
///
///   P(S_n >= m) = e^{n L(t) - t m} / (2 pi) * int_R e^{-ium} rho(t,u)^n / (t+iu) du,
///
/// m = ceil(nx), S_n the Irwin-Hall sum (D_n = floor(S_n)). The substitution
/// u = v / (sigma_x sqrt(n)) relates u to the normalized variable v.
struct TailInversion {
  int n = 0;
  long m = 0;                      ///< ceil(n x)
  double t = 0.0;                  ///< t_x
  double value = 0.0;              ///< tail probability (0 after underflow)
  double log_value = 0.0;          ///< log of the tail, -inf if the integral is not positive
  double log_scale = 0.0;          ///< n L(t) - t m - log(2 pi) = -n I(x) - {nx} t_x - log(2 pi)
  double integral = 0.0;           ///< 2 Re int_0^B of the integrand, so value = e^{log_scale} integral
  double core_integral = 0.0;      ///< part over [0, A]
  double quadrature_error = 0.0;   ///< estimated, in probability units
  double truncation_bound = 0.0;   ///< rigorous bound on the omitted |u| > B part, probability units
  double core_cut = 0.0;           ///< A
  double far_cut = 0.0;            ///< B >= A
  int panels = 0;

  /// quadrature_error + truncation_bound
  double error_bound() const;
};

/// Throws std::domain_error unless n >= 1 and 1/2 < x < 1, and
/// NonConvergence when the tolerance cannot be met within max_panels.
TailInversion parseval_tail(int n, const Level& x, const QuadratureSpec& spec = {});

/// P(D_n = k) from
///   P(D_n = k) = e^{-tk} (1/2 pi) int_{-pi}^{pi} m_n(t+iv) e^{-ikv} dv,
/// where m_n(t+iv) is replaced by its leading term on |v| <= pi - eps and
/// the omitted pieces are charged to the error bar: the remainder envelope
/// times the leading modulus on |v| <= pi - eps, and the direct modulus bound
/// on pi - eps <= |v| <= pi. eps defaults to n^{-3/4}.
struct PmfInversion {
  int n = 0;
  long k = 0;
  double t = 0.0;
  double epsilon = 0.0;
  double value = 0.0;
  double error_bar = 0.0;          ///< certified |P(D_n = k) - value| bound
  double log_scale = 0.0;          ///< log(e^{S - tk} / 2 pi), S = log leading term at t
  double integral = 0.0;           ///< 2 Re int_0^{pi-eps} of the normalized leading term
  double envelope_integral = 0.0;  ///< 2 int_0^{pi-eps} |normalized leading| * remainder envelope
  double edge_integral = 0.0;      ///< 2 int_{pi-eps}^{pi} normalized modulus bound
  double quadrature_error = 0.0;   ///< estimated, normalized units
  int panels = 0;

  bool contains(double p) const;
};

/// Throws std::out_of_range unless 0 <= k <= n-1, std::domain_error unless
/// t > 0 and 1 <= n <= kDefaultSizeCap, and NonConvergence on quadrature failure.
PmfInversion fourier_pmf(int n, long k, double t, const QuadratureSpec& spec = {},
                         std::optional<double> epsilon = std::nullopt);

}  // namespace descent_tails
