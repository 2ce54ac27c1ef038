#pragma once

#include "descent_tails/cgf.hpp"
#include "descent_tails/exact.hpp"

namespace descent_tails {

// Leading-order behaviour of the Laplace transform m_n(w) = E[exp(w D_n)]:
//
//   m_n(w) = ((1 - e^{-w}) / w) ((e^w - 1) / w)^n (1 + r_n(w)),   w != 0,
//
// together with explicit envelopes on |r_n|. All magnitudes are logs.

/// log of ((1 - e^{-t})/t) ((e^t - 1)/t)^n, i.e. L(-t) + n L(t).
/// Throws std::domain_error at t == 0 or n < 0.
double log_leading_term(int n, double t);

/// log of |t| e (1 + 1/pi + (2+n)/sqrt(t^2 + 4 pi^2)) (1 + 4 pi^2/t^2)^{-n/2}.
/// Requires n >= 1 and t != 0.
double log_remainder_envelope_real(int n, double t);
double remainder_envelope_real(int n, double t);

struct ComplexLeading {
  LogComplex leading;   ///< ((1-e^{-w})/w) ((e^w-1)/w)^n, w = t + iv
  double log_envelope;  ///< log of the bound on |r_n(t + iv)|

  double envelope() const;
};

/// Leading factor on the horizontal line Im w = v together with the envelope
/// sqrt(t^2+v^2) (1 + 1/pi + sqrt(t^2+4pi^2)/(pi(pi-|v|))) ((t^2+v^2)/(t^2+pi^2))^{n/2}.
/// The n-th power is taken by binary exponentiation of a unit complex number,
/// so the argument never passes through a principal logarithm.
/// Throws std::domain_error unless t != 0 and |v| < pi.
ComplexLeading complex_leading_and_envelope(int n, double t, double v);

/// log of the direct bound on |m_n(t + iv)| that stays finite up to |v| = pi:
/// |1-e^{-w}| ((e^t-1)/t)^n [ (t^2+v^2)^{-1/2} exp(-n C(t) v^2/2)
///   + (1 + 1/pi + 2 sqrt(t^2+pi^2)/(pi^2-4)) exp(-n 4 t^2 L''(t) v^2 / (2 pi^2 (t^2+4))) ].
/// Throws std::domain_error unless t != 0 and |v| <= pi.
double log_complex_modulus_bound(int n, double t, double v);

/// Leading term, exact value and realized remainder at one point.
///
/// The realized remainder is evaluated in 400-digit arithmetic from the
/// Eulerian weights, because remainders are routinely far below binary64
/// resolution. `log_resolution` is the log of the absolute accuracy of that
/// evaluation; a remainder below it is reported as unresolved.
struct LaplaceEstimate {
  int n = 0;
  double t = 0.0;
  double v = 0.0;
  double log_leading = 0.0;        ///< log |leading|
  double log_exact = 0.0;          ///< log |m_n(t + iv)|
  double log_abs_remainder = 0.0;  ///< log |r_n(t + iv)|
  double log_envelope = 0.0;
  double log_resolution = 0.0;

  double remainder() const;
  double envelope() const;
  bool resolved() const;
  /// |r_n| <= envelope. Unresolved remainders count as within the envelope
  /// only when the envelope itself lies above the resolution floor.
  bool within_envelope() const;
};

/// Real line, envelope from log_remainder_envelope_real.
LaplaceEstimate laplace_estimate(const ExactDistribution& dist, double t);

/// Horizontal complex line, envelope from complex_leading_and_envelope.
LaplaceEstimate laplace_estimate(const ExactDistribution& dist, double t, double v);

/// m_n(t + iv) evaluated in 400-digit arithmetic, rounded to binary64 in
/// log-polar form. Useful where the double-precision sum would cancel.
LogComplex precise_laplace(const ExactDistribution& dist, double t, double v);

}  // namespace descent_tails
