#pragma once

#include <gmpxx.h>

#include <cmath>
#include <optional>

#include "descent_tails/cgf.hpp"
#include "descent_tails/exact.hpp"
#include "descent_tails/level.hpp"

namespace descent_tails {

// Right-tail estimates for P(D_n / n >= x), x in (1/2, 1). Every function
// returns a natural log; use std::exp (or from_log) to get the probability.
// The lattice gap {nx} = ceil(nx) - nx is taken from the exact level.
// Each function throws std::domain_error outside its own domain.

/// -n I(x) - {nx} t_x - log(sigma_x t_x sqrt(2 pi n)), the sharp
/// large-deviation approximation without its 1 + o(1) factor.
double log_sharp_tail_approx(int n, const Level& x);

/// P(x) = sqrt((t^2+pi^2)/t^2) + (1 + 1/pi + 2 sqrt(t^2+pi^2)/(pi^2-4)) sqrt(pi^2 (t^2+4)/4), t = t_x.
double cid_prefactor(const Level& x);

/// log of P(x) times the sharp approximation; valid for every n >= 1.
double log_cid_bound(int n, const Level& x);

/// Q_n(x) = sqrt(2 + 8e^t/(e^t-1)^2)
///        + (4 sigma t / sqrt(2 pi)) sqrt(1 + 8e^t/(e^t-1)^2) sqrt(n) / (2^{n/2} (n-2)).
/// Requires n > 2.
double qn_prefactor(int n, const Level& x);

/// log of Q_n(x) times the sharp approximation. Requires n > 2.
double log_qn_bound(int n, const Level& x);

/// s_n = sum_{k=2}^n k^2, exactly.
mpz_class azuma_variance_sum(int n);

/// -2 n^4 (x - 1/2)^2 / s_n, the martingale Azuma-Hoeffding bound. Requires n >= 2.
double log_azuma_bound(int n, const Level& x);

/// -n I(x) - {nx} t_x, the Chernoff bound through the Irwin-Hall representation.
double log_chernoff_bound(int n, const Level& x);

inline double from_log(double log_value) { return std::exp(log_value); }

/// All estimates for one (n, x).
struct BoundReport {
  int n = 0;
  Level x{0.75};
  RatePoint rate_point;
  double frac = 0.0;                  ///< {nx}
  std::optional<mpq_class> exact;     ///< exact tail when the size is within the exact cap
  double log_sharp = 0.0;
  double log_cid = 0.0;
  std::optional<double> log_qn;       ///< absent for n <= 2
  std::optional<double> log_azuma;    ///< absent for n < 2
  double log_chernoff = 0.0;

  /// log of the exact tail, -inf when it is zero.
  std::optional<double> log_exact() const;
  /// exact / sharp
  std::optional<double> ratio() const;
  /// Exact tail (rounded up to binary64) is at most every available bound.
  bool bounds_hold() const;
};

/// Builds the report. The exact tail is filled from `dist` when given (it
/// must have size n), else computed when n <= exact_cap.
BoundReport bound_report(int n, const Level& x, const ExactDistribution* dist = nullptr,
                         int exact_cap = kDefaultSizeCap);

/// Left tail P(D_n / n <= y), y in (0, 1/2), expressed through the right
/// tail: P(D_n <= floor(ny)) = P(D_n >= n-1-floor(ny)), which is the event
/// D_n / n >= x for the transferred level x = 1 - y - 1/n.
struct LeftTailReport {
  int n = 0;
  Level y{0.25};
  long threshold = 0;               ///< floor(n y); the event is D_n <= threshold
  long mirrored_threshold = 0;      ///< n - 1 - threshold; the mirrored event is D_n >= this
  Level transferred{0.75};          ///< x = 1 - y - 1/n
  bool certain = false;             ///< threshold >= n-1, so the probability is 1
  std::optional<mpq_class> exact;   ///< P(D_n <= threshold)
  std::optional<BoundReport> right; ///< right-tail report at x, when x lies in (1/2, 1)
};

/// Throws std::domain_error unless 0 < y < 1/2.
LeftTailReport left_tail_transfer(int n, const Level& y, const ExactDistribution* dist = nullptr,
                                  int exact_cap = kDefaultSizeCap);

}  // namespace descent_tails
