#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace descent_tails {

/// A threshold level x for the normalized statistic D_n / n.
///
/// The level keeps its exact rational value so that lattice quantities such
/// as ceil(n x) never suffer an off-by-one at points where n x is an integer.
/// A level built from a double is the exact binary64 value of that double
/// (0.7 is then slightly below 7/10); a level parsed from text such as "0.7"
/// or "7/10" is the exact decimal or fraction.
class Level {
 public:
  explicit Level(double x);
  explicit Level(const mpq_class& x);

  /// Parses "0.7", "7/10", "7e-1" or "-0.25" exactly.
  /// Throws std::invalid_argument on malformed text.
  static Level parse(std::string_view text);

  const mpq_class& exact() const { return exact_; }
  double value() const { return value_; }
  std::string str() const;

  /// ceil(n x), exact.
  mpz_class ceil_scaled(long n) const;

  /// {n x} = ceil(n x) - n x, which is 0 when n x is an integer.
  double ceil_gap(long n) const;

  /// 1 - x
  Level complement() const;

 private:
  mpq_class exact_;
  double value_;
};

/// Nearest binary64 at or above q.
double round_up(const mpq_class& q);

/// Natural log of a positive rational, accurate far outside the binary64
/// exponent range. Returns -inf for zero.
double log_of(const mpq_class& q);
double log_of(const mpz_class& z);

}  // namespace descent_tails
