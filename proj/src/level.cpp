#include "descent_tails/level.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace descent_tails {

namespace {

mpq_class parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed level: '" + std::string(text) + "'");
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    long exponent = 0;
    bool exp_digit = false;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      exponent = exponent * 10 + (text[pos] - '0');
      exp_digit = true;
      if (exponent > 100000) throw std::invalid_argument("level exponent out of range");
    }
    if (!exp_digit) throw std::invalid_argument("malformed level: '" + std::string(text) + "'");
    scale += exp_negative ? -exponent : exponent;
  }
  if (pos != text.size()) throw std::invalid_argument("malformed level: '" + std::string(text) + "'");

  mpz_class num(digits, 10);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  mpq_class q = scale >= 0 ? mpq_class(num * pow10) : mpq_class(num, pow10);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

double to_double(const mpq_class& q, mpfr_rnd_t mode) {
  mpfr_t r;
  mpfr_init2(r, 53);
  mpfr_set_q(r, q.get_mpq_t(), mode);
  const double out = mpfr_get_d(r, mode);
  mpfr_clear(r);
  return out;
}

}  // namespace

Level::Level(double x) : value_(x) {
  if (!std::isfinite(x)) throw std::invalid_argument("level must be finite");
  exact_ = mpq_class(x);
}

Level::Level(const mpq_class& x) : exact_(x) {
  exact_.canonicalize();
  value_ = to_double(exact_, MPFR_RNDN);
}

Level Level::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty level");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Level(parse_decimal(text));

  const mpq_class num = parse_decimal(text.substr(0, slash));
  const mpq_class den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("level denominator is zero");
  return Level(mpq_class(num / den));
}

std::string Level::str() const { return exact_.get_str(); }

mpz_class Level::ceil_scaled(long n) const {
  const mpq_class scaled = exact_ * n;
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  return out;
}

double Level::ceil_gap(long n) const {
  const mpq_class gap = mpq_class(ceil_scaled(n)) - exact_ * n;
  return to_double(gap, MPFR_RNDN);
}

Level Level::complement() const { return Level(mpq_class(1 - exact_)); }

double round_up(const mpq_class& q) { return to_double(q, MPFR_RNDU); }

double log_of(const mpz_class& z) {
  if (z < 0) throw std::domain_error("log_of: negative argument");
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

double log_of(const mpq_class& q) {
  if (q < 0) throw std::domain_error("log_of: negative argument");
  if (q == 0) return -std::numeric_limits<double>::infinity();
  return log_of(mpz_class(q.get_num())) - log_of(mpz_class(q.get_den()));
}

}  // namespace descent_tails
