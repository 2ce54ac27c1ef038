#include "descent_tails/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace descent_tails {

namespace {

constexpr double kPi = std::numbers::pi;

void require_right_level(const Level& x, const char* where) {
  if (!(x.exact() > mpq_class(1, 2) && x.exact() < 1)) {
    throw std::domain_error(std::string(where) + ": level must lie in (1/2, 1), got " + x.str());
  }
}

void require_size(int n, int minimum, const char* where) {
  if (n < minimum) {
    throw std::domain_error(std::string(where) + ": n must be at least " + std::to_string(minimum));
  }
}

// e^t / (e^t - 1)^2 for t > 0
double bernoulli_weight(double t) {
  const double d = -std::expm1(-t);
  return std::exp(-t) / (d * d);
}

// -n I(x) - {nx} t_x
double log_exponential_factor(int n, const Level& x, const RatePoint& rp) {
  return -n * rp.rate - x.ceil_gap(n) * rp.t;
}

// log(sigma_x t_x sqrt(2 pi n))
double log_gaussian_scale(int n, const RatePoint& rp) {
  return std::log(rp.sigma() * rp.t) + 0.5 * std::log(2.0 * kPi * n);
}

bool bound_holds(const mpq_class& exact, double log_bound) {
  if (exact == 0) return true;
  if (log_bound > -700.0) return round_up(exact) <= std::exp(log_bound);
  return log_of(exact) <= log_bound;
}

}  // namespace

double log_sharp_tail_approx(int n, const Level& x) {
  require_right_level(x, "sharp_tail_approx");
  require_size(n, 1, "sharp_tail_approx");
  const RatePoint rp = solve_saddlepoint(x.value());
  return log_exponential_factor(n, x, rp) - log_gaussian_scale(n, rp);
}

double cid_prefactor(const Level& x) {
  require_right_level(x, "cid_prefactor");
  const double t = solve_saddlepoint(x.value()).t;
  const double t2 = t * t;
  const double pi2 = kPi * kPi;
  return std::sqrt((t2 + pi2) / t2) +
         (1.0 + 1.0 / kPi + 2.0 * std::sqrt(t2 + pi2) / (pi2 - 4.0)) * std::sqrt(pi2 * (t2 + 4.0) / 4.0);
}

double log_cid_bound(int n, const Level& x) { return log_sharp_tail_approx(n, x) + std::log(cid_prefactor(x)); }

double qn_prefactor(int n, const Level& x) {
  require_right_level(x, "qn_bound");
  require_size(n, 3, "qn_bound");
  const RatePoint rp = solve_saddlepoint(x.value());
  const double q = 8.0 * bernoulli_weight(rp.t);
  const double lead = std::sqrt(2.0 + q);
  const double log_tail = std::log(4.0 * rp.sigma() * rp.t / std::sqrt(2.0 * kPi)) + 0.5 * std::log1p(q) +
                          0.5 * std::log(static_cast<double>(n)) - 0.5 * n * std::log(2.0) -
                          std::log(n - 2.0);
  return lead + std::exp(log_tail);
}

double log_qn_bound(int n, const Level& x) { return log_sharp_tail_approx(n, x) + std::log(qn_prefactor(n, x)); }

mpz_class azuma_variance_sum(int n) {
  if (n < 1) return 0;
  const mpz_class m(n);
  return m * (m + 1) * (2 * m + 1) / 6 - 1;
}

double log_azuma_bound(int n, const Level& x) {
  require_right_level(x, "azuma_bound");
  require_size(n, 2, "azuma_bound");
  const mpz_class m(n);
  const mpq_class gap = x.exact() - mpq_class(1, 2);
  mpq_class exponent = mpq_class(2 * m * m * m * m) * gap * gap / mpq_class(azuma_variance_sum(n));
  exponent.canonicalize();
  return -exponent.get_d();
}

double log_chernoff_bound(int n, const Level& x) {
  require_right_level(x, "chernoff_bound");
  require_size(n, 1, "chernoff_bound");
  return log_exponential_factor(n, x, solve_saddlepoint(x.value()));
}

std::optional<double> BoundReport::log_exact() const {
  if (!exact) return std::nullopt;
  return log_of(*exact);
}

std::optional<double> BoundReport::ratio() const {
  if (!exact) return std::nullopt;
  return std::exp(log_of(*exact) - log_sharp);
}

bool BoundReport::bounds_hold() const {
  if (!exact) return true;
  bool ok = bound_holds(*exact, log_cid) && bound_holds(*exact, log_chernoff);
  if (log_qn) ok = ok && bound_holds(*exact, *log_qn);
  if (log_azuma) ok = ok && bound_holds(*exact, *log_azuma);
  return ok;
}

BoundReport bound_report(int n, const Level& x, const ExactDistribution* dist, int exact_cap) {
  require_right_level(x, "bound_report");
  require_size(n, 1, "bound_report");
  BoundReport out;
  out.n = n;
  out.x = x;
  out.rate_point = solve_saddlepoint(x.value());
  out.frac = x.ceil_gap(n);

  const double log_exp = log_exponential_factor(n, x, out.rate_point);
  out.log_sharp = log_exp - log_gaussian_scale(n, out.rate_point);
  out.log_cid = out.log_sharp + std::log(cid_prefactor(x));
  if (n > 2) out.log_qn = out.log_sharp + std::log(qn_prefactor(n, x));
  if (n >= 2) out.log_azuma = log_azuma_bound(n, x);
  out.log_chernoff = log_exp;

  if (dist != nullptr) {
    if (dist->size() != n) throw std::invalid_argument("bound_report: distribution size mismatch");
    out.exact = dist->tail(x);
  } else if (n <= exact_cap) {
    out.exact = ExactDistribution::eulerian(n, exact_cap).tail(x);
  }
  return out;
}

LeftTailReport left_tail_transfer(int n, const Level& y, const ExactDistribution* dist, int exact_cap) {
  if (!(y.exact() > 0 && y.exact() < mpq_class(1, 2))) {
    throw std::domain_error("left_tail_transfer: level must lie in (0, 1/2), got " + y.str());
  }
  require_size(n, 1, "left_tail_transfer");

  LeftTailReport out;
  out.n = n;
  out.y = y;
  const mpq_class scaled = y.exact() * n;
  mpz_class floor_scaled;
  mpz_fdiv_q(floor_scaled.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  out.threshold = floor_scaled.get_si();
  out.mirrored_threshold = n - 1 - out.threshold;
  out.certain = out.threshold >= n - 1;
  out.transferred = Level(mpq_class(1 - y.exact() - mpq_class(1, n)));

  std::optional<ExactDistribution> owned;
  if (dist == nullptr && n <= exact_cap) {
    owned = ExactDistribution::eulerian(n, exact_cap);
    dist = &*owned;
  }
  if (dist != nullptr) {
    if (dist->size() != n) throw std::invalid_argument("left_tail_transfer: distribution size mismatch");
    out.exact = dist->cdf(out.threshold);
  }
  if (out.certain) out.exact = mpq_class(1);

  const mpq_class& x = out.transferred.exact();
  if (x > mpq_class(1, 2) && x < 1) out.right = bound_report(n, out.transferred, dist, exact_cap);
  return out;
}

}  // namespace descent_tails
