#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "descent_tails/simulate.hpp"

namespace descent_tails {

ChiSquareResult chi_square_test(const std::vector<long>& observed, const std::vector<double>& probabilities) {
  if (observed.size() != probabilities.size()) throw std::invalid_argument("chi_square_test: size mismatch");
  double total = 0.0;
  for (long c : observed) total += static_cast<double>(c);
  if (!(total > 0.0)) throw std::invalid_argument("chi_square_test: no observations");

  ChiSquareResult out;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double p = probabilities[i];
    if (p < 0.0) throw std::invalid_argument("chi_square_test: negative probability");
    if (p == 0.0) {
      if (observed[i] != 0) out.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    const double expected = total * p;
    const double diff = static_cast<double>(observed[i]) - expected;
    out.statistic += diff * diff / expected;
    ++cells;
  }
  out.dof = cells - 1;
  if (std::isinf(out.statistic)) {
    out.p_value = 0.0;
  } else if (out.dof < 1) {
    out.p_value = 1.0;
  } else {
    const boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  }
  return out;
}

KsResult ks_two_sample(std::vector<int> a, std::vector<int> b, double alpha) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_two_sample: alpha must lie in (0, 1)");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  KsResult out;
  while (i < a.size() || j < b.size()) {
    int value;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) value = a[i];
    else value = b[j];
    while (i < a.size() && a[i] == value) ++i;
    while (j < b.size() && b[j] == value) ++j;
    out.statistic = std::max(out.statistic, std::abs(i / na - j / nb));
  }
  out.critical = std::sqrt(-std::log(alpha / 2.0) / 2.0) * std::sqrt((na + nb) / (na * nb));
  out.reject = out.statistic > out.critical;
  return out;
}

}  // namespace descent_tails
