#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace descent_tails {

/// Raised when an adaptive integral cannot meet its tolerance within the
/// panel budget.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace quadrature {

// 15-point Kronrod extension of the 7-point Gauss rule, QUADPACK constants.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kKronrodNodes[1], [3], [5], [7]
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  T value{};
  double error = 0.0;         ///< |K - G|
  double rounding = 0.0;      ///< rounding floor, proportional to abs_integral
  double abs_integral = 0.0;  ///< integral of |f| over the panel, Kronrod rule
};

template <class T, class F>
Panel<T> kronrod_panel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T kronrod{};
  T gauss{};
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < kKronrodNodes.size(); ++i) {
    const double dx = half * kKronrodNodes[i];
    T fsum;
    if (i + 1 == kKronrodNodes.size()) {
      fsum = f(center);
      abs_sum += kKronrodWeights[i] * magnitude(fsum);
    } else {
      const T lo = f(center - dx);
      const T hi = f(center + dx);
      fsum = lo + hi;
      abs_sum += kKronrodWeights[i] * (magnitude(lo) + magnitude(hi));
    }
    kronrod += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  Panel<T> out;
  out.a = a;
  out.b = b;
  out.value = kronrod * half;
  out.abs_integral = abs_sum * std::abs(half);
  // |K - G| is a pessimistic error estimate for smooth integrands. Below
  // the rounding floor further bisection cannot help.
  out.error = magnitude((kronrod - gauss) * half);
  out.rounding = 50.0 * std::numeric_limits<double>::epsilon() * out.abs_integral;
  return out;
}

}  // namespace quadrature

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;         ///< estimated absolute error
  double abs_integral = 0.0;  ///< estimate of the integral of |f|
  int panels = 0;
};

/// Globally adaptive G7K15 integration of f over [a, b].
///
/// Starts from `initial_panels` equal panels and repeatedly bisects the panel
/// with the largest error estimate until the summed estimate is below
/// max(abs_tol, rel_tol |I|), or until it is below the accumulated rounding
/// floor, where bisection stops paying off. The final value is summed in left-to-right
/// panel order, so the result does not depend on the refinement history.
/// Throws NonConvergence when max_panels is reached first.
template <class T, class F>
QuadratureResult<T> integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                                       int max_panels, int initial_panels = 1) {
  using quadrature::Panel;
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tolerances must be positive");
  if (max_panels < 8) throw std::invalid_argument("integrate_adaptive: max_panels must be at least 8");
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("integrate_adaptive: limits must be finite");
  initial_panels = std::clamp(initial_panels, 1, max_panels);

  const auto by_error = [](const Panel<T>& l, const Panel<T>& r) { return l.error < r.error; };
  std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(by_error)> queue(by_error);

  T total{};
  double total_error = 0.0;
  double total_rounding = 0.0;
  const double width = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = i + 1 == initial_panels ? b : a + (i + 1) * width;
    Panel<T> p = quadrature::kronrod_panel<T>(f, lo, hi);
    total += p.value;
    total_error += p.error;
    total_rounding += p.rounding;
    queue.push(std::move(p));
  }

  int panels = initial_panels;
  while (total_error > std::max({abs_tol, rel_tol * quadrature::magnitude(total), total_rounding})) {
    if (panels >= max_panels) {
      throw NonConvergence("integrate_adaptive: tolerance not met within " + std::to_string(max_panels) +
                           " panels (error estimate " + std::to_string(total_error) + ")");
    }
    Panel<T> worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel<T> left = quadrature::kronrod_panel<T>(f, worst.a, mid);
    Panel<T> right = quadrature::kronrod_panel<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_rounding += left.rounding + right.rounding - worst.rounding;
    queue.push(std::move(left));
    queue.push(std::move(right));
    ++panels;
    if (!(total_error >= 0.0) || !std::isfinite(total_error)) {
      // drift from incremental updates, or a non-finite integrand
      total_error = 0.0;
      total_rounding = 0.0;
      std::vector<Panel<T>> all;
      while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
      }
      for (auto& p : all) {
        total_error += p.error;
        total_rounding += p.rounding;
        queue.push(std::move(p));
      }
      if (!std::isfinite(total_error)) throw NonConvergence("integrate_adaptive: integrand is not finite");
    }
  }

  std::vector<Panel<T>> all;
  all.reserve(queue.size());
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel<T>& l, const Panel<T>& r) { return l.a < r.a; });
  QuadratureResult<T> out;
  for (const auto& p : all) {
    out.value += p.value;
    out.error += p.error + p.rounding;
    out.abs_integral += p.abs_integral;
  }
  out.panels = panels;
  return out;
}

}  // namespace descent_tails
