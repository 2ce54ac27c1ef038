#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "descent_tails/bounds.hpp"
#include "descent_tails/cgf.hpp"
#include "descent_tails/exact.hpp"
#include "descent_tails/inversion.hpp"
#include "descent_tails/laplace.hpp"
#include "descent_tails/level.hpp"
#include "descent_tails/quadrature.hpp"
#include "descent_tails/simulate.hpp"

namespace py = pybind11;
using namespace descent_tails;

namespace {

// Accepts a decimal or "p/q" string, an int, a fractions.Fraction, or a float.
Level to_level(const py::handle& x) {
  if (py::isinstance<py::str>(x)) return Level::parse(x.cast<std::string>());
  if (py::isinstance<py::float_>(x)) return Level(x.cast<double>());
  if (py::hasattr(x, "numerator") && py::hasattr(x, "denominator")) {
    mpq_class q(py::str(x.attr("numerator")).cast<std::string>() + "/" +
                py::str(x.attr("denominator")).cast<std::string>());
    q.canonicalize();
    return Level(q);
  }
  return Level(x.cast<double>());
}

py::object to_fraction(const mpq_class& q) {
  return py::module_::import("fractions").attr("Fraction")(q.get_str());
}

py::object to_int(const mpz_class& z) { return py::int_(py::str(z.get_str())); }

py::object optional_fraction(const std::optional<mpq_class>& q) {
  return q ? to_fraction(*q) : py::none();
}

QuadratureSpec make_spec(double abs_tol, double rel_tol, int max_panels) {
  QuadratureSpec spec;
  spec.abs_tol = abs_tol;
  spec.rel_tol = rel_tol;
  spec.max_panels = max_panels;
  spec.validate();
  return spec;
}

py::dict estimate(const Estimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["std_error"] = e.std_error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Descent-count tail probabilities: exact law, bounds, inversion and simulation";

  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);

  // cgf
  m.def("cgf", &cgf, py::arg("t"), "L(t) = log((e^t - 1) / t)");
  m.def("cgf_prime", &cgf_prime, py::arg("t"));
  m.def("cgf_second", &cgf_second, py::arg("t"));
  py::class_<RatePoint>(m, "RatePoint")
      .def_readonly("x", &RatePoint::x)
      .def_readonly("t", &RatePoint::t)
      .def_readonly("rate", &RatePoint::rate)
      .def_readonly("sigma_sq", &RatePoint::sigma_sq)
      .def_property_readonly("sigma", &RatePoint::sigma)
      .def("__repr__", [](const RatePoint& r) {
        return "RatePoint(x=" + std::to_string(r.x) + ", t=" + std::to_string(r.t) +
               ", rate=" + std::to_string(r.rate) + ", sigma_sq=" + std::to_string(r.sigma_sq) + ")";
      });
  m.def("solve_saddlepoint", &solve_saddlepoint, py::arg("x"));
  m.def("rate_function", &rate_function, py::arg("x"));
  m.def(
      "complex_L_realpart_bound",
      [](double t, double v) {
        const RealPartBound b = complex_L_realpart_bound(t, v);
        return py::make_tuple(b.lhs, b.rhs);
      },
      py::arg("t"), py::arg("v"), "(Re L(t + iv), L(t) - C(t) v^2 / 2)");

  // exact
  m.def(
      "eulerian_weights",
      [](int n) {
        const auto d = eulerian_distribution(n);
        py::list out;
        for (const auto& w : d.weights()) out.append(to_int(w));
        return out;
      },
      py::arg("n"));
  m.def("exact_pmf", [](int n, long k) { return to_fraction(exact_pmf(n, k)); }, py::arg("n"), py::arg("k"));
  m.def(
      "exact_tail", [](int n, const py::object& x) { return to_fraction(exact_tail(n, to_level(x))); },
      py::arg("n"), py::arg("x"));
  m.def(
      "irwin_hall_interval", [](int n, long k) { return to_fraction(irwin_hall_interval(n, k)); },
      py::arg("n"), py::arg("k"));
  m.def("exact_log_laplace", &exact_log_laplace, py::arg("n"), py::arg("t"));

  // laplace
  m.def("log_leading_term", &log_leading_term, py::arg("n"), py::arg("t"));
  py::class_<LaplaceEstimate>(m, "LaplaceEstimate")
      .def_readonly("n", &LaplaceEstimate::n)
      .def_readonly("t", &LaplaceEstimate::t)
      .def_readonly("v", &LaplaceEstimate::v)
      .def_readonly("log_leading", &LaplaceEstimate::log_leading)
      .def_readonly("log_exact", &LaplaceEstimate::log_exact)
      .def_readonly("log_abs_remainder", &LaplaceEstimate::log_abs_remainder)
      .def_readonly("log_envelope", &LaplaceEstimate::log_envelope)
      .def_property_readonly("remainder", &LaplaceEstimate::remainder)
      .def_property_readonly("envelope", &LaplaceEstimate::envelope)
      .def_property_readonly("resolved", &LaplaceEstimate::resolved)
      .def_property_readonly("within_envelope", &LaplaceEstimate::within_envelope);
  m.def(
      "laplace_estimate",
      [](int n, double t, double v) { return laplace_estimate(eulerian_distribution(n), t, v); },
      py::arg("n"), py::arg("t"), py::arg("v") = 0.0);

  // bounds
  const auto level_fn = [&m](const char* name, double (*fn)(int, const Level&)) {
    m.def(name, [fn](int n, const py::object& x) { return fn(n, to_level(x)); }, py::arg("n"), py::arg("x"));
  };
  level_fn("log_sharp_tail_approx", &log_sharp_tail_approx);
  level_fn("log_cid_bound", &log_cid_bound);
  level_fn("log_qn_bound", &log_qn_bound);
  level_fn("log_azuma_bound", &log_azuma_bound);
  level_fn("log_chernoff_bound", &log_chernoff_bound);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("n", &BoundReport::n)
      .def_property_readonly("x", [](const BoundReport& r) { return r.x.str(); })
      .def_readonly("rate_point", &BoundReport::rate_point)
      .def_readonly("frac", &BoundReport::frac)
      .def_property_readonly("exact", [](const BoundReport& r) { return optional_fraction(r.exact); })
      .def_readonly("log_sharp", &BoundReport::log_sharp)
      .def_readonly("log_cid", &BoundReport::log_cid)
      .def_readonly("log_qn", &BoundReport::log_qn)
      .def_readonly("log_azuma", &BoundReport::log_azuma)
      .def_readonly("log_chernoff", &BoundReport::log_chernoff)
      .def_property_readonly("log_exact", &BoundReport::log_exact)
      .def_property_readonly("ratio", &BoundReport::ratio)
      .def("bounds_hold", &BoundReport::bounds_hold);
  m.def(
      "bound_report",
      [](int n, const py::object& x, int exact_cap) { return bound_report(n, to_level(x), nullptr, exact_cap); },
      py::arg("n"), py::arg("x"), py::arg("exact_cap") = kDefaultSizeCap);

  py::class_<LeftTailReport>(m, "LeftTailReport")
      .def_readonly("n", &LeftTailReport::n)
      .def_property_readonly("y", [](const LeftTailReport& r) { return r.y.str(); })
      .def_readonly("threshold", &LeftTailReport::threshold)
      .def_readonly("mirrored_threshold", &LeftTailReport::mirrored_threshold)
      .def_property_readonly("transferred", [](const LeftTailReport& r) { return r.transferred.str(); })
      .def_readonly("certain", &LeftTailReport::certain)
      .def_property_readonly("exact", [](const LeftTailReport& r) { return optional_fraction(r.exact); })
      .def_readonly("right", &LeftTailReport::right);
  m.def(
      "left_tail_transfer",
      [](int n, const py::object& y, int exact_cap) { return left_tail_transfer(n, to_level(y), nullptr, exact_cap); },
      py::arg("n"), py::arg("y"), py::arg("exact_cap") = kDefaultSizeCap);

  // inversion
  py::class_<TailInversion>(m, "TailInversion")
      .def_readonly("n", &TailInversion::n)
      .def_readonly("m", &TailInversion::m)
      .def_readonly("t", &TailInversion::t)
      .def_readonly("value", &TailInversion::value)
      .def_readonly("log_value", &TailInversion::log_value)
      .def_readonly("quadrature_error", &TailInversion::quadrature_error)
      .def_readonly("truncation_bound", &TailInversion::truncation_bound)
      .def_readonly("core_cut", &TailInversion::core_cut)
      .def_readonly("far_cut", &TailInversion::far_cut)
      .def_readonly("panels", &TailInversion::panels)
      .def_property_readonly("error_bound", &TailInversion::error_bound);
  m.def(
      "parseval_tail",
      [](int n, const py::object& x, double abs_tol, double rel_tol, int max_panels) {
        return parseval_tail(n, to_level(x), make_spec(abs_tol, rel_tol, max_panels));
      },
      py::arg("n"), py::arg("x"), py::arg("abs_tol") = 1e-15, py::arg("rel_tol") = 1e-12,
      py::arg("max_panels") = 200000);

  py::class_<PmfInversion>(m, "PmfInversion")
      .def_readonly("n", &PmfInversion::n)
      .def_readonly("k", &PmfInversion::k)
      .def_readonly("t", &PmfInversion::t)
      .def_readonly("epsilon", &PmfInversion::epsilon)
      .def_readonly("value", &PmfInversion::value)
      .def_readonly("error_bar", &PmfInversion::error_bar)
      .def_readonly("panels", &PmfInversion::panels)
      .def("contains", &PmfInversion::contains, py::arg("p"));
  m.def(
      "fourier_pmf",
      [](int n, long k, double t, std::optional<double> epsilon, double abs_tol, double rel_tol, int max_panels) {
        return fourier_pmf(n, k, t, make_spec(abs_tol, rel_tol, max_panels), epsilon);
      },
      py::arg("n"), py::arg("k"), py::arg("t"), py::arg("epsilon") = py::none(), py::arg("abs_tol") = 1e-15,
      py::arg("rel_tol") = 1e-12, py::arg("max_panels") = 200000);

  // simulate
  m.def(
      "sample_path", [](int n, std::uint64_t seed, std::uint64_t path) { return sample_path(n, seed, path).d; },
      py::arg("n"), py::arg("seed"), py::arg("path") = 0, "D_1, ..., D_n along one path");

  py::class_<SimulationSummary>(m, "SimulationSummary")
      .def_readonly("n", &SimulationSummary::n)
      .def_readonly("paths", &SimulationSummary::paths)
      .def_readonly("seed", &SimulationSummary::seed)
      .def_property_readonly("mean", [](const SimulationSummary& s) { return estimate(s.mean); })
      .def_property_readonly("variance", [](const SimulationSummary& s) { return estimate(s.variance); })
      .def_property_readonly("martingale", [](const SimulationSummary& s) { return estimate(s.martingale); })
      .def_property_readonly("bracket", [](const SimulationSummary& s) { return estimate(s.bracket); })
      .def_property_readonly("qsl", [](const SimulationSummary& s) { return estimate(s.qsl); })
      .def_property_readonly("lil_mean", [](const SimulationSummary& s) { return estimate(s.lil_mean); })
      .def_readonly("lil_min", &SimulationSummary::lil_min)
      .def_readonly("lil_max", &SimulationSummary::lil_max)
      .def_readonly("time_grid", &SimulationSummary::time_grid)
      .def_property_readonly("fclt_cov", [](const SimulationSummary& s) {
        py::list rows;
        for (const auto& row : s.fclt_cov) {
          py::list r;
          for (const auto& e : row) r.append(estimate(e));
          rows.append(r);
        }
        return rows;
      });
  m.def("run_summary", &run_summary, py::arg("n"), py::arg("paths"), py::arg("time_grid") = std::vector<double>{},
        py::arg("seed") = 0, py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("endpoint_histogram", &endpoint_histogram, py::arg("n"), py::arg("paths"), py::arg("seed") = 0,
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
}
