#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include "descent_tails/bounds.hpp"
#include "descent_tails/cgf.hpp"
#include "descent_tails/exact.hpp"
#include "descent_tails/inversion.hpp"
#include "descent_tails/simulate.hpp"

namespace descent_tails::cli {

namespace {

using Value = std::variant<std::monostate, long long, double, std::string>;

// One output record with a fixed column order.
class Row {
 public:
  explicit Row(const std::vector<std::string>& columns) {
    for (const auto& c : columns) fields_.emplace_back(c, Value{});
  }

  void set(const std::string& key, Value v) {
    for (auto& [k, value] : fields_) {
      if (k == key) {
        value = std::move(v);
        return;
      }
    }
    throw std::logic_error("unknown column " + key);
  }

  bool has(const std::string& key) const {
    return std::any_of(fields_.begin(), fields_.end(), [&](const auto& f) { return f.first == key; });
  }

  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(x);
        else if constexpr (std::is_same_v<T, double>) return format_double(x);
        else return csv_escape(x);
      },
      v);
}

nlohmann::ordered_json json_cell(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) return format_double(x);
          return x;
        } else return x;
      },
      v);
}

void write_rows(std::ostream& out, const std::string& format, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  if (format == "json") {
    for (const auto& row : rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (const auto& [k, v] : row.fields()) obj[k] = json_cell(v);
      out << obj.dump() << '\n';
    }
    return;
  }
  const auto& head = rows.front().fields();
  for (std::size_t i = 0; i < head.size(); ++i) out << (i ? "," : "") << head[i].first;
  out << '\n';
  for (const auto& row : rows) {
    const auto& f = row.fields();
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << csv_cell(f[i].second);
    out << '\n';
  }
}

// A probability given by its log: the value, or "underflow" below the
// normal binary64 range, plus the log companion.
void set_probability(Row& row, const std::string& name, std::optional<double> log_value) {
  if (!log_value) return;
  const double lv = *log_value;
  if (std::isinf(lv) && lv < 0) row.set(name, 0.0);
  else if (lv < std::log(DBL_MIN)) row.set(name, std::string("underflow"));
  else row.set(name, std::exp(lv));
  row.set("log_" + name, lv);
}

void set_exact(Row& row, const std::optional<mpq_class>& exact) {
  if (!exact) return;
  if (*exact == 0) {
    row.set("exact", 0.0);
    row.set("log_exact", -INFINITY);
    return;
  }
  const double lv = log_of(*exact);
  const double d = exact->get_d();
  if (d < DBL_MIN) row.set("exact", std::string("underflow"));
  else row.set("exact", d);
  row.set("log_exact", lv);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "10,20,30", "3:60" and "100:1000:100" forms.
std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    std::size_t used = 0;
    const auto to_int = [&](const std::string& s) {
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
      return v;
    };
    if (parts.size() == 1) {
      out.push_back(to_int(parts[0]));
    } else if (parts.size() == 2 || parts.size() == 3) {
      const int lo = to_int(parts[0]);
      const int hi = to_int(parts[1]);
      const int step = parts.size() == 3 ? to_int(parts[2]) : 1;
      if (step <= 0) throw std::invalid_argument("range step must be positive");
      for (int n = lo; n <= hi; n += step) out.push_back(n);
    } else {
      throw std::invalid_argument("bad size range '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty size list");
  return out;
}

std::vector<Level> parse_levels(const std::string& text) {
  std::vector<Level> out;
  for (const auto& item : split(text, ',')) out.push_back(Level::parse(item));
  if (out.empty()) throw std::invalid_argument("empty level list");
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad grid point '" + item + "'");
  }
  return out;
}

const std::vector<std::string> kBoundNames{"sharp", "cid", "qn", "azuma", "chernoff"};

std::vector<std::string> bound_columns(const std::string& which) {
  std::vector<std::string> cols{"n", "x", "frac", "exact", "log_exact"};
  for (const auto& b : kBoundNames) {
    if (which == "all" || which == b) {
      cols.push_back(b);
      cols.push_back("log_" + b);
    }
  }
  cols.push_back("ratio");
  cols.push_back("status");
  return cols;
}

// Fills a bound row; returns false on a domain error (recorded in status).
bool fill_bound_row(Row& row, int n, const Level& x, const ExactDistribution* dist, int exact_cap) {
  row.set("n", static_cast<long long>(n));
  row.set("x", x.str());
  try {
    const BoundReport r = bound_report(n, x, dist, exact_cap);
    row.set("frac", r.frac);
    set_exact(row, r.exact);
    if (row.has("sharp")) set_probability(row, "sharp", r.log_sharp);
    if (row.has("cid")) set_probability(row, "cid", r.log_cid);
    if (row.has("qn")) set_probability(row, "qn", r.log_qn);
    if (row.has("azuma")) set_probability(row, "azuma", r.log_azuma);
    if (row.has("chernoff")) set_probability(row, "chernoff", r.log_chernoff);
    if (r.exact) row.set("ratio", *r.exact == 0 ? 0.0 : std::exp(log_of(*r.exact) - r.log_sharp));
    row.set("status", std::string(r.bounds_hold() ? "ok" : "bound_violated"));
    return true;
  } catch (const std::domain_error& e) {
    row.set("status", std::string("domain_error: ") + e.what());
    return false;
  }
}

template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(default_thread_count()), count));
  std::atomic<std::size_t> next{0};
  const auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact, approximate and bounded tail probabilities for the number of descents of a random permutation",
               "descent-tails"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string x_text;
  std::string y_text;
  std::string which = "all";
  std::string n_list;
  std::string x_list;
  std::string grid_text = "0.5,1";
  int n = 0;
  long k = -1;
  long paths = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  int exact_cap = kDefaultSizeCap;
  double tol = 1e-12;

  auto* solve = app.add_subcommand("solve", "Saddlepoint, rate and curvature for a level x");
  solve->add_option("--x", x_text, "Level in (0,1)")->required();
  add_format(solve, format);

  auto* exact = app.add_subcommand("exact", "Exact PMF value P(D_n = k) or tail P(D_n/n >= x)");
  exact->add_option("--n", n, "Permutation size")->required();
  auto* k_opt = exact->add_option("--k", k, "Number of descents");
  auto* x_opt = exact->add_option("--x", x_text, "Level");
  k_opt->excludes(x_opt);
  exact->add_option("--exact-cap", exact_cap, "Largest n for the exact law");

  auto* bounds = app.add_subcommand("bounds", "Tail bounds and the sharp approximation at (n, x)");
  bounds->add_option("--n", n, "Permutation size")->required();
  bounds->add_option("--x", x_text, "Level in (1/2,1)");
  bounds->add_option("--y", y_text, "Left-tail level in (0,1/2), transferred to the right tail");
  bounds->add_option("--which", which, "Bound to report")
      ->check(CLI::IsMember({"all", "sharp", "cid", "qn", "azuma", "chernoff"}));
  bounds->add_option("--exact-cap", exact_cap, "Largest n for the exact law");
  add_format(bounds, format);

  auto* invert = app.add_subcommand("invert", "Tail probability by the tilted Parseval integral");
  invert->add_option("--n", n, "Permutation size")->required();
  invert->add_option("--x", x_text, "Level in (1/2,1)")->required();
  invert->add_option("--tol", tol, "Relative tolerance")->check(CLI::PositiveNumber);
  invert->add_option("--exact-cap", exact_cap, "Largest n for the exact comparison");
  add_format(invert, format);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo summary of descent paths");
  simulate->add_option("--n", n, "Horizon")->required();
  simulate->add_option("--paths", paths, "Number of paths (>= 100)");
  simulate->add_option("--seed", seed, "Seed");
  simulate->add_option("--grid", grid_text, "Time grid for the covariance, e.g. 0.25,0.5,1");
  simulate->add_option("--threads", threads, "Worker threads (default: DESCENT_TAILS_THREADS or all cores)");
  add_format(simulate, format);

  auto* table = app.add_subcommand("table", "Bound comparison table over sizes and levels");
  table->add_option("--n-list", n_list, "Sizes, e.g. 10,20,50 or 3:60")->required();
  table->add_option("--x-list", x_list, "Levels, e.g. 0.6,0.7,4/5")->required();
  table->add_option("--exact-cap", exact_cap, "Largest n for the exact law");
  add_format(table, format);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*solve) {
      const double x = Level::parse(x_text).value();
      Row row({"x", "t_x", "rate", "sigma_sq", "status"});
      row.set("x", x);
      int code = 0;
      try {
        const RatePoint rp = solve_saddlepoint(x);
        row.set("t_x", rp.t);
        row.set("rate", rp.rate);
        row.set("sigma_sq", rp.sigma_sq);
        row.set("status", std::string("ok"));
      } catch (const std::domain_error& e) {
        row.set("status", std::string("domain_error: ") + e.what());
        code = 1;
      }
      write_rows(out, format, {row});
      return code;
    }

    if (*exact) {
      if (k_opt->count() == 0 && x_opt->count() == 0) {
        err << "exact: one of --k or --x is required\n";
        return 2;
      }
      const ExactDistribution dist = ExactDistribution::eulerian(n, exact_cap);
      mpz_class count;
      if (k_opt->count() > 0) {
        count = k >= 0 && k < n ? dist.weights()[static_cast<std::size_t>(k)] : mpz_class(0);
      } else {
        count = dist.count_at_least(Level::parse(x_text).ceil_scaled(n));
      }
      const mpq_class q(count, dist.total());
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.6g", mpq_class(q).get_d());
      out << count.get_str() << '/' << dist.total().get_str() << " ≈ " << buf << '\n';
      return 0;
    }

    if (*bounds) {
      if (x_text.empty() == y_text.empty()) {
        err << "bounds: exactly one of --x or --y is required\n";
        return 2;
      }
      if (!y_text.empty()) {
        std::vector<std::string> cols{"n", "y", "threshold", "mirrored_threshold", "transferred_x", "certain",
                                      "exact", "log_exact"};
        for (const auto& b : kBoundNames) {
          if (which == "all" || which == b) {
            cols.push_back(b);
            cols.push_back("log_" + b);
          }
        }
        cols.push_back("status");
        Row row(cols);
        row.set("n", static_cast<long long>(n));
        row.set("y", Level::parse(y_text).str());
        int code = 0;
        try {
          const LeftTailReport r = left_tail_transfer(n, Level::parse(y_text), nullptr, exact_cap);
          row.set("threshold", static_cast<long long>(r.threshold));
          row.set("mirrored_threshold", static_cast<long long>(r.mirrored_threshold));
          row.set("transferred_x", r.transferred.str());
          row.set("certain", static_cast<long long>(r.certain));
          set_exact(row, r.exact);
          if (r.right) {
            if (row.has("sharp")) set_probability(row, "sharp", r.right->log_sharp);
            if (row.has("cid")) set_probability(row, "cid", r.right->log_cid);
            if (row.has("qn")) set_probability(row, "qn", r.right->log_qn);
            if (row.has("azuma")) set_probability(row, "azuma", r.right->log_azuma);
            if (row.has("chernoff")) set_probability(row, "chernoff", r.right->log_chernoff);
          }
          row.set("status", std::string("ok"));
        } catch (const std::domain_error& e) {
          row.set("status", std::string("domain_error: ") + e.what());
          code = 1;
        }
        write_rows(out, format, {row});
        return code;
      }
      Row row(bound_columns(which));
      const bool ok = fill_bound_row(row, n, Level::parse(x_text), nullptr, exact_cap);
      write_rows(out, format, {row});
      return ok ? 0 : 1;
    }

    if (*invert) {
      Row row({"n", "x", "value", "log_value", "quadrature_error", "truncation_bound", "core_cut", "far_cut",
               "panels", "exact", "log_exact", "rel_error", "status"});
      const Level x = Level::parse(x_text);
      row.set("n", static_cast<long long>(n));
      row.set("x", x.str());
      int code = 0;
      try {
        QuadratureSpec spec;
        spec.rel_tol = tol;
        const TailInversion r = parseval_tail(n, x, spec);
        set_probability(row, "value", r.log_value);
        if (r.integral <= 0.0) row.set("value", r.value);
        row.set("quadrature_error", r.quadrature_error);
        row.set("truncation_bound", r.truncation_bound);
        row.set("core_cut", r.core_cut);
        row.set("far_cut", r.far_cut);
        row.set("panels", static_cast<long long>(r.panels));
        if (n <= exact_cap) {
          const mpq_class e = exact_tail(n, x);
          set_exact(row, e);
          if (e != 0) row.set("rel_error", std::expm1(r.log_value - log_of(e)));
        }
        row.set("status", std::string("ok"));
      } catch (const std::domain_error& e) {
        row.set("status", std::string("domain_error: ") + e.what());
        code = 1;
      } catch (const NonConvergence& e) {
        row.set("status", std::string("non_convergence: ") + e.what());
        code = 1;
      }
      write_rows(out, format, {row});
      return code;
    }

    if (*simulate) {
      const std::vector<double> grid = parse_grid(grid_text);
      std::vector<std::string> cols{"n",        "paths",       "seed",     "mean",      "mean_se",   "variance",
                                    "variance_se", "martingale", "martingale_se", "bracket", "bracket_se", "qsl",
                                    "qsl_se",   "lil_mean",    "lil_mean_se", "lil_min", "lil_max"};
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = a; b < grid.size(); ++b) {
          pairs.emplace_back(a, b);
          const std::string tag = "cov_" + format_double(grid[a]) + "_" + format_double(grid[b]);
          cols.push_back(tag);
          cols.push_back(tag + "_se");
        }
      }
      cols.push_back("status");
      Row row(cols);
      row.set("n", static_cast<long long>(n));
      row.set("paths", static_cast<long long>(paths));
      row.set("seed", std::to_string(seed));
      int code = 0;
      try {
        const SimulationSummary s = run_summary(n, paths, grid, seed, threads);
        const auto put = [&](const std::string& name, const Estimate& e) {
          row.set(name, e.value);
          row.set(name + "_se", e.std_error);
        };
        put("mean", s.mean);
        put("variance", s.variance);
        put("martingale", s.martingale);
        put("bracket", s.bracket);
        put("qsl", s.qsl);
        put("lil_mean", s.lil_mean);
        row.set("lil_min", s.lil_min);
        row.set("lil_max", s.lil_max);
        for (const auto& [a, b] : pairs) {
          const std::string tag = "cov_" + format_double(grid[a]) + "_" + format_double(grid[b]);
          put(tag, s.fclt_cov[a][b]);
        }
        row.set("status", std::string("ok"));
      } catch (const std::domain_error& e) {
        row.set("status", std::string("domain_error: ") + e.what());
        code = 1;
      }
      write_rows(out, format, {row});
      return code;
    }

    if (*table) {
      const std::vector<int> sizes = parse_sizes(n_list);
      const std::vector<Level> levels = parse_levels(x_list);
      const auto cols = bound_columns("all");
      std::vector<Row> rows(sizes.size() * levels.size(), Row(cols));
      std::vector<char> ok(rows.size(), 1);
      parallel_for(sizes.size(), [&](std::size_t i) {
        const int size = sizes[i];
        std::optional<ExactDistribution> dist;
        if (size >= 1 && size <= exact_cap) dist = ExactDistribution::eulerian(size, exact_cap);
        for (std::size_t j = 0; j < levels.size(); ++j) {
          const std::size_t r = i * levels.size() + j;
          ok[r] = fill_bound_row(rows[r], size, levels[j], dist ? &*dist : nullptr, exact_cap) ? 1 : 0;
        }
      });
      write_rows(out, format, rows);
      const bool all_ok = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
      if (!all_ok) err << "table: some rows hit domain errors; see the status column\n";
      return all_ok ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace descent_tails::cli
