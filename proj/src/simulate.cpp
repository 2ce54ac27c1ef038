#include "descent_tails/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace descent_tails {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr long kBlock = 1024;

// One step of the chain: given D_k, returns D_{k+1}.
inline int advance(int k, int dk, std::uint64_t word) {
  return dk + (bounded(word, static_cast<std::uint64_t>(k) + 1) < static_cast<std::uint64_t>(k - dk) ? 1 : 0);
}

// Runs body(first, last) over contiguous blocks of [0, count) on up to
// `threads` workers. Blocks are independent of the thread count.
template <class Body>
void parallel_blocks(long count, int threads, Body&& body) {
  const long blocks = (count + kBlock - 1) / kBlock;
  const int workers = static_cast<int>(std::max(1L, std::min<long>(threads, blocks)));
  std::atomic<long> next{0};
  const auto run = [&] {
    for (long b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
      body(b * kBlock, std::min(count, (b + 1) * kBlock));
    }
  };
  if (workers == 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int i = 1; i < workers; ++i) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

int resolve_threads(int threads) { return threads > 0 ? threads : default_thread_count(); }

double lil_scale(int n) { return n >= 3 ? std::sqrt(n / (2.0 * std::log(std::log(static_cast<double>(n))))) : 0.0; }

Estimate mean_estimate(const std::vector<double>& xs) {
  const double count = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / count;
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? sq / (count - 1.0) : 0.0;
  return {mean, std::sqrt(var / count)};
}

// Sample variance, with the large-sample standard error sqrt((m4 - s^4) / N).
Estimate variance_estimate(const std::vector<double>& xs) {
  const double count = static_cast<double>(xs.size());
  const double mean = mean_estimate(xs).value;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double d2 = (x - mean) * (x - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / (count - 1.0);
  const double fourth = m4 / count;
  const double biased = m2 / count;
  return {var, std::sqrt(std::max(0.0, fourth - biased * biased) / count)};
}

Estimate covariance_estimate(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_estimate(a).value;
  const double mb = mean_estimate(b).value;
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
  Estimate e = mean_estimate(prod);
  const double count = static_cast<double>(a.size());
  e.value *= count / (count - 1.0);
  return e;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t path)
    : key_(mix64(mix64(seed + kGolden) ^ (path * kGolden + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::at(std::uint64_t step) const { return mix64(key_ + step * kGolden); }

std::uint64_t bounded(std::uint64_t word, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(word) * bound) >> 64);
}

bool DescentPath::valid() const {
  if (n < 1 || d.size() != static_cast<std::size_t>(n) || d[0] != 0) return false;
  for (int k = 1; k <= n; ++k) {
    const int dk = at(k);
    if (dk < 0 || dk > k - 1) return false;
    if (k < n) {
      const int step = at(k + 1) - dk;
      if (step != 0 && step != 1) return false;
    }
  }
  return true;
}

DescentPath sample_path(int n, std::uint64_t seed, std::uint64_t path) {
  if (n < 1) throw std::domain_error("sample_path: n must be at least 1");
  DescentPath out;
  out.n = n;
  out.seed = seed;
  out.path = path;
  out.d.resize(static_cast<std::size_t>(n));
  const CounterRng rng(seed, path);
  int dk = 0;
  out.d[0] = 0;
  for (int k = 1; k < n; ++k) {
    dk = advance(k, dk, rng.at(static_cast<std::uint64_t>(k)));
    out.d[static_cast<std::size_t>(k)] = dk;
  }
  return out;
}

int sample_endpoint(int n, std::uint64_t seed, std::uint64_t path) {
  if (n < 1) throw std::domain_error("sample_endpoint: n must be at least 1");
  const CounterRng rng(seed, path);
  int dk = 0;
  for (int k = 1; k < n; ++k) dk = advance(k, dk, rng.at(static_cast<std::uint64_t>(k)));
  return dk;
}

int fisher_yates_descents(int n, std::mt19937_64& engine) {
  if (n < 1) throw std::domain_error("fisher_yates_descents: n must be at least 1");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), engine);
  int count = 0;
  for (std::size_t i = 0; i + 1 < perm.size(); ++i) count += perm[i] > perm[i + 1] ? 1 : 0;
  return count;
}

std::vector<int> fisher_yates_sample(int n, std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<int> out(draws);
  for (auto& v : out) v = fisher_yates_descents(n, engine);
  return out;
}

MartingaleStats martingale_stats(const DescentPath& path) {
  if (!path.valid()) throw std::invalid_argument("martingale_stats: invalid path");
  const int n = path.n;
  MartingaleStats out;
  out.m.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const double dk = path.at(k);
    out.m[static_cast<std::size_t>(k - 1)] = k * (dk - 0.5 * (k - 1));
    const double dev = dk / k - 0.5;
    out.qsl_sum += dev * dev;
    if (k < n) out.bracket += (k - dk) * (dk + 1.0);
  }
  out.qsl = n > 1 ? out.qsl_sum / std::log(static_cast<double>(n)) : 0.0;
  out.lil = lil_scale(n) * (static_cast<double>(path.at(n)) / n - 0.5);
  return out;
}

int default_thread_count() {
  if (const char* env = std::getenv("DESCENT_TAILS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

SimulationSummary run_summary(int n, long paths, const std::vector<double>& time_grid, std::uint64_t seed,
                              int threads) {
  if (n < 1) throw std::domain_error("run_summary: n must be at least 1");
  if (paths < 100) throw std::domain_error("run_summary: at least 100 paths are required");
  std::vector<int> grid_index;
  for (double s : time_grid) {
    if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("run_summary: time grid points must lie in (0, 1]");
    const int m = static_cast<int>(std::floor(n * s));
    if (m < 1) throw std::domain_error("run_summary: floor(n s) must be at least 1");
    grid_index.push_back(m);
  }

  const std::size_t count = static_cast<std::size_t>(paths);
  std::vector<double> endpoint(count), martingale(count), bracket(count), qsl(count), lil(count);
  std::vector<std::vector<double>> fclt(grid_index.size(), std::vector<double>(count));
  const double root_n = std::sqrt(static_cast<double>(n));
  const double log_n = std::log(static_cast<double>(n));
  const double lil_factor = lil_scale(n);
  const double n_cubed = static_cast<double>(n) * n * n;

  parallel_blocks(paths, resolve_threads(threads), [&](long first, long last) {
    std::vector<std::pair<int, std::size_t>> marks;
    for (std::size_t g = 0; g < grid_index.size(); ++g) marks.emplace_back(grid_index[g], g);
    std::sort(marks.begin(), marks.end());
    for (long p = first; p < last; ++p) {
      const CounterRng rng(seed, static_cast<std::uint64_t>(p));
      const auto i = static_cast<std::size_t>(p);
      int dk = 0;
      double qsl_sum = 0.25;  // k = 1
      double bracket_sum = 0.0;
      std::size_t mark = 0;
      for (int k = 1;; ++k) {
        while (mark < marks.size() && marks[mark].first == k) {
          fclt[marks[mark].second][i] = root_n * (static_cast<double>(dk) / k - 0.5);
          ++mark;
        }
        if (k == n) break;
        bracket_sum += static_cast<double>(k - dk) * (dk + 1.0);
        dk = advance(k, dk, rng.at(static_cast<std::uint64_t>(k)));
        const double dev = static_cast<double>(dk) / (k + 1) - 0.5;
        qsl_sum += dev * dev;
      }
      endpoint[i] = dk;
      martingale[i] = n * (dk - 0.5 * (n - 1)) / (n * root_n);
      bracket[i] = bracket_sum / n_cubed;
      qsl[i] = n > 1 ? qsl_sum / log_n : 0.0;
      lil[i] = lil_factor * (static_cast<double>(dk) / n - 0.5);
    }
  });

  SimulationSummary out;
  out.n = n;
  out.paths = paths;
  out.seed = seed;
  out.mean = mean_estimate(endpoint);
  out.variance = variance_estimate(endpoint);
  out.martingale = mean_estimate(martingale);
  out.bracket = mean_estimate(bracket);
  out.qsl = mean_estimate(qsl);
  out.lil_mean = mean_estimate(lil);
  out.lil_min = *std::min_element(lil.begin(), lil.end());
  out.lil_max = *std::max_element(lil.begin(), lil.end());
  out.time_grid = time_grid;
  out.fclt_cov.assign(time_grid.size(), std::vector<Estimate>(time_grid.size()));
  for (std::size_t a = 0; a < time_grid.size(); ++a) {
    for (std::size_t b = a; b < time_grid.size(); ++b) {
      out.fclt_cov[a][b] = covariance_estimate(fclt[a], fclt[b]);
      out.fclt_cov[b][a] = out.fclt_cov[a][b];
    }
  }
  return out;
}

std::vector<long> endpoint_histogram(int n, long paths, std::uint64_t seed, int threads) {
  if (n < 1) throw std::domain_error("endpoint_histogram: n must be at least 1");
  if (paths < 0) throw std::domain_error("endpoint_histogram: paths must be nonnegative");
  const long blocks = (paths + kBlock - 1) / kBlock;
  std::vector<std::vector<long>> partial(static_cast<std::size_t>(blocks), std::vector<long>(static_cast<std::size_t>(n)));
  parallel_blocks(paths, resolve_threads(threads), [&](long first, long last) {
    auto& counts = partial[static_cast<std::size_t>(first / kBlock)];
    for (long p = first; p < last; ++p) ++counts[static_cast<std::size_t>(sample_endpoint(n, seed, static_cast<std::uint64_t>(p)))];
  });
  std::vector<long> out(static_cast<std::size_t>(n), 0);
  for (const auto& counts : partial) {
    for (std::size_t k = 0; k < counts.size(); ++k) out[k] += counts[k];
  }
  return out;
}

}  // namespace descent_tails
