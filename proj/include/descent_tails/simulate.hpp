#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace descent_tails {

// Monte-Carlo view of D_k along k = 1, 2, ..., n: D_1 = 0 and
// D_{k+1} = D_k + xi_{k+1} with xi_{k+1} ~ Bernoulli((k - D_k)/(k + 1)).

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based stream: the word for (seed, path, step) is a pure function
/// of its key, so any path can be replayed alone and paths can be spread over
/// threads without coordination.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t path);
  std::uint64_t at(std::uint64_t step) const;

 private:
  std::uint64_t key_;
};

/// Uniform draw from {0, ..., bound-1} by a 64x64 -> 128 multiply; the bias is
/// below bound / 2^64.
std::uint64_t bounded(std::uint64_t word, std::uint64_t bound);

struct DescentPath {
  int n = 0;
  std::vector<int> d;  ///< d[k-1] = D_k, k = 1..n
  std::uint64_t seed = 0;
  std::uint64_t path = 0;

  int at(int k) const { return d[static_cast<std::size_t>(k - 1)]; }
  /// D_1 = 0, increments in {0,1}, 0 <= D_k <= k-1.
  bool valid() const;
};

/// Throws std::domain_error for n < 1.
DescentPath sample_path(int n, std::uint64_t seed, std::uint64_t path = 0);

/// D_n alone, same stream as sample_path (so it equals sample_path(...).d.back()).
int sample_endpoint(int n, std::uint64_t seed, std::uint64_t path = 0);

/// Descents of one uniform permutation drawn by std::shuffle.
int fisher_yates_descents(int n, std::mt19937_64& engine);

/// `draws` independent Fisher-Yates samples from one mt19937_64 seeded by `seed`.
std::vector<int> fisher_yates_sample(int n, std::size_t draws, std::uint64_t seed);

struct MartingaleStats {
  std::vector<double> m;  ///< M_k = k (D_k - (k-1)/2), k = 1..n
  double bracket = 0.0;   ///< <M>_n = sum_{k=1}^{n-1} (k - D_k)(D_k + 1)
  double qsl_sum = 0.0;   ///< sum_{k=1}^n (D_k/k - 1/2)^2
  double qsl = 0.0;       ///< qsl_sum / log n, 0 when n = 1
  double lil = 0.0;       ///< sqrt(n / (2 log log n)) (D_n/n - 1/2), 0 when n < 3
};

MartingaleStats martingale_stats(const DescentPath& path);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct SimulationSummary {
  int n = 0;
  long paths = 0;
  std::uint64_t seed = 0;
  Estimate mean;          ///< E[D_n]
  Estimate variance;      ///< Var(D_n)
  Estimate martingale;    ///< E[M_n] / n^{3/2}
  Estimate bracket;       ///< E[<M>_n] / n^3
  Estimate qsl;           ///< path average of the QSL statistic
  Estimate lil_mean;
  double lil_min = 0.0;
  double lil_max = 0.0;
  std::vector<double> time_grid;
  /// fclt_cov[i][j] estimates Cov(X_{s_i}, X_{s_j}), X_s = sqrt(n)(D_m/m - 1/2), m = floor(n s)
  std::vector<std::vector<Estimate>> fclt_cov;
};

/// DESCENT_TAILS_THREADS when set to a positive integer, else the hardware
/// concurrency; at least 1.
int default_thread_count();

/// Simulates `paths` independent paths (path indices 0..paths-1). Paths are
/// split into contiguous blocks over threads and reduced in path order, so the
/// result does not depend on the thread count.
/// Throws std::domain_error unless n >= 1, paths >= 100 and every grid point
/// lies in (0, 1] with floor(n s) >= 1.
SimulationSummary run_summary(int n, long paths, const std::vector<double>& time_grid, std::uint64_t seed,
                              int threads = 0);

/// Counts of D_n over `paths` chained samples, indexed 0..n-1.
std::vector<long> endpoint_histogram(int n, long paths, std::uint64_t seed, int threads = 0);

// Goodness-of-fit helpers.

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-square of observed counts against probabilities; cells with
/// zero probability must be empty.
ChiSquareResult chi_square_test(const std::vector<long>& observed, const std::vector<double>& probabilities);

struct KsResult {
  double statistic = 0.0;  ///< sup |F_a - F_b|
  double critical = 0.0;   ///< c(alpha) sqrt((n_a + n_b) / (n_a n_b))
  bool reject = false;
};

/// Two-sample Kolmogorov-Smirnov test at level alpha with the asymptotic
/// critical value c(alpha) = sqrt(-log(alpha/2) / 2). Conservative for
/// discrete samples.
KsResult ks_two_sample(std::vector<int> a, std::vector<int> b, double alpha);

}  // namespace descent_tails
