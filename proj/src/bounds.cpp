#include "corrlearn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

namespace corrlearn {

namespace {

double decay(int N, int M, int B) {
  const double m2 = static_cast<double>(M) * M;
  return std::exp(-2.0 * B * static_cast<double>(B) / (N * m2));
}

void check_grid(int N, int M, int B) {
  if (N < 1 || M < 1) throw std::invalid_argument("need N >= 1 and M >= 1");
  if (B < 0 || static_cast<std::int64_t>(B) > static_cast<std::int64_t>(N) * M) {
    throw std::invalid_argument("need 0 <= B <= N*M");
  }
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double fourth = 0.0;    // central, biased
};

Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  // Shifting by the first sample keeps a constant series at exactly zero
  // spread.
  const double shift = xs.front();
  double shifted_mean = 0.0;
  for (double x : xs) shifted_mean += x - shift;
  shifted_mean /= n;
  Moments m;
  m.mean = shift + shifted_mean;
  double s2 = 0.0;
  double s4 = 0.0;
  for (double x : xs) {
    const double d = (x - shift) - shifted_mean;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  m.variance = xs.size() > 1 ? s2 / (n - 1.0) : 0.0;
  m.fourth = s4 / n;
  return m;
}

}  // namespace

std::int64_t project_sum(std::int64_t Y, double target, std::int64_t B,
                         std::int64_t max_sum) {
  if (B < 0) throw std::invalid_argument("negative budget");
  if (Y < 0) throw std::invalid_argument("negative sum");
  const std::int64_t lo = std::max<std::int64_t>(0, Y - B);
  const std::int64_t hi = std::min(max_sum, Y + B);
  if (lo > hi) throw std::invalid_argument("sum lies outside [0, max_sum]");
  if (target <= static_cast<double>(lo)) return lo;
  if (target >= static_cast<double>(hi)) return hi;
  const auto below = static_cast<std::int64_t>(std::floor(target));
  const std::int64_t above = below + 1;
  // Both candidates are inside [lo, hi] here.
  return (above - target < target - below) ? above : below;
}

double var_bound_abs(int N, int M, int B) {
  check_grid(N, M, B);
  return static_cast<double>(M) * M * decay(N, M, B);
}

double var_bound_ratio_paper(int N, int M, int B) {
  check_grid(N, M, B);
  return 6.0 * M / (5.0 * M + 1.0) * decay(N, M, B);
}

double var_bound_ratio_corrected(int N, int M, int B) {
  const double var_mean = static_cast<double>(M) * (M + 2) / (12.0 * N);
  return var_bound_abs(N, M, B) / var_mean;
}

UniformVariance uniform_variance(int M) {
  if (M < 1) throw std::invalid_argument("need M >= 1");
  const double m = M;
  return {(5.0 * m * m + m) / 6.0, m * (m + 2.0) / 12.0};
}

BoundReport monte_carlo_report(int N, int M, int B, std::int64_t trials,
                               Seed seed) {
  check_grid(N, M, B);
  if (trials < 1000) throw std::invalid_argument("need at least 1000 trials");

  const std::int64_t max_sum = static_cast<std::int64_t>(N) * M;
  const double target = static_cast<double>(max_sum) / 2.0;
  std::vector<double> original(static_cast<std::size_t>(trials));
  std::vector<double> corrected(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    std::int64_t y = 0;
    for (int i = 0; i < N; ++i) {
      y += static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(M) + 1));
    }
    const std::int64_t z = project_sum(y, target, B, max_sum);
    if (std::abs(z - y) > B) {
      throw InvariantViolation("projection moved the sum by more than B");
    }
    original[static_cast<std::size_t>(t)] = static_cast<double>(y) / N;
    corrected[static_cast<std::size_t>(t)] = static_cast<double>(z) / N;
  }

  const Moments mo = moments(original);
  const Moments mc = moments(corrected);
  BoundReport r;
  r.M = M;
  r.N = N;
  r.B = B;
  r.bound_abs = var_bound_abs(N, M, B);
  r.bound_ratio_paper = var_bound_ratio_paper(N, M, B);
  r.empirical_var_original = mo.variance;
  r.empirical_var_corrected = mc.variance;
  r.empirical_ratio = mo.variance > 0.0 ? mc.variance / mo.variance : 0.0;
  r.trials = trials;
  r.var_original_stderr = std::sqrt(
      std::max(0.0, mo.fourth - mo.variance * mo.variance) / static_cast<double>(trials));
  return r;
}

void write_bound_csv_header(std::ostream& out) {
  out << "N,M,B,trials,bound_abs,bound_ratio_paper,var_orig,var_corr,ratio\n";
}

void write_bound_csv_row(std::ostream& out, const BoundReport& r) {
  out << r.N << ',' << r.M << ',' << r.B << ',' << r.trials << ','
      << format_real(r.bound_abs) << ',' << format_real(r.bound_ratio_paper)
      << ',' << format_real(r.empirical_var_original) << ','
      << format_real(r.empirical_var_corrected) << ','
      << format_real(r.empirical_ratio) << '\n';
}

}  // namespace corrlearn
