#pragma once

#include "corrlearn/core.hpp"

#include <iosfwd>
#include <limits>

namespace corrlearn {

/// Monte-Carlo check of the variance-decrease bound for sums of N i.i.d.
/// Unif{0..M} draws projected by at most B units toward N*M/2.
struct BoundReport {
  int M = 0;
  int N = 0;
  int B = 0;
  double bound_abs = 0.0;
  double bound_ratio_paper = 0.0;
  double empirical_var_original = 0.0;
  double empirical_var_corrected = 0.0;
  double empirical_ratio = 0.0;
  std::int64_t trials = 0;
  /// Standard error of empirical_var_original, sqrt((m4 - s^4) / trials).
  double var_original_stderr = 0.0;
};

/// Integer Z in [Y - B, Y + B] ∩ [0, max_sum] closest to target. Equidistant
/// candidates resolve to the smaller value, so the result depends on Y only
/// through the window.
std::int64_t project_sum(std::int64_t Y, double target, std::int64_t B,
                         std::int64_t max_sum = std::numeric_limits<std::int64_t>::max());

/// M^2 exp(-2B^2 / (N M^2)).
double var_bound_abs(int N, int M, int B);

/// 6M/(5M+1) exp(-2B^2 / (N M^2)), the ratio bound in its published form.
double var_bound_ratio_paper(int N, int M, int B);

/// var_bound_abs divided by the true var[Y/N] = M(M+2)/(12N).
double var_bound_ratio_corrected(int N, int M, int B);

struct UniformVariance {
  double paper_value = 0.0;      // (5M^2 + M) / 6
  double corrected_value = 0.0;  // M(M+2)/12, true variance of Unif{0..M}
};

UniformVariance uniform_variance(int M);

/// Trials are independent streams (seed, trial index), so the report does not
/// depend on evaluation order. Reusing a seed across B values reuses the
/// same uncorrected sums.
BoundReport monte_carlo_report(int N, int M, int B, std::int64_t trials,
                               Seed seed);

/// Header: N,M,B,trials,bound_abs,bound_ratio_paper,var_orig,var_corr,ratio
void write_bound_csv_header(std::ostream& out);
void write_bound_csv_row(std::ostream& out, const BoundReport& report);

}  // namespace corrlearn
