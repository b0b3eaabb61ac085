#pragma once

#include "corrlearn/core.hpp"

#include <functional>

namespace corrlearn {

struct EminResult {
  double error = 0.0;
  CountVector achiever;
};

/// Smallest l1 error any count vector summing to n can reach against theta0.
/// Uses enumeration when the composition count is small, largest-remainder
/// apportionment otherwise.
EminResult e_min(int n, const Categorical& theta0);

/// Exhaustive variant; lexicographically smallest achiever among ties.
EminResult e_min_enumerate(int n, const Categorical& theta0);

/// Floor every theta0_i * n, then hand the leftover units to the largest
/// fractional parts (lowest index first on ties).
EminResult e_min_apportion(int n, const Categorical& theta0);

/// Best per-sequence error with b corrections, binomial case only:
/// max(||theta0 - theta_hat||_1 - 2b/n, e_min(n, theta0)).
double attainable_error(int n, const Categorical& theta0, int b,
                        const Categorical& theta_hat);
double attainable_error(const CountVector& counts, const Categorical& theta0,
                        int b);

struct BatchResult {
  CountVector corrected_counts;
  int corrections_used = 0;
  double error = 0.0;
};

/// Offline correction: move at most b observations between outcome classes
/// so that the corrected empirical estimate is l1-closest to theta0.
/// Exact; among optimal vectors the lexicographically smallest wins.
BatchResult batch_correct(const CountVector& counts, const Categorical& theta0,
                          int b);

/// Exhaustive search over every count vector with the same total.
BatchResult batch_correct_exhaustive(const CountVector& counts,
                                     const Categorical& theta0, int b);

/// Greedy unit moves from the largest surplus to the largest deficit.
/// Same optimal error as the exhaustive search, but no tie-break guarantee.
BatchResult batch_correct_greedy(const CountVector& counts,
                                 const Categorical& theta0, int b);

/// Number of unit moves between two count vectors with equal totals.
int move_distance(const CountVector& from, const CountVector& to);

/// Calls visit for every length-k vector of nonnegative ints summing to n,
/// in lexicographic order.
void for_each_composition(int n, std::size_t k,
                          const std::function<void(const CountVector&)>& visit);

/// Binomial coefficient C(n + k - 1, k - 1); saturates at UINT64_MAX.
std::uint64_t composition_count(int n, std::size_t k);

}  // namespace corrlearn
