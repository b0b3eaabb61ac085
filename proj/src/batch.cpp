#include "corrlearn/batch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace corrlearn {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr std::uint64_t kEnumerationLimit = 200'000;

void compositions_rec(int remaining, std::size_t index, CountVector& current,
                      const std::function<void(const CountVector&)>& visit) {
  if (index + 1 == current.size()) {
    current[index] = remaining;
    visit(current);
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    current[index] = c;
    compositions_rec(remaining - c, index + 1, current, visit);
  }
}

double unit_gain(double count, double target) {
  return std::abs(count - target);
}

}  // namespace

std::uint64_t composition_count(int n, std::size_t k) {
  if (n < 0 || k == 0) return 0;
  // C(n + k - 1, k - 1) built incrementally; each partial product is itself
  // a binomial coefficient so the division is exact.
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i < k; ++i) {
    const std::uint64_t factor = static_cast<std::uint64_t>(n) + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * factor / i;
  }
  return result;
}

void for_each_composition(int n, std::size_t k,
                          const std::function<void(const CountVector&)>& visit) {
  if (k == 0 || n < 0) return;
  CountVector current(k);
  compositions_rec(n, 0, current, visit);
}

int move_distance(const CountVector& from, const CountVector& to) {
  if (from.size() != to.size()) throw std::invalid_argument("dimension mismatch");
  int moved = 0;
  for (Outcome i = 0; i < from.size(); ++i) {
    moved += std::max(0, from[i] - to[i]);
  }
  return moved;
}

EminResult e_min_enumerate(int n, const Categorical& theta0) {
  if (n < 1) throw std::invalid_argument("e_min needs n >= 1");
  EminResult best{std::numeric_limits<double>::infinity(), CountVector{}};
  for_each_composition(n, theta0.size(), [&](const CountVector& c) {
    const double err = count_l1_error(c, theta0);
    if (err < best.error - kTieTolerance) best = {err, c};
  });
  return best;
}

EminResult e_min_apportion(int n, const Categorical& theta0) {
  if (n < 1) throw std::invalid_argument("e_min needs n >= 1");
  const std::size_t k = theta0.size();
  CountVector c(k);
  std::vector<double> remainder(k);
  int assigned = 0;
  for (Outcome i = 0; i < k; ++i) {
    const double scaled = theta0[i] * n;
    c[i] = static_cast<int>(std::floor(scaled));
    remainder[i] = scaled - c[i];
    assigned += c[i];
  }
  std::vector<Outcome> order(k);
  std::iota(order.begin(), order.end(), Outcome{0});
  std::stable_sort(order.begin(), order.end(), [&](Outcome a, Outcome b) {
    return remainder[a] > remainder[b];
  });
  for (int left = n - assigned, idx = 0; left > 0; --left, ++idx) {
    ++c[order[static_cast<std::size_t>(idx) % k]];
  }
  return {count_l1_error(c, theta0), c};
}

EminResult e_min(int n, const Categorical& theta0) {
  if (composition_count(n, theta0.size()) <= kEnumerationLimit) {
    return e_min_enumerate(n, theta0);
  }
  return e_min_apportion(n, theta0);
}

double attainable_error(const CountVector& counts, const Categorical& theta0,
                        int b) {
  if (theta0.size() != 2 || counts.size() != 2) {
    throw std::domain_error("binomial-only formula");
  }
  if (b < 0) throw std::invalid_argument("negative budget");
  const int n = counts.total();
  double deviation = 0.0;
  for (Outcome i = 0; i < 2; ++i) {
    deviation += std::abs(static_cast<double>(counts[i]) - n * theta0[i]);
  }
  const double reduced = (deviation - 2.0 * b) / n;
  return std::max(reduced, e_min(n, theta0).error);
}

double attainable_error(int n, const Categorical& theta0, int b,
                        const Categorical& theta_hat) {
  if (theta0.size() != 2 || theta_hat.size() != 2) {
    throw std::domain_error("binomial-only formula");
  }
  if (n < 1) throw std::invalid_argument("n must be positive");
  std::vector<int> counts(2);
  for (Outcome i = 0; i < 2; ++i) {
    const double scaled = theta_hat[i] * n;
    counts[i] = static_cast<int>(std::lround(scaled));
    if (std::abs(scaled - counts[i]) > 1e-9) {
      throw std::invalid_argument("theta_hat is not realizable as counts / n");
    }
  }
  if (counts[0] + counts[1] != n) {
    throw std::invalid_argument("theta_hat is not realizable as counts / n");
  }
  return attainable_error(CountVector(std::move(counts)), theta0, b);
}

BatchResult batch_correct_exhaustive(const CountVector& counts,
                                     const Categorical& theta0, int b) {
  if (b < 0) throw std::invalid_argument("negative budget");
  if (counts.size() != theta0.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  BatchResult best{counts, 0, count_l1_error(counts, theta0)};
  bool have_best = false;
  for_each_composition(counts.total(), counts.size(), [&](const CountVector& c) {
    const int moves = move_distance(counts, c);
    if (moves > b) return;
    const double err = count_l1_error(c, theta0);
    if (!have_best || err < best.error - kTieTolerance) {
      best = {c, moves, err};
      have_best = true;
    }
  });
  return best;
}

BatchResult batch_correct_greedy(const CountVector& counts,
                                 const Categorical& theta0, int b) {
  if (b < 0) throw std::invalid_argument("negative budget");
  if (counts.size() != theta0.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  const std::size_t k = counts.size();
  const int n = counts.total();
  std::vector<double> target(k);
  for (Outcome i = 0; i < k; ++i) target[i] = n * theta0[i];

  CountVector c = counts;
  int used = 0;
  while (used < b) {
    double best_gain = kTieTolerance;
    Outcome best_from = k;
    Outcome best_to = k;
    for (Outcome from = 0; from < k; ++from) {
      if (c[from] == 0) continue;
      const double gain_from = unit_gain(c[from], target[from]) -
                               unit_gain(c[from] - 1, target[from]);
      for (Outcome to = 0; to < k; ++to) {
        if (to == from) continue;
        const double gain = gain_from + unit_gain(c[to], target[to]) -
                            unit_gain(c[to] + 1, target[to]);
        if (gain > best_gain) {
          best_gain = gain;
          best_from = from;
          best_to = to;
        }
      }
    }
    if (best_from == k) break;
    --c[best_from];
    ++c[best_to];
    ++used;
  }
  const int moves = move_distance(counts, c);
  return {c, moves, count_l1_error(c, theta0)};
}

BatchResult batch_correct(const CountVector& counts, const Categorical& theta0,
                          int b) {
  if (counts.total() < 1) throw std::invalid_argument("no observations");
  if (composition_count(counts.total(), counts.size()) <= kEnumerationLimit) {
    return batch_correct_exhaustive(counts, theta0, b);
  }
  return batch_correct_greedy(counts, theta0, b);
}

}  // namespace corrlearn
