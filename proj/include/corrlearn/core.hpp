#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrlearn {

/// Outcomes are indexed 0..K-1, K being the number of distinct values.
using Outcome = std::size_t;

/// Raised for malformed experiment configuration or input files.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a requested state space exceeds the solver ceiling.
class CeilingExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a cross-module invariant fails at runtime.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr double kProbabilityTolerance = 1e-12;

/// Probability vector over K >= 2 outcomes.
///
/// Inputs whose sum is within kProbabilityTolerance of one are renormalized;
/// anything further off is rejected.
class Categorical {
 public:
  explicit Categorical(std::vector<double> probs);

  static Categorical uniform(std::size_t k);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](Outcome i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  friend bool operator==(const Categorical&, const Categorical&) = default;

 private:
  std::vector<double> probs_;
};

/// Per-outcome tallies.
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::size_t k) : counts_(k, 0) {}
  explicit CountVector(std::vector<int> counts);

  std::size_t size() const noexcept { return counts_.size(); }
  int operator[](Outcome i) const { return counts_[i]; }
  int& operator[](Outcome i) { return counts_[i]; }
  std::span<const int> counts() const noexcept { return counts_; }
  const std::vector<int>& values() const noexcept { return counts_; }
  int total() const noexcept;

  friend bool operator==(const CountVector&, const CountVector&) = default;
  friend auto operator<=>(const CountVector&, const CountVector&) = default;

 private:
  std::vector<int> counts_;
};

class ObservationSequence {
 public:
  ObservationSequence(std::vector<Outcome> values, std::size_t k);

  std::size_t size() const noexcept { return values_.size(); }
  std::size_t alphabet() const noexcept { return k_; }
  Outcome operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Outcome>& values() const noexcept { return values_; }

  friend bool operator==(const ObservationSequence&,
                         const ObservationSequence&) = default;

 private:
  std::vector<Outcome> values_;
  std::size_t k_;
};

struct Seed {
  std::uint64_t value = 0;
};

/// Counter-keyed SplitMix64 stream. A (seed, stream) pair always yields the
/// same sequence regardless of platform, so trial i of an experiment can be
/// regenerated independently of every other trial.
class Rng {
 public:
  Rng(Seed seed, std::uint64_t stream);

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);
  Outcome categorical(const Categorical& dist) noexcept;

 private:
  std::uint64_t state_;
};

Categorical empirical_estimate(const CountVector& counts);

double l1_error(const Categorical& a, const Categorical& b);

/// l1 distance between counts/n and theta, evaluated as
/// sum_i |c_i - n*theta_i| / n so integral targets stay exact.
double count_l1_error(const CountVector& counts, const Categorical& theta);

ObservationSequence sample_sequence(const Categorical& dist, std::size_t n,
                                    Seed seed, std::uint64_t stream = 0);

CountVector counts_from_sequence(const ObservationSequence& seq);

std::string to_string(const CountVector& counts, char sep = ';');

/// Decimal-dot real with 12 significant digits, as used in every CSV output.
std::string format_real(double value);

}  // namespace corrlearn
