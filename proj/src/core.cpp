#include "corrlearn/core.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace corrlearn {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Categorical::Categorical(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw std::invalid_argument("categorical needs at least two outcomes");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw std::invalid_argument("probability outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("probabilities do not sum to 1");
  }
  if (sum != 1.0) {
    for (double& p : probs_) p /= sum;
  }
}

Categorical Categorical::uniform(std::size_t k) {
  return Categorical(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

CountVector::CountVector(std::vector<int> counts) : counts_(std::move(counts)) {
  for (int c : counts_) {
    if (c < 0) throw std::invalid_argument("negative count");
  }
}

int CountVector::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), 0);
}

ObservationSequence::ObservationSequence(std::vector<Outcome> values,
                                         std::size_t k)
    : values_(std::move(values)), k_(k) {
  for (Outcome v : values_) {
    if (v >= k_) throw std::invalid_argument("observation outside alphabet");
  }
}

Rng::Rng(Seed seed, std::uint64_t stream)
    : state_(splitmix64(seed.value ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

std::uint64_t Rng::next() noexcept {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty range");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % n;
}

Outcome Rng::categorical(const Categorical& dist) noexcept {
  const double u = uniform();
  double cumulative = 0.0;
  Outcome last_positive = 0;
  for (Outcome i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0.0) continue;
    cumulative += dist[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

Categorical empirical_estimate(const CountVector& counts) {
  const int n = counts.total();
  if (n <= 0) throw std::invalid_argument("no observations");
  std::vector<double> probs(counts.size());
  for (Outcome i = 0; i < counts.size(); ++i) {
    probs[i] = static_cast<double>(counts[i]) / n;
  }
  return Categorical(std::move(probs));
}

double l1_error(const Categorical& a, const Categorical& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double sum = 0.0;
  for (Outcome i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

double count_l1_error(const CountVector& counts, const Categorical& theta) {
  if (counts.size() != theta.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  const int n = counts.total();
  if (n <= 0) throw std::invalid_argument("no observations");
  double sum = 0.0;
  for (Outcome i = 0; i < counts.size(); ++i) {
    sum += std::abs(static_cast<double>(counts[i]) - n * theta[i]);
  }
  return sum / n;
}

ObservationSequence sample_sequence(const Categorical& dist, std::size_t n,
                                    Seed seed, std::uint64_t stream) {
  if (n == 0) throw std::invalid_argument("sequence length must be positive");
  Rng rng(seed, stream);
  std::vector<Outcome> values(n);
  for (auto& v : values) v = rng.categorical(dist);
  return ObservationSequence(std::move(values), dist.size());
}

CountVector counts_from_sequence(const ObservationSequence& seq) {
  CountVector counts(seq.alphabet());
  for (Outcome v : seq.values()) ++counts[v];
  return counts;
}

std::string to_string(const CountVector& counts, char sep) {
  std::string out;
  for (Outcome i = 0; i < counts.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += std::to_string(counts[i]);
  }
  return out;
}

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace corrlearn
