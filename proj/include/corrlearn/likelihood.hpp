#pragma once

#include "corrlearn/mdp.hpp"

#include <filesystem>
#include <string_view>
#include <vector>

namespace corrlearn {

/// Behavioural model: action distribution produced by parameter `theta`.
struct CandidateModel {
  int theta = 0;
  Categorical action_dist;
};

/// Finite set of candidate models sharing one action alphabet, kept sorted by
/// theta label.
class CandidateSet {
 public:
  explicit CandidateSet(std::vector<CandidateModel> models);

  const std::vector<CandidateModel>& models() const noexcept { return models_; }
  std::size_t action_count() const noexcept { return models_.front().action_dist.size(); }
  /// Throws std::out_of_range for an unknown label.
  const CandidateModel& at(int theta) const;
  bool contains(int theta) const noexcept;

 private:
  std::vector<CandidateModel> models_;
};

/// Parses the versioned candidate-set JSON document:
///   {"format": "corrlearn-candidates", "version": 1,
///    "models": [{"theta": 1, "probs": [...]}, ...]}
/// Throws ConfigError on any schema problem.
CandidateSet parse_candidate_set(std::string_view text);
CandidateSet load_candidate_set(const std::filesystem::path& path);

/// -sum_a counts[a] ln p(a | theta); +inf if a count lands on p = 0.
double negative_log_likelihood(const CountVector& counts,
                               const CandidateModel& model);

/// argmin over candidates of the NLL; ties go to the smallest label.
/// Throws std::domain_error if every candidate assigns zero likelihood.
int ml_estimate(const CountVector& counts, const CandidateSet& candidates);

enum class BioRewardKind {
  AbsoluteDifference,  // -|theta_hat - theta0|
  Indicator,           // -1 when theta_hat != theta0
};

/// Terminal reward scoring the student's ML estimate on the final counts.
/// Histories impossible under every candidate get the worst reward the kind
/// can produce.
TerminalReward bio_terminal_reward(int theta0_label, const CandidateSet& candidates,
                                   BioRewardKind kind = BioRewardKind::AbsoluteDifference);

struct MisclassificationRate {
  int budget = 0;
  std::int64_t trials = 0;
  std::int64_t misclassified = 0;
  double rate = 0.0;
};

/// For each budget: solve the MDP with the likelihood reward, replay `trials`
/// sampled histories, and count how often the corrected ML estimate misses
/// theta0. Trial t uses stream t for every budget.
std::vector<MisclassificationRate> misclassification_experiment(
    int theta0_label, const CandidateSet& candidates, int N,
    const std::vector<int>& budgets, std::int64_t trials, Seed seed,
    BioRewardKind kind = BioRewardKind::AbsoluteDifference);

}  // namespace corrlearn
