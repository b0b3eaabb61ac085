#pragma once

#include "corrlearn/mdp.hpp"

#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

namespace corrlearn {

/// Optimal expected terminal reward per reachable state, indexed by stage
/// (stage k holds states whose counts sum to k).
class ValueTable {
 public:
  using StageMap = std::unordered_map<TeacherState, double, TeacherStateHash>;

  explicit ValueTable(int horizon = 0) : stages_(static_cast<std::size_t>(horizon) + 1) {}

  int horizon() const noexcept { return static_cast<int>(stages_.size()) - 1; }
  const StageMap& stage(int k) const { return stages_.at(static_cast<std::size_t>(k)); }
  StageMap& stage(int k) { return stages_.at(static_cast<std::size_t>(k)); }
  std::optional<double> find(const TeacherState& state) const;
  std::size_t state_count() const noexcept;

 private:
  std::vector<StageMap> stages_;
};

/// Per-stage state -> action map for a fixed (K, N, b).
class Policy {
 public:
  using StageMap = std::unordered_map<TeacherState, Action, TeacherStateHash>;

  Policy() = default;
  Policy(std::size_t K, int horizon, int budget)
      : K_(K), budget_(budget), stages_(static_cast<std::size_t>(horizon) + 1) {}

  std::size_t alphabet() const noexcept { return K_; }
  int horizon() const noexcept { return static_cast<int>(stages_.size()) - 1; }
  int budget() const noexcept { return budget_; }
  const StageMap& stage(int k) const { return stages_.at(static_cast<std::size_t>(k)); }
  StageMap& stage(int k) { return stages_.at(static_cast<std::size_t>(k)); }

  /// Throws std::out_of_range for a state the policy does not cover.
  const Action& action_at(const TeacherState& state) const;
  std::size_t state_count() const noexcept;

 private:
  std::size_t K_ = 0;
  int budget_ = 0;
  std::vector<StageMap> stages_;
};

struct SolveOptions {
  /// Upper limit on full_state_bound(K, N, b).
  std::uint64_t state_ceiling = 50'000'000;
  /// Changes must beat keep (and earlier changes) by more than this.
  double tie_tolerance = 1e-12;
};

struct Solution {
  Policy policy;
  ValueTable values;
  /// Expected value before the first observation arrives.
  double root_value = 0.0;
};

/// Exact backward induction over the reachable states of the MDP.
/// Throws CeilingExceeded when the state bound exceeds the ceiling.
Solution solve(const MdpSpec& spec, const SolveOptions& options = {});

/// Throws std::out_of_range for a state not in the table.
double value_at(const ValueTable& table, const TeacherState& state);

/// sum_y model[y] * V(initial_state(y)).
double root_expectation(const ValueTable& table, const MdpSpec& spec);

/// Optimal value by plain recursion over every observation outcome and every
/// feasible action, no memoization. Oracle for solve().
double brute_force_value(const MdpSpec& spec,
                         std::uint64_t ceiling = 100'000'000);

using DecisionRule = std::function<Action(const TeacherState&)>;

/// Exact expected terminal reward of following `rule` from the start.
double policy_value(const MdpSpec& spec, const DecisionRule& rule);

/// `stage,counts,budget,last_obs,action` rows, header first, sorted by
/// (stage, counts, budget, last_obs). Counts are ';'-separated.
void write_policy(std::ostream& out, const Policy& policy);

}  // namespace corrlearn
