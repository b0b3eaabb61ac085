#pragma once

#include "corrlearn/core.hpp"

#include <functional>
#include <vector>

namespace corrlearn {

/// Teacher's decision point: tallies so far (including the observation just
/// received), remaining budget, and that observation.
struct TeacherState {
  CountVector counts;
  int budget = 0;
  Outcome last_obs = 0;

  int stage() const noexcept { return counts.total(); }

  friend bool operator==(const TeacherState&, const TeacherState&) = default;
  friend auto operator<=>(const TeacherState&, const TeacherState&) = default;
};

struct TeacherStateHash {
  std::size_t operator()(const TeacherState& s) const noexcept;
};

/// Replace the current observation with `target`. Keeping is encoded as
/// target == last_obs and costs nothing.
struct Action {
  Outcome target = 0;

  bool keeps(const TeacherState& s) const noexcept { return target == s.last_obs; }

  static Action keep(const TeacherState& s) { return Action{s.last_obs}; }

  friend bool operator==(const Action&, const Action&) = default;
};

/// Episode-end score as a function of the final corrected counts.
using TerminalReward = std::function<double(const CountVector&)>;

/// -||counts/N - theta0||_1.
TerminalReward l1_terminal_reward(Categorical theta0);

struct MdpSpec {
  std::size_t K = 2;
  int N = 1;
  int b = 0;
  Categorical model;  // distribution of the next observation
  TerminalReward reward;

  /// Throws std::invalid_argument on a malformed tuple.
  void validate() const;
};

/// Standard setup: the teacher's observation model is theta0 and the reward
/// is the negative l1 estimation error.
MdpSpec make_l1_spec(const Categorical& theta0, int N, int b);

/// Number of count vectors over K outcomes whose total lies in 1..N,
/// i.e. sum_{n=1..N} C(K+n-1, n). Throws std::overflow_error.
std::uint64_t state_count_bound(std::uint64_t K, std::uint64_t N);

/// state_count_bound(K, N) * (b + 1) * K. Throws std::overflow_error.
std::uint64_t full_state_bound(std::uint64_t K, std::uint64_t N,
                               std::uint64_t b);

bool is_terminal(const TeacherState& state, int N);

struct AppliedAction {
  CountVector counts;
  int budget = 0;
};

/// Throws std::domain_error("budget exhausted") for a change with no budget.
AppliedAction apply_action(const TeacherState& state, const Action& action);

/// Keep first, then every change target in ascending order if budget allows.
std::vector<Action> feasible_actions(const TeacherState& state, std::size_t K);

struct Transition {
  TeacherState next;
  double probability = 0.0;
};

/// Successors after acting and receiving the next observation. Outcomes the
/// model gives zero probability are dropped.
std::vector<Transition> transitions(const TeacherState& state,
                                    const Action& action, const MdpSpec& spec);

double terminal_value(const TeacherState& state, const Action& action,
                      const MdpSpec& spec);

/// State right after the first observation y with full budget.
TeacherState initial_state(const MdpSpec& spec, Outcome first_obs);

}  // namespace corrlearn
