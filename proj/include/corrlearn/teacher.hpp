#pragma once

#include "corrlearn/dp.hpp"

namespace corrlearn {

struct OnlineTrace {
  ObservationSequence original;
  ObservationSequence corrected;
  int budget_spent = 0;
  std::vector<Action> actions;

  CountVector original_counts() const { return counts_from_sequence(original); }
  CountVector corrected_counts() const { return counts_from_sequence(corrected); }
};

/// Replays `seq` through a solved policy. The state at step k is built from
/// the corrected prefix plus the raw observation y_k, which is what the
/// student would see. Throws std::out_of_range if the policy misses a state.
OnlineTrace run_online(const ObservationSequence& seq, const Policy& policy,
                       int b);

/// Same replay with an arbitrary decision rule.
OnlineTrace run_online(const ObservationSequence& seq, const DecisionRule& rule,
                       int b);

/// Closed-form binomial rule: keep while the current value's tally does not
/// exceed round(theta0[y] * N), otherwise flip it if budget remains.
Action binomial_policy_action(const TeacherState& state,
                              const Categorical& theta0, int N);

/// Half-away-from-zero rounding of theta0[y] * N, the binomial threshold.
int binomial_threshold(const Categorical& theta0, Outcome y, int N);

}  // namespace corrlearn
