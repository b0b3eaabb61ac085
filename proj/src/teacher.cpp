#include "corrlearn/teacher.hpp"

#include <cmath>

namespace corrlearn {

OnlineTrace run_online(const ObservationSequence& seq, const DecisionRule& rule,
                       int b) {
  if (b < 0) throw std::invalid_argument("negative budget");
  const std::size_t k = seq.alphabet();
  std::vector<Outcome> corrected;
  corrected.reserve(seq.size());
  std::vector<Action> actions;
  actions.reserve(seq.size());

  TeacherState state{CountVector(k), b, 0};
  int spent = 0;
  for (Outcome y : seq.values()) {
    state.last_obs = y;
    ++state.counts[y];
    const Action a = rule(state);
    const AppliedAction applied = apply_action(state, a);
    if (!a.keeps(state)) ++spent;
    state.counts = applied.counts;
    state.budget = applied.budget;
    corrected.push_back(a.target);
    actions.push_back(a);
  }
  return {seq, ObservationSequence(std::move(corrected), k), spent,
          std::move(actions)};
}

OnlineTrace run_online(const ObservationSequence& seq, const Policy& policy,
                       int b) {
  if (policy.alphabet() != seq.alphabet() ||
      policy.horizon() != static_cast<int>(seq.size()) || policy.budget() != b) {
    throw std::invalid_argument(
        "policy was solved for a different (K, N, b) than the sequence");
  }
  return run_online(
      seq, [&policy](const TeacherState& s) { return policy.action_at(s); }, b);
}

int binomial_threshold(const Categorical& theta0, Outcome y, int N) {
  return static_cast<int>(std::lround(theta0[y] * N));
}

Action binomial_policy_action(const TeacherState& state,
                              const Categorical& theta0, int N) {
  if (theta0.size() != 2 || state.counts.size() != 2) {
    throw std::domain_error("binomial policy needs K = 2");
  }
  const Outcome y = state.last_obs;
  if (state.budget <= 0 || state.counts[y] <= binomial_threshold(theta0, y, N)) {
    return Action::keep(state);
  }
  return Action{1 - y};
}

}  // namespace corrlearn
