#include "corrlearn/mdp.hpp"

#include <limits>

namespace corrlearn {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw std::overflow_error("state count overflows 64 bits");
  }
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::overflow_error("state count overflows 64 bits");
  }
  return out;
}

}  // namespace

std::size_t TeacherStateHash::operator()(const TeacherState& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (int c : s.counts.counts()) mix(static_cast<std::size_t>(c));
  mix(static_cast<std::size_t>(s.budget));
  mix(s.last_obs);
  return h;
}

TerminalReward l1_terminal_reward(Categorical theta0) {
  return [theta0 = std::move(theta0)](const CountVector& counts) {
    return -count_l1_error(counts, theta0);
  };
}

void MdpSpec::validate() const {
  if (K < 2) throw std::invalid_argument("MDP needs K >= 2");
  if (N < 1) throw std::invalid_argument("MDP needs N >= 1");
  if (b < 0) throw std::invalid_argument("MDP needs b >= 0");
  if (model.size() != K) throw std::invalid_argument("model dimension != K");
  if (!reward) throw std::invalid_argument("MDP has no terminal reward");
}

MdpSpec make_l1_spec(const Categorical& theta0, int N, int b) {
  MdpSpec spec{theta0.size(), N, b, theta0, l1_terminal_reward(theta0)};
  spec.validate();
  return spec;
}

std::uint64_t state_count_bound(std::uint64_t K, std::uint64_t N) {
  if (K < 1 || N < 1) throw std::invalid_argument("need K >= 1 and N >= 1");
  // C(K+n-1, n) = C(K+n-2, n-1) * (K+n-1) / n. Multiply before dividing to
  // keep the recurrence exact; the product is checked for overflow.
  std::uint64_t total = 0;
  std::uint64_t term = 1;  // C(K-1, 0)
  for (std::uint64_t n = 1; n <= N; ++n) {
    term = checked_mul(term, K + n - 1) / n;
    total = checked_add(total, term);
  }
  return total;
}

std::uint64_t full_state_bound(std::uint64_t K, std::uint64_t N,
                               std::uint64_t b) {
  return checked_mul(checked_mul(state_count_bound(K, N), b + 1), K);
}

bool is_terminal(const TeacherState& state, int N) {
  return state.counts.total() == N;
}

AppliedAction apply_action(const TeacherState& state, const Action& action) {
  if (action.target >= state.counts.size()) {
    throw std::invalid_argument("action target outside alphabet");
  }
  if (action.keeps(state)) return {state.counts, state.budget};
  if (state.budget <= 0) throw std::domain_error("budget exhausted");
  if (state.counts[state.last_obs] < 1) {
    throw std::invalid_argument("current observation is not tallied");
  }
  AppliedAction out{state.counts, state.budget - 1};
  --out.counts[state.last_obs];
  ++out.counts[action.target];
  return out;
}

std::vector<Action> feasible_actions(const TeacherState& state, std::size_t K) {
  std::vector<Action> actions{Action::keep(state)};
  if (state.budget > 0) {
    for (Outcome v = 0; v < K; ++v) {
      if (v != state.last_obs) actions.push_back(Action{v});
    }
  }
  return actions;
}

std::vector<Transition> transitions(const TeacherState& state,
                                    const Action& action, const MdpSpec& spec) {
  if (state.counts.total() >= spec.N) {
    throw std::invalid_argument("no further observations after the horizon");
  }
  const AppliedAction applied = apply_action(state, action);
  std::vector<Transition> out;
  out.reserve(spec.K);
  for (Outcome v = 0; v < spec.K; ++v) {
    const double p = spec.model[v];
    if (p <= 0.0) continue;
    TeacherState next{applied.counts, applied.budget, v};
    ++next.counts[v];
    out.push_back({std::move(next), p});
  }
  return out;
}

double terminal_value(const TeacherState& state, const Action& action,
                      const MdpSpec& spec) {
  if (state.counts.total() != spec.N) {
    throw std::invalid_argument("terminal value requested before the horizon");
  }
  return spec.reward(apply_action(state, action).counts);
}

TeacherState initial_state(const MdpSpec& spec, Outcome first_obs) {
  TeacherState s{CountVector(spec.K), spec.b, first_obs};
  ++s.counts[first_obs];
  return s;
}

}  // namespace corrlearn
