#include "corrlearn/dp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <unordered_set>

namespace corrlearn {

namespace {

using StateSet = std::unordered_set<TeacherState, TeacherStateHash>;

double backup(const TeacherState& state, const Action& action,
              const MdpSpec& spec, const ValueTable::StageMap& next_stage) {
  double value = 0.0;
  for (const auto& [next, p] : transitions(state, action, spec)) {
    value += p * next_stage.at(next);
  }
  return value;
}

double brute_force_rec(const TeacherState& state, const MdpSpec& spec) {
  const bool last = state.counts.total() == spec.N;
  double best = -std::numeric_limits<double>::infinity();
  for (const Action& a : feasible_actions(state, spec.K)) {
    double value = 0.0;
    if (last) {
      value = terminal_value(state, a, spec);
    } else {
      for (const auto& [next, p] : transitions(state, a, spec)) {
        value += p * brute_force_rec(next, spec);
      }
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace

std::optional<double> ValueTable::find(const TeacherState& state) const {
  const int k = state.counts.total();
  if (k < 0 || k > horizon()) return std::nullopt;
  const auto& m = stages_[static_cast<std::size_t>(k)];
  if (auto it = m.find(state); it != m.end()) return it->second;
  return std::nullopt;
}

std::size_t ValueTable::state_count() const noexcept {
  std::size_t n = 0;
  for (const auto& m : stages_) n += m.size();
  return n;
}

const Action& Policy::action_at(const TeacherState& state) const {
  const int k = state.counts.total();
  if (k >= 0 && k <= horizon()) {
    const auto& m = stages_[static_cast<std::size_t>(k)];
    if (auto it = m.find(state); it != m.end()) return it->second;
  }
  throw std::out_of_range("state not covered by policy: counts=" +
                          to_string(state.counts) +
                          " budget=" + std::to_string(state.budget) +
                          " last_obs=" + std::to_string(state.last_obs));
}

std::size_t Policy::state_count() const noexcept {
  std::size_t n = 0;
  for (const auto& m : stages_) n += m.size();
  return n;
}

Solution solve(const MdpSpec& spec, const SolveOptions& options) {
  spec.validate();
  std::uint64_t bound = 0;
  try {
    bound = full_state_bound(spec.K, static_cast<std::uint64_t>(spec.N),
                             static_cast<std::uint64_t>(spec.b));
  } catch (const std::overflow_error&) {
    throw CeilingExceeded("state bound overflows 64 bits (ceiling " +
                          std::to_string(options.state_ceiling) + ")");
  }
  if (bound > options.state_ceiling) {
    throw CeilingExceeded("state bound " + std::to_string(bound) +
                          " exceeds ceiling " +
                          std::to_string(options.state_ceiling));
  }

  // Forward pass: reachable states per stage.
  std::vector<StateSet> reachable(static_cast<std::size_t>(spec.N) + 1);
  for (Outcome y = 0; y < spec.K; ++y) {
    if (spec.model[y] > 0.0) reachable[1].insert(initial_state(spec, y));
  }
  for (int k = 1; k < spec.N; ++k) {
    auto& next_set = reachable[static_cast<std::size_t>(k) + 1];
    for (const TeacherState& s : reachable[static_cast<std::size_t>(k)]) {
      for (const Action& a : feasible_actions(s, spec.K)) {
        for (auto& t : transitions(s, a, spec)) next_set.insert(std::move(t.next));
      }
    }
  }

  // Backward induction.
  Solution sol{Policy(spec.K, spec.N, spec.b), ValueTable(spec.N), 0.0};
  for (int k = spec.N; k >= 1; --k) {
    auto& values = sol.values.stage(k);
    auto& actions = sol.policy.stage(k);
    const auto& stage_states = reachable[static_cast<std::size_t>(k)];
    values.reserve(stage_states.size());
    actions.reserve(stage_states.size());
    const ValueTable::StageMap* next_stage =
        k < spec.N ? &sol.values.stage(k + 1) : nullptr;
    for (const TeacherState& s : stage_states) {
      Action best_action = Action::keep(s);
      double best_value = 0.0;
      bool first = true;
      for (const Action& a : feasible_actions(s, spec.K)) {
        const double v = next_stage ? backup(s, a, spec, *next_stage)
                                    : terminal_value(s, a, spec);
        if (first || v > best_value + options.tie_tolerance) {
          best_value = v;
          best_action = a;
          first = false;
        }
      }
      values.emplace(s, best_value);
      actions.emplace(s, best_action);
    }
  }
  sol.root_value = root_expectation(sol.values, spec);
  return sol;
}

double value_at(const ValueTable& table, const TeacherState& state) {
  if (auto v = table.find(state)) return *v;
  throw std::out_of_range("state not in value table: counts=" +
                          to_string(state.counts));
}

double root_expectation(const ValueTable& table, const MdpSpec& spec) {
  double value = 0.0;
  for (Outcome y = 0; y < spec.K; ++y) {
    if (spec.model[y] > 0.0) {
      value += spec.model[y] * value_at(table, initial_state(spec, y));
    }
  }
  return value;
}

double brute_force_value(const MdpSpec& spec, std::uint64_t ceiling) {
  spec.validate();
  const double k = static_cast<double>(spec.K);
  const double work = std::pow(k, spec.N) * std::pow(k + 1.0, spec.N);
  if (work > static_cast<double>(ceiling)) {
    throw CeilingExceeded("brute force work " + std::to_string(work) +
                          " exceeds ceiling " + std::to_string(ceiling));
  }
  double value = 0.0;
  for (Outcome y = 0; y < spec.K; ++y) {
    if (spec.model[y] > 0.0) {
      value += spec.model[y] * brute_force_rec(initial_state(spec, y), spec);
    }
  }
  return value;
}

double policy_value(const MdpSpec& spec, const DecisionRule& rule) {
  spec.validate();
  std::unordered_map<TeacherState, double, TeacherStateHash> memo;
  std::function<double(const TeacherState&)> eval =
      [&](const TeacherState& s) -> double {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    const Action a = rule(s);
    double v = 0.0;
    if (s.counts.total() == spec.N) {
      v = terminal_value(s, a, spec);
    } else {
      for (const auto& [next, p] : transitions(s, a, spec)) v += p * eval(next);
    }
    memo.emplace(s, v);
    return v;
  };
  double value = 0.0;
  for (Outcome y = 0; y < spec.K; ++y) {
    if (spec.model[y] > 0.0) value += spec.model[y] * eval(initial_state(spec, y));
  }
  return value;
}

void write_policy(std::ostream& out, const Policy& policy) {
  std::vector<std::pair<std::pair<int, TeacherState>, Outcome>> rows;
  rows.reserve(policy.state_count());
  for (int k = 1; k <= policy.horizon(); ++k) {
    for (const auto& [s, a] : policy.stage(k)) rows.push_back({{k, s}, a.target});
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  out << "stage,counts,budget,last_obs,action\n";
  for (const auto& [key, target] : rows) {
    const auto& [k, s] = key;
    out << k << ',' << to_string(s.counts) << ',' << s.budget << ','
        << s.last_obs << ',' << target << '\n';
  }
}

}  // namespace corrlearn
