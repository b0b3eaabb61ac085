#include "corrlearn/dp.hpp"
#include "corrlearn/mdp.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace corrlearn;

namespace {

TeacherState state(std::vector<int> counts, int budget, Outcome last) {
  return TeacherState{CountVector(std::move(counts)), budget, last};
}

std::uint64_t count_vectors_by_loop(int K, int N) {
  // Direct enumeration of all vectors in {0..N}^K with 1 <= total <= N.
  std::uint64_t n = 0;
  std::vector<int> c(static_cast<std::size_t>(K), 0);
  while (true) {
    int total = 0;
    for (int x : c) total += x;
    if (total >= 1 && total <= N) ++n;
    std::size_t pos = 0;
    while (pos < c.size() && ++c[pos] > N) c[pos++] = 0;
    if (pos == c.size()) break;
  }
  return n;
}

}  // namespace

TEST(StateCountBound, Examples) {
  EXPECT_EQ(state_count_bound(1, 7), 7u);
  EXPECT_EQ(state_count_bound(2, 2), 5u);
  EXPECT_EQ(state_count_bound(3, 2), 9u);
}

TEST(StateCountBound, MatchesEnumeration) {
  for (int K = 1; K <= 4; ++K) {
    for (int N = 1; N <= 6; ++N) {
      EXPECT_EQ(state_count_bound(K, N), count_vectors_by_loop(K, N)) << K << "," << N;
    }
  }
  EXPECT_EQ(full_state_bound(3, 2, 1), 9u * 2u * 3u);
}

TEST(StateCountBound, Overflow) {
  EXPECT_THROW(state_count_bound(60, 200), std::overflow_error);
  EXPECT_THROW(state_count_bound(0, 3), std::invalid_argument);
}

TEST(IsTerminal, Examples) {
  EXPECT_TRUE(is_terminal(state({2, 3}, 0, 1), 5));
  EXPECT_FALSE(is_terminal(state({1, 1}, 0, 1), 5));
  EXPECT_TRUE(is_terminal(state({5, 0}, 0, 0), 5));
}

TEST(ApplyAction, Examples) {
  const auto keep = apply_action(state({1, 0}, 1, 0), Action{0});
  EXPECT_EQ(keep.counts, CountVector({1, 0}));
  EXPECT_EQ(keep.budget, 1);

  const auto change = apply_action(state({1, 0}, 1, 0), Action{1});
  EXPECT_EQ(change.counts, CountVector({0, 1}));
  EXPECT_EQ(change.budget, 0);

  try {
    apply_action(state({2, 1}, 0, 1), Action{0});
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "budget exhausted");
  }
}

TEST(Transitions, Examples) {
  const auto spec = make_l1_spec(Categorical({0.5, 0.5}), 5, 1);
  const auto keep = transitions(state({1, 0}, 1, 0), Action{0}, spec);
  ASSERT_EQ(keep.size(), 2u);
  EXPECT_EQ(keep[0].next, state({2, 0}, 1, 0));
  EXPECT_EQ(keep[1].next, state({1, 1}, 1, 1));
  EXPECT_DOUBLE_EQ(keep[0].probability, 0.5);
  EXPECT_DOUBLE_EQ(keep[1].probability, 0.5);

  const auto change = transitions(state({1, 0}, 1, 0), Action{1}, spec);
  ASSERT_EQ(change.size(), 2u);
  EXPECT_EQ(change[0].next, state({1, 1}, 0, 0));
  EXPECT_EQ(change[1].next, state({0, 2}, 0, 1));

  EXPECT_THROW(transitions(state({3, 2}, 1, 0), Action{0}, spec), std::invalid_argument);
  EXPECT_THROW(transitions(state({1, 0}, 0, 0), Action{1}, spec), std::domain_error);
}

TEST(Transitions, PrunesZeroProbabilityOutcomes) {
  const auto spec = make_l1_spec(Categorical({0.5, 0.0, 0.5}), 4, 0);
  const auto t = transitions(state({1, 0, 0}, 0, 0), Action{0}, spec);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].next.last_obs, 0u);
  EXPECT_EQ(t[1].next.last_obs, 2u);
}

TEST(TerminalValue, Examples) {
  const auto spec3 = make_l1_spec(Categorical({0.4, 0.3, 0.3}), 5, 1);
  EXPECT_NEAR(terminal_value(state({2, 2, 1}, 1, 0), Action{0}, spec3), -0.2, 1e-15);

  const auto spec2 = make_l1_spec(Categorical({0.6, 0.4}), 5, 1);
  EXPECT_NEAR(terminal_value(state({3, 2}, 1, 0), Action{0}, spec2), 0.0, 1e-15);

  const auto half = make_l1_spec(Categorical({0.5, 0.5}), 5, 1);
  EXPECT_NEAR(terminal_value(state({5, 0}, 1, 0), Action{1}, half), -0.6, 1e-15);
  EXPECT_THROW(terminal_value(state({5, 0}, 0, 0), Action{1}, half), std::domain_error);
}

TEST(Transitions, ProbabilitiesSumToOneEverywhere) {
  for (int K = 2; K <= 3; ++K) {
    for (int N = 1; N <= 5; ++N) {
      const auto theta = K == 2 ? Categorical({0.7, 0.3}) : Categorical({0.4, 0.3, 0.3});
      const auto spec = make_l1_spec(theta, N, 2);
      const auto sol = solve(spec);
      for (int k = 1; k < N; ++k) {
        for (const auto& [s, v] : sol.values.stage(k)) {
          for (const auto& a : feasible_actions(s, spec.K)) {
            double sum = 0.0;
            for (const auto& t : transitions(s, a, spec)) {
              sum += t.probability;
              EXPECT_EQ(t.next.counts.total(), s.counts.total() + 1);
              EXPECT_EQ(apply_action(s, a).counts.total(), s.counts.total());
            }
            EXPECT_NEAR(sum, 1.0, 1e-12);
          }
        }
      }
    }
  }
}

TEST(Transitions, RandomTrajectoriesRespectBudget) {
  std::mt19937_64 gen(5);
  const auto spec = make_l1_spec(Categorical({0.2, 0.5, 0.3}), 8, 2);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<Outcome> first(0, 2);
    TeacherState s = initial_state(spec, first(gen));
    int spent = 0;
    while (true) {
      const auto actions = feasible_actions(s, spec.K);
      std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
      const Action a = actions[pick(gen)];
      if (!a.keeps(s)) ++spent;
      if (s.counts.total() == spec.N) break;
      const auto next = transitions(s, a, spec);
      std::uniform_int_distribution<std::size_t> draw(0, next.size() - 1);
      s = next[draw(gen)].next;
      ASSERT_GE(s.budget, 0);
      ASSERT_GE(s.counts[s.last_obs], 1);
    }
    EXPECT_LE(spent, spec.b);
  }
}

TEST(Solve, ReachableStatesWithinBound) {
  for (int K = 2; K <= 4; ++K) {
    for (int N = 1; N <= 6; ++N) {
      for (int b = 0; b <= 2; ++b) {
        const auto sol = solve(make_l1_spec(Categorical::uniform(K), N, b));
        EXPECT_LE(sol.values.state_count(), full_state_bound(K, N, b));
      }
    }
  }
}
