#include "corrlearn/batch.hpp"
#include "corrlearn/teacher.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace corrlearn;

namespace {

ObservationSequence bits(unsigned mask, int n) {
  std::vector<Outcome> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
  return ObservationSequence(std::move(v), 2);
}

double final_error(const OnlineTrace& t, const Categorical& theta) {
  return count_l1_error(t.corrected_counts(), theta);
}

const Categorical kHalf({0.5, 0.5});

}  // namespace

TEST(RunOnline, ZeroBudgetIsIdentity) {
  const Categorical theta({0.4, 0.3, 0.3});
  const auto sol = solve(make_l1_spec(theta, 5, 0));
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto seq = sample_sequence(theta, 5, Seed{s});
    const auto trace = run_online(seq, sol.policy, 0);
    EXPECT_EQ(trace.corrected, seq);
    EXPECT_EQ(trace.budget_spent, 0);
  }
}

TEST(RunOnline, BinomialExampleSequence) {
  // 1101110011: seven ones; the ninth observation is the first one over the
  // threshold of five.
  const ObservationSequence seq({1, 1, 0, 1, 1, 1, 0, 0, 1, 1}, 2);
  const auto sol = solve(make_l1_spec(kHalf, 10, 1));
  const auto trace = run_online(seq, sol.policy, 1);
  EXPECT_EQ(trace.corrected_counts()[1], 6);
  EXPECT_NEAR(final_error(trace, kHalf), 0.2, 1e-12);
  EXPECT_EQ(trace.budget_spent, 1);

  const auto rule = run_online(
      seq, [](const TeacherState& s) { return binomial_policy_action(s, kHalf, 10); }, 1);
  EXPECT_EQ(rule.corrected.values(),
            (std::vector<Outcome>{1, 1, 0, 1, 1, 1, 0, 0, 0, 1}));
}

TEST(RunOnline, MultinomialBatchLowerBound) {
  const Categorical theta({0.4, 0.3, 0.3});
  const ObservationSequence seq({1, 2, 0, 2, 0}, 3);
  const auto sol = solve(make_l1_spec(theta, 5, 1));
  const auto trace = run_online(seq, sol.policy, 1);
  const double batch = batch_correct(trace.original_counts(), theta, 1).error;
  EXPECT_GE(final_error(trace, theta), batch - 1e-12);
  EXPECT_LE(trace.budget_spent, 1);
}

TEST(RunOnline, TraceInvariants) {
  const Categorical theta({0.2, 0.5, 0.3});
  const auto sol = solve(make_l1_spec(theta, 8, 2));
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto seq = sample_sequence(theta, 8, Seed{s});
    const auto trace = run_online(seq, sol.policy, 2);
    int differing = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) differing += seq[i] != trace.corrected[i];
    EXPECT_EQ(differing, trace.budget_spent);
    EXPECT_LE(trace.budget_spent, 2);
  }
}

TEST(RunOnline, MismatchedPolicy) {
  const auto sol = solve(make_l1_spec(kHalf, 4, 1));
  EXPECT_THROW(run_online(bits(0, 5), sol.policy, 1), std::invalid_argument);
  EXPECT_THROW(run_online(bits(0, 4), sol.policy, 2), std::invalid_argument);
}

TEST(RunOnline, UncoveredStateReported) {
  Policy empty(2, 3, 0);
  EXPECT_THROW(run_online(bits(0, 3), empty, 0), std::out_of_range);
}

TEST(BinomialPolicy, Examples) {
  EXPECT_EQ(binomial_policy_action({CountVector({2, 4}), 1, 1}, kHalf, 10), Action{1});
  EXPECT_EQ(binomial_policy_action({CountVector({2, 6}), 1, 1}, kHalf, 10), Action{0});
  EXPECT_EQ(binomial_policy_action({CountVector({1, 9}), 0, 1}, kHalf, 10), Action{1});
  EXPECT_THROW(binomial_policy_action({CountVector({1, 1, 1}), 1, 0},
                                      Categorical({0.4, 0.3, 0.3}), 10),
               std::domain_error);
}

TEST(BinomialPolicy, ThresholdRoundsHalfAwayFromZero) {
  EXPECT_EQ(binomial_threshold(kHalf, 0, 10), 5);
  EXPECT_EQ(binomial_threshold(kHalf, 0, 5), 3);  // 2.5 -> 3
  EXPECT_EQ(binomial_threshold(Categorical({0.25, 0.75}), 1, 2), 2);  // 1.5 -> 2
}

TEST(BinomialPolicy, ReachesAttainableErrorOnEverySequence) {
  for (int b = 1; b <= 2; ++b) {
    for (unsigned mask = 0; mask < 1024; ++mask) {
      const auto seq = bits(mask, 10);
      const auto trace = run_online(
          seq, [](const TeacherState& s) { return binomial_policy_action(s, kHalf, 10); }, b);
      EXPECT_NEAR(final_error(trace, kHalf),
                  attainable_error(trace.original_counts(), kHalf, b), 1e-12)
          << "mask " << mask;
    }
  }
}

TEST(BinomialPolicy, ExpectedValueMatchesDp) {
  for (int b = 0; b <= 3; ++b) {
    const auto spec = make_l1_spec(kHalf, 10, b);
    const double closed = policy_value(
        spec, [](const TeacherState& s) { return binomial_policy_action(s, kHalf, 10); });
    EXPECT_NEAR(closed, solve(spec).root_value, 1e-12) << "b " << b;
  }
}

TEST(DpPolicy, BinomialDominanceAndBatchBound) {
  for (int b = 1; b <= 2; ++b) {
    const auto sol = solve(make_l1_spec(kHalf, 10, b));
    for (unsigned mask = 0; mask < 1024; ++mask) {
      const auto seq = bits(mask, 10);
      const auto trace = run_online(seq, sol.policy, b);
      const double online = final_error(trace, kHalf);
      const double original = count_l1_error(trace.original_counts(), kHalf);
      EXPECT_LE(online, original + 1e-12);
      EXPECT_LE(batch_correct(trace.original_counts(), kHalf, b).error, online + 1e-12);
    }
  }
}

TEST(DpPolicy, MultinomialMeanImproves) {
  const Categorical theta({0.4, 0.3, 0.3});
  const auto sol = solve(make_l1_spec(theta, 5, 1));
  double original = 0.0;
  double online = 0.0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto seq = sample_sequence(theta, 5, Seed{77}, s);
    const auto trace = run_online(seq, sol.policy, 1);
    original += count_l1_error(trace.original_counts(), theta);
    online += final_error(trace, theta);
    EXPECT_GE(final_error(trace, theta),
              batch_correct(trace.original_counts(), theta, 1).error - 1e-12);
  }
  EXPECT_LT(online, original);
}
