// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "corrlearn/batch.hpp"
#include "corrlearn/experiments.hpp"
#include "corrlearn/teacher.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace corrlearn;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds,
               const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_seconds) {
    r.pass = false;
    r.detail += " (over the " + format_real(budget_seconds) + " s budget)";
  }
  if (!r.pass) ++failures;
  std::printf("[%s] %d %s (%.3f s): %s\n", r.pass ? "PASS" : "FAIL", id, title, secs,
              r.detail.c_str());
  std::fflush(stdout);
}

ObservationSequence bits(unsigned mask, int n) {
  std::vector<corrlearn::Outcome> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
  return ObservationSequence(std::move(v), 2);
}

ExperimentConfig config(const std::string& name) {
  ExperimentConfig c;
  c.experiment = name;
  c.seed = 20240601;
  if (name == "bio") {
    c.candidates = std::string(CORRLEARN_DATA_DIR) + "/time_perception_candidates.json";
  }
  return c;
}

std::string csv_of(const ExperimentConfig& c) {
  std::ostringstream out;
  write_csv(out, run_experiment(c));
  return out.str();
}

Verdict emin_exact() {
  const auto r = e_min(5, Categorical({0.4, 0.3, 0.3}));
  const bool achiever =
      r.achiever == CountVector({2, 2, 1}) || r.achiever == CountVector({2, 1, 2});
  return {r.error == 0.2 && achiever,
          "error " + format_real(r.error) + ", achiever " + to_string(r.achiever)};
}

Verdict binomial_optimality() {
  const Categorical half({0.5, 0.5});
  double worst = 0.0;
  for (int b = 0; b <= 2; ++b) {
    const auto sol = solve(make_l1_spec(half, 10, b));
    for (unsigned mask = 0; mask < 1024; ++mask) {
      const auto trace = run_online(bits(mask, 10), sol.policy, b);
      const double online = count_l1_error(trace.corrected_counts(), half);
      const double formula = attainable_error(trace.original_counts(), half, b);
      worst = std::max(worst, std::abs(online - formula));
    }
  }
  return {worst <= 1e-12, "3072 sequences, max |online - attainable| = " + format_real(worst)};
}

Verdict oracle_equivalence() {
  const std::vector<Categorical> binary = {Categorical({0.5, 0.5}), Categorical({0.7, 0.3}),
                                           Categorical({0.9, 0.1})};
  const std::vector<Categorical> ternary = {Categorical::uniform(3),
                                            Categorical({0.4, 0.3, 0.3}),
                                            Categorical({0.7, 0.2, 0.1})};
  double worst = 0.0;
  int cases = 0;
  for (const auto* set : {&binary, &ternary}) {
    for (const auto& theta : *set) {
      for (int N = 1; N <= 5; ++N) {
        for (int b = 0; b <= 2; ++b) {
          const auto spec = make_l1_spec(theta, N, b);
          worst = std::max(worst, std::abs(solve(spec).root_value - brute_force_value(spec)));
          ++cases;
        }
      }
    }
  }
  return {worst <= 1e-12,
          std::to_string(cases) + " cases, max |dp - brute| = " + format_real(worst)};
}

Verdict closed_form_policy() {
  const Categorical half({0.5, 0.5});
  const auto spec = make_l1_spec(half, 10, 1);
  const double closed = policy_value(
      spec, [&](const TeacherState& s) { return binomial_policy_action(s, half, 10); });
  const double root = solve(spec).root_value;
  return {std::abs(closed - root) <= 1e-12,
          "rule " + format_real(closed) + " vs dp " + format_real(root)};
}

Verdict bound_grid() {
  auto c = config("bounds");
  c.N = {5, 10, 25};
  c.M = {1, 2, 4};
  c.B = {0, 1, 3, 5};
  c.trials = 100000;
  int violations = 0;
  int off = 0;
  double worst_z = 0.0;
  for (const auto& r : run_bounds(c)) {
    if (r.empirical_var_corrected > r.bound_abs) ++violations;
    const double truth = uniform_variance(r.M).corrected_value / r.N;
    const double z = std::abs(r.empirical_var_original - truth) / r.var_original_stderr;
    worst_z = std::max(worst_z, z);
    if (z > 3.0) ++off;
  }
  return {violations == 0 && off == 0,
          "36 grid points, " + std::to_string(violations) + " bound violations, " +
              std::to_string(off) + " variance mismatches, max z " + format_real(worst_z)};
}

Verdict variance_trend() {
  auto c = config("variance");
  c.N = {5, 10, 15, 20, 25};
  c.budgets = {0, 1, 2};
  c.trials = 2000;
  const auto rows = run_variance_sweep(c);
  // Rows are ordered N-major, budget-minor.
  auto at = [&](std::size_t n, std::size_t b) { return rows[n * 3 + b].variance; };
  std::string broken;
  for (std::size_t n = 0; n < 5; ++n) {
    for (std::size_t b = 0; b < 3; ++b) {
      if (b > 0 && !(at(n, b) < at(n, b - 1))) {
        broken += " N=" + std::to_string(c.N[n]) + " b=" + std::to_string(b) + ";";
      }
      if (n > 0 && !(at(n, b) < at(n - 1, b))) {
        broken += " b=" + std::to_string(b) + " N=" + std::to_string(c.N[n]) + ";";
      }
    }
  }
  std::string table;
  for (std::size_t n = 0; n < 5; ++n) {
    table += " N=" + std::to_string(c.N[n]) + ":";
    for (std::size_t b = 0; b < 3; ++b) table += " " + format_real(at(n, b));
  }
  return {broken.empty(), (broken.empty() ? "strict in b and N;" : "not strict at" + broken) + table};
}

Verdict multinomial_mean() {
  auto c = config("multinomial");
  c.N = {5};
  c.budgets = {1};
  c.trials = 50;
  double original = 0.0;
  double online = 0.0;
  int below_batch = 0;
  int strict = 0;
  const auto records = run_multinomial(c);
  for (const auto& r : records) {
    original += r.error_original;
    online += r.error_online;
    if (r.error_online < r.error_batch - 1e-12) ++below_batch;
    if (r.error_online > r.error_batch + 1e-12) ++strict;
  }
  const double n = static_cast<double>(records.size());
  return {online <= original && below_batch == 0,
          "mean original " + format_real(original / n) + ", mean online " +
              format_real(online / n) + ", online > batch in " + std::to_string(strict) +
              " of " + std::to_string(records.size())};
}

Verdict bio_rates() {
  auto c = config("bio");
  c.N = {10};
  c.budgets = {0, 1, 2};
  c.trials = 1000;
  c.theta0_label = 4;
  const auto rows = run_bio(c);
  const double r0 = rows[0].rate.rate;
  const double r1 = rows[1].rate.rate;
  const double r2 = rows[2].rate.rate;
  return {r0 > r1 && r1 >= r2 && r2 <= 0.02,
          "rates b0 " + format_real(r0) + ", b1 " + format_real(r1) + ", b2 " + format_real(r2)};
}

Verdict determinism() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"multinomial", "binomial", "variance", "bounds", "bio"}) {
    const auto c = config(name);
    const bool same = csv_of(c) == csv_of(c);
    ok = ok && same;
    detail += std::string(name) + (same ? " ok; " : " DIFFERS; ");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  criterion(1, "e_min exactness", 0.001, emin_exact);
  criterion(2, "binomial online optimality", 10, binomial_optimality);
  criterion(3, "dp equals brute force", 60, oracle_equivalence);
  criterion(4, "closed-form policy value", 5, closed_form_policy);
  criterion(5, "variance bound grid", 60, bound_grid);
  criterion(6, "variance decreases in budget and N", 120, variance_trend);
  criterion(7, "multinomial mean improvement", 10, multinomial_mean);
  criterion(8, "biological misclassification", 300, bio_rates);
  criterion(9, "determinism", 600, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
