#include "corrlearn/experiments.hpp"

#include "corrlearn/batch.hpp"
#include "corrlearn/dp.hpp"
#include "corrlearn/teacher.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace corrlearn {

namespace {

using nlohmann::json;

constexpr double kEmissionTolerance = 1e-12;

const std::set<std::string>& known_experiments() {
  static const std::set<std::string> names{"multinomial", "binomial", "variance",
                                           "bounds",      "bio",      "solve"};
  return names;
}

std::vector<int> int_list(const json& value, const char* key) {
  if (value.is_number_integer()) return {value.get<int>()};
  if (!value.is_array()) {
    throw ConfigError(std::string("'") + key + "' must be an integer or a list of integers");
  }
  return value.get<std::vector<int>>();
}

template <class T>
void default_if_empty(std::vector<T>& field, std::vector<T> fallback) {
  if (field.empty()) field = std::move(fallback);
}

Categorical theta_of(const ExperimentConfig& c) {
  try {
    return Categorical(c.theta0);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("theta0: ") + e.what());
  }
}

std::uint64_t require_seed(const ExperimentConfig& c) {
  if (!c.seed) throw ConfigError("experiment '" + c.experiment + "' requires a seed");
  return *c.seed;
}

void check_positive(const std::vector<int>& values, const char* what, int min) {
  for (int v : values) {
    if (v < min) {
      throw ConfigError(std::string(what) + " must be >= " + std::to_string(min) +
                        ", got " + std::to_string(v));
    }
  }
}

/// Solved policies keyed by (N, b), shared across the trials of one runner.
class PolicyCache {
 public:
  explicit PolicyCache(Categorical theta0) : theta0_(std::move(theta0)) {}

  const Policy& get(int N, int b) {
    auto key = std::make_pair(N, b);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, solve(make_l1_spec(theta0_, N, b)).policy).first;
    }
    return it->second;
  }

 private:
  Categorical theta0_;
  std::map<std::pair<int, int>, Policy> cache_;
};

std::vector<ExperimentRecord> run_correction_trials(const ExperimentConfig& raw,
                                                    bool binomial) {
  const ExperimentConfig c = with_defaults(raw);
  const Categorical theta0 = theta_of(c);
  const std::uint64_t seed = require_seed(c);
  PolicyCache policies(theta0);
  std::vector<ExperimentRecord> records;
  for (int n : c.N) {
    for (int b : c.budgets) {
      const Policy& policy = policies.get(n, b);
      for (std::int64_t t = 0; t < c.trials; ++t) {
        const ObservationSequence seq = sample_sequence(
            theta0, static_cast<std::size_t>(n), Seed{seed}, static_cast<std::uint64_t>(t));
        const OnlineTrace trace = run_online(seq, policy, b);
        const CountVector original = trace.original_counts();
        ExperimentRecord r;
        r.experiment = c.experiment;
        r.seed = seed;
        r.trial = t;
        r.N = n;
        r.budget = b;
        r.error_original = count_l1_error(original, theta0);
        r.error_online = count_l1_error(trace.corrected_counts(), theta0);
        r.error_batch = batch_correct(original, theta0, b).error;
        if (binomial) r.error_attainable = attainable_error(original, theta0, b);
        r.budget_spent = trace.budget_spent;
        if (r.error_batch > r.error_online + kEmissionTolerance) {
          throw InvariantViolation("batch error exceeds online error in trial " +
                                   std::to_string(t));
        }
        records.push_back(std::move(r));
      }
    }
  }
  return records;
}

std::string cell_text(const Table::Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
  return std::get<std::string>(cell);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> keys{
      "experiment", "theta0",       "N",      "budgets", "M",      "B",     "trials",
      "seed",       "candidates",   "theta0_label", "reward", "output", "format"};
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (!keys.count(key)) throw ConfigError("unknown config key '" + key + "'");
      if (key == "experiment") c.experiment = value.get<std::string>();
      else if (key == "theta0") c.theta0 = value.get<std::vector<double>>();
      else if (key == "N") c.N = int_list(value, "N");
      else if (key == "budgets") c.budgets = int_list(value, "budgets");
      else if (key == "M") c.M = int_list(value, "M");
      else if (key == "B") c.B = int_list(value, "B");
      else if (key == "trials") c.trials = value.get<std::int64_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "candidates") c.candidates = value.get<std::string>();
      else if (key == "theta0_label") c.theta0_label = value.get<int>();
      else if (key == "output") c.output = value.get<std::string>();
      else if (key == "reward") {
        const auto r = value.get<std::string>();
        if (r == "absolute") c.reward = BioRewardKind::AbsoluteDifference;
        else if (r == "indicator") c.reward = BioRewardKind::Indicator;
        else throw ConfigError("reward must be 'absolute' or 'indicator'");
      } else if (key == "format") {
        const auto f = value.get<std::string>();
        if (f == "csv") c.format = OutputFormat::Csv;
        else if (f == "json") c.format = OutputFormat::Json;
        else throw ConfigError("format must be 'csv' or 'json'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ExperimentConfig with_defaults(ExperimentConfig c) {
  if (!known_experiments().count(c.experiment)) {
    throw ConfigError("unknown experiment '" + c.experiment + "'");
  }
  const std::string& e = c.experiment;
  if (e == "multinomial" || e == "solve") {
    default_if_empty(c.theta0, {0.4, 0.3, 0.3});
    default_if_empty(c.N, {5});
    default_if_empty(c.budgets, {1});
    if (c.trials == 0) c.trials = 50;
  } else if (e == "binomial") {
    default_if_empty(c.theta0, {0.5, 0.5});
    default_if_empty(c.N, {10});
    default_if_empty(c.budgets, {1});
    if (c.trials == 0) c.trials = 50;
  } else if (e == "variance") {
    default_if_empty(c.theta0, {0.4, 0.3, 0.3});
    default_if_empty(c.N, {5, 10, 15, 20, 25});
    default_if_empty(c.budgets, {0, 1, 2});
    if (c.trials == 0) c.trials = 2000;
  } else if (e == "bounds") {
    default_if_empty(c.N, {5, 10, 25});
    default_if_empty(c.M, {1, 2, 4});
    default_if_empty(c.B, {0, 1, 3, 5});
    if (c.trials == 0) c.trials = 100000;
  } else if (e == "bio") {
    default_if_empty(c.N, {10});
    default_if_empty(c.budgets, {0, 1, 2});
    if (c.trials == 0) c.trials = 1000;
  }

  check_positive(c.N, "N", 1);
  check_positive(c.budgets, "budget", 0);
  if (c.trials < 1) throw ConfigError("trials must be positive");
  if (e != "solve") require_seed(c);

  if (e == "bounds") {
    check_positive(c.M, "M", 1);
    check_positive(c.B, "B", 0);
    if (c.trials < 1000) throw ConfigError("bounds needs at least 1000 trials");
    for (int n : c.N) {
      for (int m : c.M) {
        for (int b : c.B) {
          if (static_cast<std::int64_t>(b) > static_cast<std::int64_t>(n) * m) {
            throw ConfigError("B must not exceed N*M");
          }
        }
      }
    }
  } else if (e == "bio") {
    if (c.candidates.empty()) throw ConfigError("bio needs a candidate-set file");
    const CandidateSet set = load_candidate_set(c.candidates);
    if (!set.contains(c.theta0_label)) {
      throw ConfigError("theta0_label " + std::to_string(c.theta0_label) +
                        " is not in the candidate set");
    }
  } else {
    const Categorical theta0 = theta_of(c);
    if (e == "binomial" && theta0.size() != 2) {
      throw ConfigError("binomial experiment needs a two-outcome theta0");
    }
  }
  return c;
}

std::vector<ExperimentRecord> run_multinomial(const ExperimentConfig& config) {
  return run_correction_trials(config, false);
}

std::vector<ExperimentRecord> run_binomial(const ExperimentConfig& config) {
  return run_correction_trials(config, true);
}

std::vector<VarianceRow> run_variance_sweep(const ExperimentConfig& raw) {
  const ExperimentConfig c = with_defaults(raw);
  const Categorical theta0 = theta_of(c);
  const std::uint64_t seed = require_seed(c);
  PolicyCache policies(theta0);
  std::vector<VarianceRow> rows;
  for (int n : c.N) {
    std::vector<ObservationSequence> sequences;
    sequences.reserve(static_cast<std::size_t>(c.trials));
    for (std::int64_t t = 0; t < c.trials; ++t) {
      sequences.push_back(sample_sequence(theta0, static_cast<std::size_t>(n), Seed{seed},
                                          static_cast<std::uint64_t>(t)));
    }
    for (int b : c.budgets) {
      const Policy& policy = policies.get(n, b);
      std::vector<double> first;
      first.reserve(sequences.size());
      for (const auto& seq : sequences) {
        first.push_back(static_cast<double>(run_online(seq, policy, b).corrected_counts()[0]) / n);
      }
      const double count = static_cast<double>(first.size());
      double mean = 0.0;
      for (double x : first) mean += x;
      mean /= count;
      double s2 = 0.0;
      double s4 = 0.0;
      for (double x : first) {
        const double d = x - mean;
        s2 += d * d;
        s4 += d * d * d * d;
      }
      VarianceRow row{n, b, c.trials, mean, 0.0, 0.0};
      row.variance = count > 1 ? s2 / (count - 1.0) : 0.0;
      row.variance_stderr =
          std::sqrt(std::max(0.0, s4 / count - row.variance * row.variance) / count);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<BoundReport> run_bounds(const ExperimentConfig& raw) {
  const ExperimentConfig c = with_defaults(raw);
  const std::uint64_t seed = require_seed(c);
  std::vector<BoundReport> rows;
  for (int n : c.N) {
    for (int m : c.M) {
      for (int b : c.B) {
        rows.push_back(monte_carlo_report(n, m, b, c.trials, Seed{seed}));
      }
    }
  }
  return rows;
}

std::vector<BioRow> run_bio(const ExperimentConfig& raw) {
  const ExperimentConfig c = with_defaults(raw);
  const std::uint64_t seed = require_seed(c);
  const CandidateSet candidates = load_candidate_set(c.candidates);
  std::vector<BioRow> rows;
  for (int n : c.N) {
    for (const auto& rate : misclassification_experiment(
             c.theta0_label, candidates, n, c.budgets, c.trials, Seed{seed}, c.reward)) {
      rows.push_back({n, rate});
    }
  }
  return rows;
}

Table to_table(const std::vector<ExperimentRecord>& records) {
  const bool attainable = !records.empty() && records.front().error_attainable.has_value();
  Table t;
  t.header = {"experiment", "seed", "trial", "N", "budget",
              "error_original", "error_online", "error_batch"};
  if (attainable) t.header.push_back("error_attainable");
  t.header.push_back("budget_spent");
  for (const auto& r : records) {
    std::vector<Table::Cell> row{r.experiment,
                                 std::to_string(r.seed),
                                 r.trial,
                                 std::int64_t{r.N},
                                 std::int64_t{r.budget},
                                 r.error_original,
                                 r.error_online,
                                 r.error_batch};
    if (attainable) row.emplace_back(r.error_attainable.value_or(NAN));
    row.emplace_back(std::int64_t{r.budget_spent});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table to_table(const std::vector<VarianceRow>& rows) {
  Table t;
  t.header = {"N", "budget", "trials", "mean", "variance", "variance_stderr"};
  for (const auto& r : rows) {
    t.rows.push_back({std::int64_t{r.N}, std::int64_t{r.budget}, r.trials, r.mean,
                      r.variance, r.variance_stderr});
  }
  return t;
}

Table to_table(const std::vector<BoundReport>& rows) {
  Table t;
  t.header = {"N", "M", "B", "trials", "bound_abs", "bound_ratio_paper",
              "var_orig", "var_corr", "ratio"};
  for (const auto& r : rows) {
    t.rows.push_back({std::int64_t{r.N}, std::int64_t{r.M}, std::int64_t{r.B}, r.trials,
                      r.bound_abs, r.bound_ratio_paper, r.empirical_var_original,
                      r.empirical_var_corrected, r.empirical_ratio});
  }
  return t;
}

Table to_table(const std::vector<BioRow>& rows) {
  Table t;
  t.header = {"N", "budget", "trials", "misclassified", "rate"};
  for (const auto& r : rows) {
    t.rows.push_back({std::int64_t{r.N}, std::int64_t{r.rate.budget}, r.rate.trials,
                      r.rate.misclassified, r.rate.rate});
  }
  return t;
}

Table run_experiment(const ExperimentConfig& config) {
  const std::string& e = config.experiment;
  if (e == "multinomial") return to_table(run_multinomial(config));
  if (e == "binomial") return to_table(run_binomial(config));
  if (e == "variance") return to_table(run_variance_sweep(config));
  if (e == "bounds") return to_table(run_bounds(config));
  if (e == "bio") return to_table(run_bio(config));
  if (e == "solve") throw ConfigError("'solve' produces a policy dump, not a table");
  throw ConfigError("unknown experiment '" + e + "'");
}

void write_solved_policy(std::ostream& out, const ExperimentConfig& raw) {
  const ExperimentConfig c = with_defaults(raw);
  const Categorical theta0 = theta_of(c);
  write_policy(out, solve(make_l1_spec(theta0, c.N.front(), c.budgets.front())).policy);
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << cell_text(row[i]);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  // ordered_json keeps each row in column order.
  nlohmann::ordered_json doc;
  doc["columns"] = table.header;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[table.header[i]] = v; }, row[i]);
    }
    doc["rows"].push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace corrlearn
