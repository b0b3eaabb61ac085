#pragma once

#include "corrlearn/bounds.hpp"
#include "corrlearn/likelihood.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace corrlearn {

enum class OutputFormat { Csv, Json };

/// One experiment run. Empty grids and zero trials mean "use the defaults for
/// this experiment" (see with_defaults).
struct ExperimentConfig {
  std::string experiment;  // multinomial | binomial | variance | bounds | bio | solve
  std::vector<double> theta0;
  std::vector<int> N;
  std::vector<int> budgets;
  std::vector<int> M;  // bounds only
  std::vector<int> B;  // bounds only
  std::int64_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::string candidates;  // bio only: candidate-set file
  int theta0_label = 4;    // bio only
  BioRewardKind reward = BioRewardKind::AbsoluteDifference;
  std::string output;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
};

/// Reads the JSON config document. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Fills empty fields with the per-experiment defaults and validates the
/// result. Throws ConfigError.
ExperimentConfig with_defaults(ExperimentConfig config);

struct ExperimentRecord {
  std::string experiment;
  std::uint64_t seed = 0;
  std::int64_t trial = 0;
  int N = 0;
  int budget = 0;
  double error_original = 0.0;
  double error_online = 0.0;
  double error_batch = 0.0;
  std::optional<double> error_attainable;  // binomial only
  int budget_spent = 0;
};

struct VarianceRow {
  int N = 0;
  int budget = 0;
  std::int64_t trials = 0;
  double mean = 0.0;
  double variance = 0.0;         // unbiased, first coordinate of the estimate
  double variance_stderr = 0.0;  // sqrt((m4 - s^4) / trials)
};

struct BioRow {
  int N = 0;
  MisclassificationRate rate;
};

std::vector<ExperimentRecord> run_multinomial(const ExperimentConfig& config);
std::vector<ExperimentRecord> run_binomial(const ExperimentConfig& config);
std::vector<VarianceRow> run_variance_sweep(const ExperimentConfig& config);
std::vector<BoundReport> run_bounds(const ExperimentConfig& config);
std::vector<BioRow> run_bio(const ExperimentConfig& config);

/// Column-oriented result used by both output formats.
struct Table {
  using Cell = std::variant<std::int64_t, double, std::string>;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

Table to_table(const std::vector<ExperimentRecord>& records);
Table to_table(const std::vector<VarianceRow>& rows);
Table to_table(const std::vector<BoundReport>& rows);
Table to_table(const std::vector<BioRow>& rows);

/// Runs config.experiment (after with_defaults) and tabulates the result.
/// "solve" is not tabular; use write_solved_policy for it.
Table run_experiment(const ExperimentConfig& config);

/// Solves the l1 MDP for theta0, N[0], budgets[0] and dumps the policy.
void write_solved_policy(std::ostream& out, const ExperimentConfig& config);

/// Header row then data rows, LF endings, reals at 12 significant digits.
void write_csv(std::ostream& out, const Table& table);
/// {"columns": [...], "rows": [{...}, ...]}
void write_json(std::ostream& out, const Table& table);

}  // namespace corrlearn
