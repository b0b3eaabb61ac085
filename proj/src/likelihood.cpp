#include "corrlearn/likelihood.hpp"

#include "corrlearn/dp.hpp"
#include "corrlearn/teacher.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace corrlearn {

CandidateSet::CandidateSet(std::vector<CandidateModel> models)
    : models_(std::move(models)) {
  if (models_.size() < 2) throw std::invalid_argument("need at least two candidate models");
  std::sort(models_.begin(), models_.end(),
            [](const auto& a, const auto& b) { return a.theta < b.theta; });
  for (std::size_t i = 1; i < models_.size(); ++i) {
    if (models_[i].theta == models_[i - 1].theta) {
      throw std::invalid_argument("duplicate candidate label " +
                                  std::to_string(models_[i].theta));
    }
    if (models_[i].action_dist.size() != models_[0].action_dist.size()) {
      throw std::invalid_argument("candidate models disagree on action count");
    }
  }
}

const CandidateModel& CandidateSet::at(int theta) const {
  for (const auto& m : models_) {
    if (m.theta == theta) return m;
  }
  throw std::out_of_range("unknown candidate label " + std::to_string(theta));
}

bool CandidateSet::contains(int theta) const noexcept {
  return std::any_of(models_.begin(), models_.end(),
                     [theta](const auto& m) { return m.theta == theta; });
}

CandidateSet parse_candidate_set(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("candidate set is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "corrlearn-candidates") {
      throw ConfigError("candidate set has the wrong format tag");
    }
    if (doc.at("version").get<int>() != 1) {
      throw ConfigError("unsupported candidate set version");
    }
    std::vector<CandidateModel> models;
    for (const auto& entry : doc.at("models")) {
      models.push_back({entry.at("theta").get<int>(),
                        Categorical(entry.at("probs").get<std::vector<double>>())});
    }
    return CandidateSet(std::move(models));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed candidate set: ") + e.what());
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError(std::string("invalid candidate set: ") + e.what());
  }
}

CandidateSet load_candidate_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open candidate set " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_candidate_set(buf.str());
}

double negative_log_likelihood(const CountVector& counts,
                               const CandidateModel& model) {
  if (counts.size() != model.action_dist.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  double nll = 0.0;
  for (Outcome a = 0; a < counts.size(); ++a) {
    if (counts[a] == 0) continue;
    const double p = model.action_dist[a];
    if (p <= 0.0) return std::numeric_limits<double>::infinity();
    nll -= counts[a] * std::log(p);
  }
  return nll;
}

int ml_estimate(const CountVector& counts, const CandidateSet& candidates) {
  if (counts.total() < 1) throw std::invalid_argument("no observations");
  const CandidateModel* best = nullptr;
  double best_nll = std::numeric_limits<double>::infinity();
  for (const auto& m : candidates.models()) {
    const double nll = negative_log_likelihood(counts, m);
    if (nll < best_nll) {
      best_nll = nll;
      best = &m;
    }
  }
  if (best == nullptr) {
    throw std::domain_error("history impossible under all candidates");
  }
  return best->theta;
}

TerminalReward bio_terminal_reward(int theta0_label, const CandidateSet& candidates,
                                   BioRewardKind kind) {
  if (!candidates.contains(theta0_label)) {
    throw std::out_of_range("unknown candidate label " + std::to_string(theta0_label));
  }
  double worst = 0.0;
  for (const auto& m : candidates.models()) {
    worst = std::max(worst, std::abs(static_cast<double>(m.theta - theta0_label)));
  }
  if (kind == BioRewardKind::Indicator) worst = 1.0;

  return [candidates, theta0_label, kind, worst](const CountVector& counts) {
    int estimate = 0;
    try {
      estimate = ml_estimate(counts, candidates);
    } catch (const std::domain_error&) {
      return -worst;
    }
    if (kind == BioRewardKind::Indicator) return estimate == theta0_label ? 0.0 : -1.0;
    return -std::abs(static_cast<double>(estimate - theta0_label));
  };
}

std::vector<MisclassificationRate> misclassification_experiment(
    int theta0_label, const CandidateSet& candidates, int N,
    const std::vector<int>& budgets, std::int64_t trials, Seed seed,
    BioRewardKind kind) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const Categorical& truth = candidates.at(theta0_label).action_dist;
  const TerminalReward reward = bio_terminal_reward(theta0_label, candidates, kind);

  std::vector<ObservationSequence> histories;
  histories.reserve(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) {
    histories.push_back(sample_sequence(truth, static_cast<std::size_t>(N), seed,
                                        static_cast<std::uint64_t>(t)));
  }

  std::vector<MisclassificationRate> out;
  for (int b : budgets) {
    const MdpSpec spec{truth.size(), N, b, truth, reward};
    const Solution sol = solve(spec);
    MisclassificationRate row{b, trials, 0, 0.0};
    for (const auto& h : histories) {
      const OnlineTrace trace = run_online(h, sol.policy, b);
      if (ml_estimate(trace.corrected_counts(), candidates) != theta0_label) {
        ++row.misclassified;
      }
    }
    row.rate = static_cast<double>(row.misclassified) / static_cast<double>(trials);
    out.push_back(row);
  }
  return out;
}

}  // namespace corrlearn
