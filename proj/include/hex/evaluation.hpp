#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hex/growing_spheres.hpp"
#include "hex/synthesis.hpp"

namespace hex {

// |f(x') - omega|.
double dbd(const ClassifierModel& model, const Instance& x_prime);

// Used-and-untrusted feature count over the untrusted count (round(p * uap)
// for a consistent profile). Throws if uap <= 0.
double uep(const ActionVector& z, const DeciderProfile& profile, double uap);

// Top-q features by |z_j|, ties by index, zero entries left out.
std::vector<std::pair<std::string, double>> explanation_ranking(const ActionVector& z,
                                                                const std::vector<std::string>& feature_names,
                                                                std::size_t q);

// Trailing mean over the last min(window, i + 1) values.
std::vector<double> rolling_curve(const std::vector<double>& values, std::size_t window);

enum class ExplainerKind { ddpg, td3, hex_ddpg, hex_td3, grow, random };
std::string to_string(ExplainerKind kind);
ExplainerKind explainer_from_string(const std::string& name);
bool is_drl(ExplainerKind kind);
bool is_hex(ExplainerKind kind);

// TrainConfig for a DRL explainer: algorithm from the kind; HEX variants add
// selective buffering, SMOTE and (when given) the decider profile.
TrainConfig explainer_train_config(ExplainerKind kind, const TrainConfig& base,
                                   const std::optional<DeciderProfile>& profile);

enum class Scenario { decider_free, hitl };
std::string to_string(Scenario scenario);
Scenario scenario_from_string(const std::string& name);

struct EvalRecord {
  std::size_t instance = 0;  // row in the held-out set
  bool found = true;         // false when the explainer returned nothing
  ActionVector z;
  Instance x_prime;
  double f_x_prime = 0.0;
  double dbd = 0.0;
  std::optional<double> uep;
  double reward = 0.0;
};

struct EvalReport {
  std::string model;
  std::string explainer;
  Scenario scenario = Scenario::decider_free;
  std::optional<double> uap;
  int trial = 0;
  std::uint64_t trial_seed = 0;
  std::vector<EvalRecord> records;
  std::vector<double> learning_curve;  // empty for non-DRL explainers

  // Means over found records; NaN when there are none.
  double mean_dbd = 0.0;
  double mean_uep = 0.0;
  double mean_reward = 0.0;
  double found_fraction = 0.0;

  void recompute();
};

// Scores explanations (z, x') of the given instances into a report.
EvalReport score_explanations(const ClassifierModel& model, const Dataset& test,
                              const std::vector<std::size_t>& rows,
                              const std::vector<std::optional<std::pair<ActionVector, Instance>>>& explanations,
                              const RewardConfig& reward_config, const DeciderProfile* profile,
                              std::optional<double> uap);

struct ModelEntry {
  std::string name;
  const ClassifierModel* model = nullptr;
  const Dataset* policy_data = nullptr;  // data the policies learn on
  const Dataset* test_data = nullptr;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::decider_free;
  int trials = 10;
  std::size_t test_instances = 100;
  std::vector<double> uaps = {0.1, 0.5, 0.9};
  TrainConfig train;
  GrowConfig grow;
  std::uint64_t seed = 0;
};

// One report per model x explainer x trial (x UAP under hitl). Each trial
// draws one random untrusted set per UAP shared by every model and explainer;
// HEX explainers learn one policy per UAP, the others learn once and are
// scored against every UAP.
std::vector<EvalReport> run_scenario(const ScenarioConfig& config, const std::vector<ModelEntry>& models,
                                     const std::vector<ExplainerKind>& explainers);

struct AggregateRow {
  std::string model;
  std::string explainer;
  Scenario scenario = Scenario::decider_free;
  std::optional<double> uap;
  int trials = 0;
  // Unweighted means of the per-trial means.
  double mean_dbd = 0.0;
  double mean_uep = 0.0;
  double mean_reward = 0.0;
  double found_fraction = 0.0;
};

std::vector<AggregateRow> aggregate(const std::vector<EvalReport>& reports);

void write_records_csv(const std::vector<EvalReport>& reports, const std::vector<std::string>& feature_names,
                       std::ostream& out);
nlohmann::json aggregates_json(const std::vector<AggregateRow>& rows);
void write_learning_curve_csv(const std::vector<double>& rewards, std::size_t window, std::ostream& out);

}  // namespace hex
