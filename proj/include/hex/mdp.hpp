#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hex/classifiers.hpp"
#include "hex/dataset.hpp"

namespace hex {

using ActionVector = Eigen::VectorXd;

// Entries with |z_j| above this count as used features.
inline constexpr double kUsedTolerance = 1e-9;

struct RewardConfig {
  double alpha = 4.0;
  double beta = 10.0;
  double epsilon_magnitude = 0.01;
  double omega = 0.5;

  void validate() const;
};

// Acceptability vector: trusted[j] is true when the decider accepts feature j
// in an explanation.
class DeciderProfile {
 public:
  explicit DeciderProfile(std::vector<bool> trusted);

  static DeciderProfile all_trusted(std::size_t p);
  // JSON array of trusted feature names or zero-based indices.
  static DeciderProfile from_json(const nlohmann::json& j, const std::vector<std::string>& feature_names);
  static DeciderProfile load(const std::string& path, const std::vector<std::string>& feature_names);
  // Marks clamp(round(p * uap), 1, p - 1) features untrusted, chosen at random.
  static DeciderProfile random_untrusted(std::size_t p, double uap, Rng& rng);

  std::size_t size() const { return trusted_.size(); }
  bool trusted(std::size_t j) const { return trusted_.at(j); }
  const std::vector<bool>& mask() const { return trusted_; }
  std::size_t untrusted_count() const;

  nlohmann::json to_json() const;  // trusted indices

 private:
  std::vector<bool> trusted_;
};

bool is_used(double zj);
std::size_t used_count(const ActionVector& z);

// +magnitude when the current class is 0, -magnitude otherwise.
double epsilon_x(int current_class, const RewardConfig& config);

// Omega(f(x), omega).
int decision(const ClassifierModel& model, const Instance& x);

// Reward of taking the already projected action z from x. Throws
// std::invalid_argument if x + z leaves [0,1]^p.
double reward(const Instance& x, const ActionVector& z, const ClassifierModel& model,
              const RewardConfig& config);

// x + z clamped to [0,1] to absorb rounding.
Instance transition(const Instance& x, const ActionVector& z);

// Clamps z into [-x, 1-x]; untrusted coordinates become exactly zero.
ActionVector project(const ActionVector& z, const Instance& x,
                     const DeciderProfile* profile = nullptr);

// Number of features used by z that the decider does not trust.
std::size_t disagreement_score(const ActionVector& z, const DeciderProfile& profile);

}  // namespace hex
