#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hex/actor_critic.hpp"

namespace hex {

struct TrainConfig {
  int episodes = 1000;
  int inner_iterations = 300;
  int batch_size = 64;
  int selective_window = 5;
  // Random-action tuples placed in the buffer before learning; 0 means
  // batch_size.
  int cold_start_count = 0;
  // 0 means episodes * inner_iterations.
  std::size_t buffer_capacity = 0;
  bool selective_buffering = true;
  bool smote = false;
  int smote_neighbors = 5;
  // End an episode as soon as the class differs from the episode's start.
  bool terminate_on_flip = true;
  std::uint64_t seed = 0;
  PolicyConfig policy;
  RewardConfig reward;
  std::optional<DeciderProfile> hitl;

  void validate() const;
  // Everything except the decider profile.
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

// Observation points for tests and diagnostics.
struct SynthesisHooks {
  std::function<void(const Batch&, const TargetBreakdown&)> on_target;
  std::function<void(long step, const ExperienceTuple&)> on_step;
};

struct SynthesisResult {
  ActorCriticPolicy policy;
  std::vector<double> episode_rewards;  // mean step reward per episode
  long environment_steps = 0;
  long updates = 0;
};

// Learns an explanation policy for model on data. Throws ShapeError when the
// model and data disagree on p and TrainingError on a non-finite loss.
SynthesisResult synthesize_policy(const ClassifierModel& model, const Dataset& data, const TrainConfig& config,
                                  const SynthesisHooks& hooks = {});

// FNV-1a of the canonical config dump, as 16 hex digits.
std::string config_hash(const TrainConfig& config);

struct PolicyManifest {
  ActorCriticPolicy policy;
  nlohmann::json train_config;
  std::optional<DeciderProfile> profile;
};

nlohmann::json policy_manifest(const ActorCriticPolicy& policy, const TrainConfig& config);
PolicyManifest load_policy_manifest(const nlohmann::json& j);

}  // namespace hex
