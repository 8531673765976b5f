#include "hex/synthesis.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>

namespace hex {

namespace {

constexpr const char* kManifestFormat = "hex.policy";
constexpr int kManifestVersion = 1;

ActionVector random_feasible_action(const Instance& x, const DeciderProfile* profile, Rng& rng) {
  ActionVector z(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) z(j) = rng.uniform(-x(j), 1.0 - x(j));
  return project(z, x, profile);
}

ExperienceTuple step_tuple(const Instance& x, ActionVector z, const ClassifierModel& model,
                           const RewardConfig& reward_config) {
  ExperienceTuple t;
  t.reward = reward(x, z, model, reward_config);
  t.x_next = transition(x, z);
  t.x = x;
  t.z = std::move(z);
  return t;
}

}  // namespace

void TrainConfig::validate() const {
  if (episodes < 1 || inner_iterations < 1 || batch_size < 1 || selective_window < 1) {
    throw std::invalid_argument("episodes, inner iterations, batch size and window must be at least 1");
  }
  if (cold_start_count < 0) throw std::invalid_argument("cold start count must be non-negative");
  if (smote_neighbors < 1) throw std::invalid_argument("SMOTE neighbours must be at least 1");
  policy.validate();
  reward.validate();
}

nlohmann::json TrainConfig::to_json() const {
  return {{"episodes", episodes},
          {"inner_iterations", inner_iterations},
          {"batch_size", batch_size},
          {"selective_window", selective_window},
          {"cold_start_count", cold_start_count},
          {"buffer_capacity", buffer_capacity},
          {"selective_buffering", selective_buffering},
          {"smote", smote},
          {"smote_neighbors", smote_neighbors},
          {"terminate_on_flip", terminate_on_flip},
          {"seed", seed},
          {"policy", policy.to_json()},
          {"reward",
           {{"alpha", reward.alpha},
            {"beta", reward.beta},
            {"epsilon_magnitude", reward.epsilon_magnitude},
            {"omega", reward.omega}}}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.episodes = j.at("episodes").get<int>();
  c.inner_iterations = j.at("inner_iterations").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.selective_window = j.at("selective_window").get<int>();
  c.cold_start_count = j.at("cold_start_count").get<int>();
  c.buffer_capacity = j.at("buffer_capacity").get<std::size_t>();
  c.selective_buffering = j.at("selective_buffering").get<bool>();
  c.smote = j.at("smote").get<bool>();
  c.smote_neighbors = j.at("smote_neighbors").get<int>();
  c.terminate_on_flip = j.at("terminate_on_flip").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.policy = PolicyConfig::from_json(j.at("policy"));
  const auto& r = j.at("reward");
  c.reward.alpha = r.at("alpha").get<double>();
  c.reward.beta = r.at("beta").get<double>();
  c.reward.epsilon_magnitude = r.at("epsilon_magnitude").get<double>();
  c.reward.omega = r.at("omega").get<double>();
  return c;
}

SynthesisResult synthesize_policy(const ClassifierModel& model, const Dataset& data, const TrainConfig& config,
                                  const SynthesisHooks& hooks) {
  config.validate();
  if (data.size() == 0) throw DataError("policy-learning dataset is empty");
  const std::size_t p = data.dim();
  if (model.input_dim() != p) {
    throw ShapeError("model expects " + std::to_string(model.input_dim()) + " features, data has " +
                     std::to_string(p));
  }
  if (config.hitl && config.hitl->size() != p) throw ShapeError("decider profile length differs from data");
  const DeciderProfile* profile = config.hitl ? &*config.hitl : nullptr;

  Rng root(config.seed);
  Rng sample_rng = root.fork("sample");
  Rng explore_rng = root.fork("explore");
  Rng batch_rng = root.fork("batch");
  Rng target_rng = root.fork("target");
  Rng cold_rng = root.fork("cold_start");
  Rng init_rng = root.fork("init");

  Dataset pool = data;
  if (config.smote) {
    if (data.count_label(0) == 0 || data.count_label(1) == 0) {
      std::cerr << "warning: SMOTE skipped, policy-learning data has a single class\n";
    } else {
      pool = smote_oversample(data, config.smote_neighbors, root.fork("smote").seed());
    }
  }

  SynthesisResult result{ActorCriticPolicy::create(p, config.policy, init_rng), {}, 0, 0};
  ActorCriticPolicy& policy = result.policy;

  const std::size_t capacity =
      config.buffer_capacity > 0
          ? config.buffer_capacity
          : static_cast<std::size_t>(config.episodes) * static_cast<std::size_t>(config.inner_iterations);
  ReplayBuffer buffer(capacity);
  SelectiveBuffer selective(static_cast<std::size_t>(config.selective_window));

  const int cold = config.cold_start_count > 0 ? config.cold_start_count : config.batch_size;
  for (int k = 0; k < cold; ++k) {
    const Instance& x = pool.features[cold_rng.index(pool.size())];
    buffer.insert(step_tuple(x, random_feasible_action(x, profile, cold_rng), model, config.reward));
  }

  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  auto update = [&](long step) {
    const Batch batch = Batch::from_tuples(buffer.sample_uniform(batch_size, batch_rng));
    const TargetBreakdown target = policy.critic_target(batch, target_rng, profile);
    if (hooks.on_target) hooks.on_target(batch, target);
    const double loss = policy.critic_update(batch, target.y);
    if (!std::isfinite(loss)) {
      throw TrainingError("critic loss became non-finite at environment step " + std::to_string(step));
    }
    policy.actor_update(batch, profile);
    policy.soft_update();
    if (!policy.all_finite()) {
      throw TrainingError("policy parameters became non-finite at environment step " + std::to_string(step));
    }
    ++result.updates;
  };

  long step = 0;
  result.episode_rewards.reserve(static_cast<std::size_t>(config.episodes));
  for (int e = 0; e < config.episodes; ++e) {
    Instance x = pool.features[sample_rng.index(pool.size())];
    const int start_class = model.classify(x);
    double total = 0.0;
    int taken = 0;
    for (int t = 0; t < config.inner_iterations; ++t) {
      const ActionVector z = project(policy.explore(x, explore_rng), x, profile);
      ExperienceTuple tuple = step_tuple(x, z, model, config.reward);
      total += tuple.reward;
      ++taken;
      ++step;
      x = tuple.x_next;
      const bool flipped = config.terminate_on_flip && model.classify(x) != start_class;
      tuple.terminal = flipped;
      if (hooks.on_step) hooks.on_step(step, tuple);
      if (config.selective_buffering) {
        selective.observe(tuple, buffer);
      } else {
        buffer.insert(std::move(tuple));
      }
      if (config.policy.algorithm == Algorithm::ddpg || step % 2 == 0) update(step);
      if (flipped) break;
    }
    result.episode_rewards.push_back(total / taken);
  }
  result.environment_steps = step;
  return result;
}

std::string config_hash(const TrainConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config.to_json().dump())));
  return buf;
}

nlohmann::json policy_manifest(const ActorCriticPolicy& policy, const TrainConfig& config) {
  return {{"format", kManifestFormat},
          {"version", kManifestVersion},
          {"algorithm", to_string(policy.config().algorithm)},
          {"mode", config.hitl ? "hitl" : "decider_free"},
          {"config_hash", config_hash(config)},
          {"train_config", config.to_json()},
          {"decider_profile", config.hitl ? config.hitl->to_json() : nlohmann::json(nullptr)},
          {"state_dim", policy.state_dim()},
          {"policy", policy.to_json()}};
}

PolicyManifest load_policy_manifest(const nlohmann::json& j) {
  if (j.value("format", "") != kManifestFormat) throw DataError("not a policy manifest");
  if (j.value("version", 0) != kManifestVersion) throw DataError("unsupported policy manifest version");
  PolicyManifest m{ActorCriticPolicy::from_json(j.at("policy")), j.at("train_config"), std::nullopt};
  const auto& profile = j.at("decider_profile");
  if (!profile.is_null()) {
    const auto p = j.at("state_dim").get<std::size_t>();
    std::vector<std::string> names(p);
    m.profile = DeciderProfile::from_json(profile, names);
  }
  return m;
}

}  // namespace hex
