#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "hex/densenet.hpp"
#include "hex/mdp.hpp"
#include "hex/replay_buffer.hpp"

namespace hex {

enum class Algorithm { ddpg, td3 };
std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

struct PolicyConfig {
  Algorithm algorithm = Algorithm::td3;
  double gamma = 0.99;
  double tau = 0.005;
  double exploration_sigma = 0.1;
  std::vector<int> hidden_sizes = {50, 50};
  double learning_rate = 0.001;
  // Drop the bootstrap term on transitions flagged terminal.
  bool terminal_mask = true;

  void validate() const;
  nlohmann::json to_json() const;
  static PolicyConfig from_json(const nlohmann::json& j);
};

// A minibatch laid out with one sample per column.
struct Batch {
  Eigen::MatrixXd x;
  Eigen::MatrixXd z;
  Eigen::VectorXd reward;
  Eigen::MatrixXd x_next;
  Eigen::VectorXd terminal;  // 1 for terminal transitions

  static Batch from_tuples(const std::vector<const ExperienceTuple*>& tuples);
  std::size_t size() const { return static_cast<std::size_t>(x.cols()); }
};

struct TargetBreakdown {
  Eigen::VectorXd y;                       // the target used in the loss
  std::vector<Eigen::VectorXd> per_critic;  // r + gamma * Q'_k for each target critic
};

// Actor p -> p with tanh output (actions in [-1, 1]); critics take the
// stacked [x; z] and return a scalar.
class ActorCriticPolicy {
 public:
  ActorCriticPolicy(PolicyConfig config, DenseNet actor, std::vector<DenseNet> critics);

  static ActorCriticPolicy create(std::size_t p, const PolicyConfig& config, Rng& rng);

  const PolicyConfig& config() const { return config_; }
  std::size_t state_dim() const { return static_cast<std::size_t>(actor_.input_dim()); }

  const DenseNet& actor() const { return actor_; }
  const std::vector<DenseNet>& critics() const { return critics_; }
  const DenseNet& target_actor() const { return target_actor_; }
  const std::vector<DenseNet>& target_critics() const { return target_critics_; }
  DenseNet& mutable_actor() { return actor_; }
  std::vector<DenseNet>& mutable_critics() { return critics_; }
  DenseNet& mutable_target_actor() { return target_actor_; }
  std::vector<DenseNet>& mutable_target_critics() { return target_critics_; }

  // Deterministic, unprojected pi(x).
  ActionVector act(const Instance& x) const;
  // pi(x) plus per-dimension Gaussian noise, unprojected.
  ActionVector explore(const Instance& x, Rng& rng) const;

  double q_value(std::size_t critic, const Instance& x, const ActionVector& z) const;

  // Noisy target-actor actions at each column of x_next, projected onto the
  // feasible set.
  Eigen::MatrixXd target_actions(const Eigen::MatrixXd& x_next, Rng& rng,
                                 const DeciderProfile* profile) const;
  TargetBreakdown critic_target(const Batch& batch, Rng& rng, const DeciderProfile* profile) const;
  // Target with the given actions at x_next (no noise).
  TargetBreakdown critic_target(const Batch& batch, const Eigen::MatrixXd& next_actions) const;

  // One Adam step per critic on the mean squared error against y; returns the
  // loss before the step, averaged over critics.
  double critic_update(const Batch& batch, const Eigen::VectorXd& y);
  // One Adam step ascending mean Q_1(x, pi(x)). The action is projected
  // before the critic sees it. Where the raw action lies outside the box the
  // gradient is kept only if it points back inside; untrusted coordinates get
  // no gradient.
  void actor_update(const Batch& batch, const DeciderProfile* profile);
  // Gradient of -mean Q_1(x, pi(x)) with respect to the actor parameters.
  Eigen::VectorXd actor_gradient(const Batch& batch, const DeciderProfile* profile) const;
  void soft_update();
  void soft_update(double tau);

  // z = project(pi(x)), x' = x + z.
  std::pair<ActionVector, Instance> explain(const Instance& x, const DeciderProfile* profile) const;

  bool all_finite() const;

  nlohmann::json to_json() const;
  static ActorCriticPolicy from_json(const nlohmann::json& j);

 private:
  Eigen::MatrixXd stack(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z) const;
  Eigen::MatrixXd projected_columns(const Eigen::MatrixXd& raw, const Eigen::MatrixXd& x,
                                    const DeciderProfile* profile) const;

  PolicyConfig config_;
  DenseNet actor_;
  std::vector<DenseNet> critics_;
  DenseNet target_actor_;
  std::vector<DenseNet> target_critics_;
  AdamState actor_adam_;
  std::vector<AdamState> critic_adam_;
};

}  // namespace hex
