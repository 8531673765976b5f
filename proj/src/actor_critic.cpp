#include "hex/actor_critic.hpp"

#include <algorithm>
#include <stdexcept>

namespace hex {

std::string to_string(Algorithm algorithm) { return algorithm == Algorithm::ddpg ? "ddpg" : "td3"; }

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "ddpg") return Algorithm::ddpg;
  if (name == "td3") return Algorithm::td3;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected ddpg or td3)");
}

void PolicyConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in (0,1]");
  if (!(exploration_sigma >= 0.0)) throw std::invalid_argument("exploration sigma must be non-negative");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  for (int h : hidden_sizes) {
    if (h <= 0) throw std::invalid_argument("hidden sizes must be positive");
  }
}

nlohmann::json PolicyConfig::to_json() const {
  return {{"algorithm", to_string(algorithm)}, {"gamma", gamma},
          {"tau", tau},                        {"exploration_sigma", exploration_sigma},
          {"hidden_sizes", hidden_sizes},      {"learning_rate", learning_rate},
          {"terminal_mask", terminal_mask}};
}

PolicyConfig PolicyConfig::from_json(const nlohmann::json& j) {
  PolicyConfig c;
  c.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  c.gamma = j.at("gamma").get<double>();
  c.tau = j.at("tau").get<double>();
  c.exploration_sigma = j.at("exploration_sigma").get<double>();
  c.hidden_sizes = j.at("hidden_sizes").get<std::vector<int>>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.terminal_mask = j.value("terminal_mask", true);
  c.validate();
  return c;
}

Batch Batch::from_tuples(const std::vector<const ExperienceTuple*>& tuples) {
  if (tuples.empty()) throw std::invalid_argument("batch is empty");
  const auto p = tuples.front()->x.size();
  const auto n = static_cast<Eigen::Index>(tuples.size());
  Batch b;
  b.x.resize(p, n);
  b.z.resize(p, n);
  b.x_next.resize(p, n);
  b.reward.resize(n);
  b.terminal.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& t = *tuples[static_cast<std::size_t>(i)];
    b.x.col(i) = t.x;
    b.z.col(i) = t.z;
    b.x_next.col(i) = t.x_next;
    b.reward(i) = t.reward;
    b.terminal(i) = t.terminal ? 1.0 : 0.0;
  }
  return b;
}

ActorCriticPolicy::ActorCriticPolicy(PolicyConfig config, DenseNet actor, std::vector<DenseNet> critics)
    : config_(std::move(config)), actor_(std::move(actor)), critics_(std::move(critics)) {
  config_.validate();
  const std::size_t expected = config_.algorithm == Algorithm::td3 ? 2 : 1;
  if (critics_.size() != expected) {
    throw std::invalid_argument(to_string(config_.algorithm) + " needs " + std::to_string(expected) +
                                " critic(s)");
  }
  if (actor_.input_dim() != actor_.output_dim()) throw ShapeError("actor must map p features to p actions");
  for (const auto& c : critics_) {
    if (c.input_dim() != 2 * actor_.input_dim() || c.output_dim() != 1) {
      throw ShapeError("critic must map 2p inputs to one value");
    }
  }
  target_actor_ = actor_;
  target_critics_ = critics_;
  actor_adam_ = AdamState::for_parameters(actor_.parameter_count(), config_.learning_rate);
  for (const auto& c : critics_) {
    critic_adam_.push_back(AdamState::for_parameters(c.parameter_count(), config_.learning_rate));
  }
}

ActorCriticPolicy ActorCriticPolicy::create(std::size_t p, const PolicyConfig& config, Rng& rng) {
  if (p == 0) throw std::invalid_argument("state dimension must be positive");
  config.validate();
  const int pi = static_cast<int>(p);
  std::vector<int> actor_sizes{pi};
  std::vector<int> critic_sizes{2 * pi};
  for (int h : config.hidden_sizes) {
    actor_sizes.push_back(h);
    critic_sizes.push_back(h);
  }
  actor_sizes.push_back(pi);
  critic_sizes.push_back(1);
  Rng actor_rng = rng.fork("actor");
  DenseNet actor = DenseNet::create(actor_sizes, Activation::relu, Activation::tanh, actor_rng);
  std::vector<DenseNet> critics;
  const int count = config.algorithm == Algorithm::td3 ? 2 : 1;
  for (int k = 0; k < count; ++k) {
    Rng critic_rng = rng.fork("critic" + std::to_string(k));
    critics.push_back(DenseNet::create(critic_sizes, Activation::relu, Activation::identity, critic_rng));
  }
  return ActorCriticPolicy(config, std::move(actor), std::move(critics));
}

ActionVector ActorCriticPolicy::act(const Instance& x) const {
  if (static_cast<std::size_t>(x.size()) != state_dim()) throw ShapeError("state dimension mismatch");
  return actor_.forward(x);
}

ActionVector ActorCriticPolicy::explore(const Instance& x, Rng& rng) const {
  ActionVector z = act(x);
  for (Eigen::Index j = 0; j < z.size(); ++j) z(j) += rng.normal(0.0, config_.exploration_sigma);
  return z;
}

double ActorCriticPolicy::q_value(std::size_t critic, const Instance& x, const ActionVector& z) const {
  Eigen::VectorXd input(x.size() + z.size());
  input << x, z;
  return critics_.at(critic).forward(input)(0);
}

Eigen::MatrixXd ActorCriticPolicy::stack(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z) const {
  Eigen::MatrixXd out(x.rows() + z.rows(), x.cols());
  out.topRows(x.rows()) = x;
  out.bottomRows(z.rows()) = z;
  return out;
}

Eigen::MatrixXd ActorCriticPolicy::projected_columns(const Eigen::MatrixXd& raw, const Eigen::MatrixXd& x,
                                                     const DeciderProfile* profile) const {
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Eigen::Index i = 0; i < raw.cols(); ++i) {
    out.col(i) = project(raw.col(i), x.col(i), profile);
  }
  return out;
}

Eigen::MatrixXd ActorCriticPolicy::target_actions(const Eigen::MatrixXd& x_next, Rng& rng,
                                                  const DeciderProfile* profile) const {
  Eigen::MatrixXd raw = target_actor_.forward(x_next);
  for (Eigen::Index i = 0; i < raw.cols(); ++i) {
    for (Eigen::Index j = 0; j < raw.rows(); ++j) raw(j, i) += rng.normal(0.0, config_.exploration_sigma);
  }
  return projected_columns(raw, x_next, profile);
}

TargetBreakdown ActorCriticPolicy::critic_target(const Batch& batch, Rng& rng,
                                                 const DeciderProfile* profile) const {
  return critic_target(batch, target_actions(batch.x_next, rng, profile));
}

TargetBreakdown ActorCriticPolicy::critic_target(const Batch& batch, const Eigen::MatrixXd& next_actions) const {
  const Eigen::MatrixXd input = stack(batch.x_next, next_actions);
  TargetBreakdown out;
  for (const auto& critic : target_critics_) {
    Eigen::VectorXd q = critic.forward(input).row(0).transpose();
    if (config_.terminal_mask && batch.terminal.size() == q.size()) {
      q = q.cwiseProduct((1.0 - batch.terminal.array()).matrix());
    }
    out.per_critic.push_back(batch.reward + config_.gamma * q);
  }
  out.y = out.per_critic.front();
  for (std::size_t k = 1; k < out.per_critic.size(); ++k) out.y = out.y.cwiseMin(out.per_critic[k]);
  return out;
}

double ActorCriticPolicy::critic_update(const Batch& batch, const Eigen::VectorXd& y) {
  if (batch.size() == 0) throw std::invalid_argument("critic update needs a nonempty batch");
  if (static_cast<std::size_t>(y.size()) != batch.size()) throw ShapeError("target length differs from batch");
  const Eigen::MatrixXd input = stack(batch.x, batch.z);
  const double n = static_cast<double>(batch.size());
  double total = 0.0;
  for (std::size_t k = 0; k < critics_.size(); ++k) {
    const Eigen::RowVectorXd diff = critics_[k].forward(input).row(0) - y.transpose();
    total += diff.squaredNorm() / n;
    const Eigen::MatrixXd grad = (2.0 / n) * diff;
    adam_step(critics_[k], critics_[k].backward(input, grad).parameters, critic_adam_[k]);
  }
  return total / static_cast<double>(critics_.size());
}

Eigen::VectorXd ActorCriticPolicy::actor_gradient(const Batch& batch, const DeciderProfile* profile) const {
  const auto p = actor_.input_dim();
  const Eigen::MatrixXd raw = actor_.forward(batch.x);
  const Eigen::MatrixXd z = projected_columns(raw, batch.x, profile);
  const Eigen::MatrixXd input = stack(batch.x, z);
  const Eigen::MatrixXd seed = Eigen::MatrixXd::Constant(1, input.cols(), -1.0 / static_cast<double>(batch.size()));
  Eigen::MatrixXd dz = critics_.front().backward(input, seed).inputs.bottomRows(p);
  for (Eigen::Index i = 0; i < dz.cols(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (profile && !profile->trusted(static_cast<std::size_t>(j))) {
        dz(j, i) = 0.0;
        continue;
      }
      // Outside the box only a step back toward it is kept; a descent step
      // moves the raw action by -dz.
      const double r = raw(j, i);
      if ((r > 1.0 - batch.x(j, i) && dz(j, i) < 0.0) || (r < -batch.x(j, i) && dz(j, i) > 0.0)) {
        dz(j, i) = 0.0;
      }
    }
  }
  return actor_.backward(batch.x, dz).parameters;
}

void ActorCriticPolicy::actor_update(const Batch& batch, const DeciderProfile* profile) {
  if (batch.size() == 0) throw std::invalid_argument("actor update needs a nonempty batch");
  adam_step(actor_, actor_gradient(batch, profile), actor_adam_);
}

void ActorCriticPolicy::soft_update() { soft_update(config_.tau); }

void ActorCriticPolicy::soft_update(double tau) {
  auto blend = [tau](const DenseNet& online, DenseNet& target) {
    target.set_parameters(tau * online.parameters() + (1.0 - tau) * target.parameters());
  };
  blend(actor_, target_actor_);
  for (std::size_t k = 0; k < critics_.size(); ++k) blend(critics_[k], target_critics_[k]);
}

std::pair<ActionVector, Instance> ActorCriticPolicy::explain(const Instance& x,
                                                             const DeciderProfile* profile) const {
  ActionVector z = project(act(x), x, profile);
  Instance x_prime = transition(x, z);
  return {std::move(z), std::move(x_prime)};
}

bool ActorCriticPolicy::all_finite() const {
  if (!actor_.all_finite() || !target_actor_.all_finite()) return false;
  for (const auto& c : critics_) {
    if (!c.all_finite()) return false;
  }
  for (const auto& c : target_critics_) {
    if (!c.all_finite()) return false;
  }
  return true;
}

nlohmann::json ActorCriticPolicy::to_json() const {
  nlohmann::json critics = nlohmann::json::array();
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& c : critics_) critics.push_back(c.to_json());
  for (const auto& c : target_critics_) targets.push_back(c.to_json());
  return {{"config", config_.to_json()},
          {"actor", actor_.to_json()},
          {"critics", critics},
          {"target_actor", target_actor_.to_json()},
          {"target_critics", targets}};
}

ActorCriticPolicy ActorCriticPolicy::from_json(const nlohmann::json& j) {
  std::vector<DenseNet> critics;
  for (const auto& c : j.at("critics")) critics.push_back(DenseNet::from_json(c));
  ActorCriticPolicy policy(PolicyConfig::from_json(j.at("config")), DenseNet::from_json(j.at("actor")),
                           std::move(critics));
  policy.target_actor_ = DenseNet::from_json(j.at("target_actor"));
  policy.target_critics_.clear();
  for (const auto& c : j.at("target_critics")) policy.target_critics_.push_back(DenseNet::from_json(c));
  if (policy.target_critics_.size() != policy.critics_.size()) throw DataError("target critic count mismatch");
  return policy;
}

}  // namespace hex
