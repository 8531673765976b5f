#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hex/error.hpp"
#include "hex/rng.hpp"

namespace hex {

enum class Activation { relu, sigmoid, tanh, identity };

std::string to_string(Activation activation);
Activation activation_from_string(const std::string& name);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::identity;

  Eigen::Index input_dim() const { return weights.cols(); }
  Eigen::Index output_dim() const { return weights.rows(); }
};

// Gradient of a scalar objective with respect to every parameter (flattened in
// the same order as DenseNet::parameters()) and with respect to the inputs.
struct NetGradients {
  Eigen::VectorXd parameters;
  Eigen::MatrixXd inputs;  // input_dim x batch
};

// Fully connected feed-forward network. Batched calls take one sample per
// column.
class DenseNet {
 public:
  DenseNet() = default;
  explicit DenseNet(std::vector<DenseLayer> layers);

  // Layer sizes {in, h1, ..., out}; weights uniform in +-1/sqrt(fan_in).
  static DenseNet create(const std::vector<int>& sizes, Activation hidden,
                         Activation output, Rng& rng);

  Eigen::Index input_dim() const;
  Eigen::Index output_dim() const;
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs) const;

  // Backpropagates output_gradient (dObjective/dOutput, output_dim x batch).
  // Parameter gradients are summed over the batch.
  NetGradients backward(const Eigen::MatrixXd& inputs,
                        const Eigen::MatrixXd& output_gradient) const;
  NetGradients backward(const Eigen::VectorXd& input,
                        const Eigen::VectorXd& output_gradient) const;

  std::size_t parameter_count() const;
  // Row-major weights then bias, layer by layer.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

  bool all_finite() const;

  nlohmann::json to_json() const;
  static DenseNet from_json(const nlohmann::json& j);

 private:
  void check_chain() const;

  std::vector<DenseLayer> layers_;
};

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  long step_count = 0;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_parameters(std::size_t count, double learning_rate = 0.001);
};

// Bias-corrected Adam update in place.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state);

// Convenience: one Adam step on a network given flat parameter gradients.
void adam_step(DenseNet& net, const Eigen::VectorXd& grads, AdamState& state);

nlohmann::json to_json(const AdamState& state);
AdamState adam_state_from_json(const nlohmann::json& j);

}  // namespace hex
