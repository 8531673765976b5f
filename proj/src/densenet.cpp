#include "hex/densenet.hpp"

#include <cmath>

namespace hex {

namespace {

constexpr const char* kNetFormat = "hex.densenet";
constexpr int kNetVersion = 1;

void apply_activation(Activation activation, Eigen::MatrixXd& values) {
  switch (activation) {
    case Activation::relu:
      values = values.cwiseMax(0.0);
      break;
    case Activation::sigmoid:
      values = values.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
      break;
    case Activation::tanh:
      values = values.array().tanh().matrix();
      break;
    case Activation::identity:
      break;
  }
}

// Derivative expressed through the activation output, which the forward tape
// already holds.
Eigen::MatrixXd activation_derivative(Activation activation, const Eigen::MatrixXd& pre,
                                      const Eigen::MatrixXd& post) {
  switch (activation) {
    case Activation::relu:
      return pre.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
    case Activation::sigmoid:
      return post.array() * (1.0 - post.array());
    case Activation::tanh:
      return 1.0 - post.array().square();
    case Activation::identity:
      break;
  }
  return Eigen::MatrixXd::Ones(pre.rows(), pre.cols());
}

}  // namespace

std::string to_string(Activation activation) {
  switch (activation) {
    case Activation::relu:
      return "relu";
    case Activation::sigmoid:
      return "sigmoid";
    case Activation::tanh:
      return "tanh";
    case Activation::identity:
      return "identity";
  }
  return "identity";
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw DataError("unknown activation '" + name + "'");
}

DenseNet::DenseNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  check_chain();
}

DenseNet DenseNet::create(const std::vector<int>& sizes, Activation hidden,
                          Activation output, Rng& rng) {
  if (sizes.size() < 2) throw ShapeError("a network needs at least input and output sizes");
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const int in = sizes[i];
    const int out = sizes[i + 1];
    if (in <= 0 || out <= 0) throw ShapeError("layer sizes must be positive");
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    DenseLayer layer;
    layer.weights.resize(out, in);
    layer.bias.resize(out);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weights(r, c) = rng.uniform(-bound, bound);
    }
    for (int r = 0; r < out; ++r) layer.bias(r) = rng.uniform(-bound, bound);
    layer.activation = (i + 2 == sizes.size()) ? output : hidden;
    layers.push_back(std::move(layer));
  }
  return DenseNet(std::move(layers));
}

void DenseNet::check_chain() const {
  if (layers_.empty()) throw ShapeError("network has no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& layer = layers_[i];
    if (layer.bias.size() != layer.weights.rows()) {
      throw ShapeError("layer " + std::to_string(i) + ": bias length does not match rows");
    }
    if (i > 0 && layers_[i - 1].output_dim() != layer.input_dim()) {
      throw ShapeError("layer " + std::to_string(i) + ": input dim does not chain");
    }
  }
}

Eigen::Index DenseNet::input_dim() const { return layers_.front().input_dim(); }
Eigen::Index DenseNet::output_dim() const { return layers_.back().output_dim(); }

Eigen::VectorXd DenseNet::forward(const Eigen::VectorXd& input) const {
  const Eigen::MatrixXd out = forward(Eigen::MatrixXd(input));
  return out.col(0);
}

Eigen::MatrixXd DenseNet::forward(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_dim()) {
    throw ShapeError("input has " + std::to_string(inputs.rows()) + " rows, network expects " +
                     std::to_string(input_dim()));
  }
  Eigen::MatrixXd values = inputs;
  for (const auto& layer : layers_) {
    Eigen::MatrixXd next = layer.weights * values;
    next.colwise() += layer.bias;
    apply_activation(layer.activation, next);
    values = std::move(next);
  }
  return values;
}

NetGradients DenseNet::backward(const Eigen::MatrixXd& inputs,
                                const Eigen::MatrixXd& output_gradient) const {
  if (inputs.rows() != input_dim()) throw ShapeError("backward: input rows mismatch");
  if (output_gradient.rows() != output_dim() || output_gradient.cols() != inputs.cols()) {
    throw ShapeError("backward: output gradient shape mismatch");
  }

  const std::size_t depth = layers_.size();
  std::vector<Eigen::MatrixXd> activations(depth + 1);
  std::vector<Eigen::MatrixXd> pre(depth);
  activations[0] = inputs;
  for (std::size_t i = 0; i < depth; ++i) {
    pre[i] = layers_[i].weights * activations[i];
    pre[i].colwise() += layers_[i].bias;
    activations[i + 1] = pre[i];
    apply_activation(layers_[i].activation, activations[i + 1]);
  }

  std::vector<Eigen::MatrixXd> weight_grads(depth);
  std::vector<Eigen::VectorXd> bias_grads(depth);
  Eigen::MatrixXd delta = output_gradient;
  for (std::size_t k = depth; k-- > 0;) {
    delta = delta.cwiseProduct(
        activation_derivative(layers_[k].activation, pre[k], activations[k + 1]));
    weight_grads[k] = delta * activations[k].transpose();
    bias_grads[k] = delta.rowwise().sum();
    delta = layers_[k].weights.transpose() * delta;
  }

  NetGradients grads;
  grads.parameters.resize(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < depth; ++k) {
    const auto& w = weight_grads[k];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) grads.parameters(offset++) = w(r, c);
    }
    grads.parameters.segment(offset, bias_grads[k].size()) = bias_grads[k];
    offset += bias_grads[k].size();
  }
  grads.inputs = std::move(delta);
  return grads;
}

NetGradients DenseNet::backward(const Eigen::VectorXd& input,
                                const Eigen::VectorXd& output_gradient) const {
  return backward(Eigen::MatrixXd(input), Eigen::MatrixXd(output_gradient));
}

std::size_t DenseNet::parameter_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers_) {
    count += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
  }
  return count;
}

Eigen::VectorXd DenseNet::parameters() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index offset = 0;
  for (const auto& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) flat(offset++) = layer.weights(r, c);
    }
    flat.segment(offset, layer.bias.size()) = layer.bias;
    offset += layer.bias.size();
  }
  return flat;
}

void DenseNet::set_parameters(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) {
    throw ShapeError("parameter vector length mismatch");
  }
  Eigen::Index offset = 0;
  for (auto& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = flat(offset++);
    }
    layer.bias = flat.segment(offset, layer.bias.size());
    offset += layer.bias.size();
  }
}

bool DenseNet::all_finite() const {
  for (const auto& layer : layers_) {
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

nlohmann::json DenseNet::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : layers_) {
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(layer.weights.size()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) weights.push_back(layer.weights(r, c));
    }
    layers.push_back({{"in", layer.input_dim()},
                      {"out", layer.output_dim()},
                      {"activation", to_string(layer.activation)},
                      {"weights", weights},
                      {"bias", std::vector<double>(layer.bias.data(),
                                                   layer.bias.data() + layer.bias.size())}});
  }
  return {{"format", kNetFormat}, {"version", kNetVersion}, {"layers", layers}};
}

DenseNet DenseNet::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != kNetFormat) throw DataError("not a densenet document");
  if (j.value("version", 0) != kNetVersion) {
    throw DataError("unsupported densenet version " + std::to_string(j.value("version", 0)));
  }
  std::vector<DenseLayer> layers;
  for (const auto& item : j.at("layers")) {
    const auto in = item.at("in").get<Eigen::Index>();
    const auto out = item.at("out").get<Eigen::Index>();
    const auto weights = item.at("weights").get<std::vector<double>>();
    const auto bias = item.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(weights.size()) != in * out ||
        static_cast<Eigen::Index>(bias.size()) != out) {
      throw DataError("densenet layer payload does not match its declared shape");
    }
    DenseLayer layer;
    layer.weights.resize(out, in);
    for (Eigen::Index r = 0; r < out; ++r) {
      for (Eigen::Index c = 0; c < in; ++c) layer.weights(r, c) = weights[r * in + c];
    }
    layer.bias = Eigen::Map<const Eigen::VectorXd>(bias.data(), out);
    layer.activation = activation_from_string(item.at("activation").get<std::string>());
    layers.push_back(std::move(layer));
  }
  return DenseNet(std::move(layers));
}

AdamState AdamState::for_parameters(std::size_t count, double learning_rate) {
  AdamState state;
  state.first_moment = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(count));
  state.second_moment = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(count));
  state.learning_rate = learning_rate;
  return state;
}

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state) {
  if (grads.size() != params.size() || state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw ShapeError("adam_step: parameter, gradient and moment shapes differ");
  }
  state.step_count += 1;
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grads;
  state.second_moment =
      state.beta2 * state.second_moment + (1.0 - state.beta2) * grads.cwiseProduct(grads);
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  params.array() -= state.learning_rate * (state.first_moment.array() / correction1) /
                    ((state.second_moment.array() / correction2).sqrt() + state.epsilon);
}

void adam_step(DenseNet& net, const Eigen::VectorXd& grads, AdamState& state) {
  Eigen::VectorXd params = net.parameters();
  adam_step(params, grads, state);
  net.set_parameters(params);
}

nlohmann::json to_json(const AdamState& state) {
  auto as_vector = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  return {{"first_moment", as_vector(state.first_moment)},
          {"second_moment", as_vector(state.second_moment)},
          {"step_count", state.step_count},
          {"learning_rate", state.learning_rate},
          {"beta1", state.beta1},
          {"beta2", state.beta2},
          {"epsilon", state.epsilon}};
}

AdamState adam_state_from_json(const nlohmann::json& j) {
  AdamState state;
  const auto m = j.at("first_moment").get<std::vector<double>>();
  const auto v = j.at("second_moment").get<std::vector<double>>();
  state.first_moment = Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
  state.second_moment = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  state.step_count = j.at("step_count").get<long>();
  state.learning_rate = j.at("learning_rate").get<double>();
  state.beta1 = j.at("beta1").get<double>();
  state.beta2 = j.at("beta2").get<double>();
  state.epsilon = j.at("epsilon").get<double>();
  return state;
}

}  // namespace hex
