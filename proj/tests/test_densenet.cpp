#include <gtest/gtest.h>

#include <cmath>

#include "hex/densenet.hpp"
#include "test_support.hpp"

namespace hex {
namespace {

DenseLayer make_layer(Eigen::MatrixXd w, Eigen::VectorXd b, Activation act) {
  DenseLayer l;
  l.weights = std::move(w);
  l.bias = std::move(b);
  l.activation = act;
  return l;
}

TEST(DenseNet, IdentityLayerPassesInputThrough) {
  DenseNet net({make_layer(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), Activation::identity)});
  Eigen::VectorXd x(2);
  x << 0.3, 0.7;
  EXPECT_EQ(net.forward(x), x);
}

TEST(DenseNet, ReluClampsNegativeOutputs) {
  Eigen::MatrixXd w(2, 1);
  w << 1.0, -1.0;
  DenseNet net({make_layer(w, Eigen::VectorXd::Zero(2), Activation::relu)});
  const Eigen::VectorXd y = net.forward(Eigen::VectorXd(Eigen::VectorXd::Constant(1, 0.5)));
  EXPECT_DOUBLE_EQ(y(0), 0.5);
  EXPECT_DOUBLE_EQ(y(1), 0.0);
}

TEST(DenseNet, TwoLayerForwardMatchesHandEvaluation) {
  Eigen::MatrixXd w1(2, 2);
  w1 << 0.5, -0.25, 0.1, 0.3;
  Eigen::VectorXd b1(2);
  b1 << 0.05, -0.2;
  Eigen::MatrixXd w2(1, 2);
  w2 << 0.7, -0.4;
  DenseNet net({make_layer(w1, b1, Activation::tanh), make_layer(w2, Eigen::VectorXd::Constant(1, 0.1),
                                                                 Activation::sigmoid)});
  Eigen::VectorXd x(2);
  x << 0.2, 0.4;
  const double h0 = std::tanh(0.5 * 0.2 - 0.25 * 0.4 + 0.05);
  const double h1 = std::tanh(0.1 * 0.2 + 0.3 * 0.4 - 0.2);
  const double expected = 1.0 / (1.0 + std::exp(-(0.7 * h0 - 0.4 * h1 + 0.1)));
  EXPECT_NEAR(net.forward(x)(0), expected, 1e-15);
  // Frozen value of the same network.
  EXPECT_NEAR(net.forward(x)(0), 0.5396520848916805, 1e-15);
}

TEST(DenseNet, BatchedForwardMatchesColumnwise) {
  Rng rng(3);
  auto net = DenseNet::create({3, 4, 2}, Activation::relu, Activation::tanh, rng);
  Eigen::MatrixXd xs = Eigen::MatrixXd::Random(3, 5);
  const Eigen::MatrixXd batched = net.forward(xs);
  for (Eigen::Index c = 0; c < xs.cols(); ++c) {
    EXPECT_TRUE(batched.col(c).isApprox(net.forward(Eigen::VectorXd(xs.col(c))), 1e-14));
  }
}

TEST(DenseNet, IdentityLayerGradientIsInputPattern) {
  DenseNet net({make_layer(Eigen::MatrixXd::Zero(2, 3), Eigen::VectorXd::Zero(2), Activation::identity)});
  Eigen::VectorXd x(3);
  x << 0.1, 0.2, 0.3;
  Eigen::VectorXd seed(2);
  seed << 1.0, 0.0;
  const auto g = net.backward(x, seed);
  Eigen::VectorXd expected(8);
  expected << 0.1, 0.2, 0.3, 0.0, 0.0, 0.0, 1.0, 0.0;
  EXPECT_EQ(g.parameters, expected);
}

TEST(DenseNet, ZeroOutputGradientGivesZeroGradients) {
  Rng rng(5);
  auto net = DenseNet::create({2, 3, 1}, Activation::relu, Activation::identity, rng);
  const auto g = net.backward(Eigen::MatrixXd(Eigen::MatrixXd::Random(2, 4)), Eigen::MatrixXd(Eigen::MatrixXd::Zero(1, 4)));
  EXPECT_TRUE(g.parameters.isZero());
  EXPECT_TRUE(g.inputs.isZero());
}

TEST(DenseNet, GradientsMatchFiniteDifferences) {
  Rng rng(11);
  const Activation hidden[] = {Activation::tanh, Activation::sigmoid, Activation::relu};
  for (int trial = 0; trial < 6; ++trial) {
    auto net = DenseNet::create({3, 4, 2}, hidden[trial % 3], Activation::tanh, rng);
    Eigen::MatrixXd xs(3, 3);
    for (Eigen::Index i = 0; i < xs.size(); ++i) xs.data()[i] = rng.uniform(-1.0, 1.0);
    Eigen::MatrixXd seed(2, 3);
    for (Eigen::Index i = 0; i < seed.size(); ++i) seed.data()[i] = rng.uniform(-1.0, 1.0);
    auto objective = [&](const Eigen::VectorXd& params) {
      DenseNet probe = net;
      probe.set_parameters(params);
      return (probe.forward(xs).array() * seed.array()).sum();
    };
    const auto g = net.backward(xs, seed);
    EXPECT_LT(test::max_relative_error(g.parameters, test::numeric_gradient(objective, net.parameters())), 1e-4);
  }
}

TEST(DenseNet, ParameterRoundTrip) {
  Rng rng(2);
  auto net = DenseNet::create({2, 3, 1}, Activation::relu, Activation::sigmoid, rng);
  const Eigen::VectorXd flat = net.parameters();
  EXPECT_EQ(flat.size(), static_cast<Eigen::Index>(net.parameter_count()));
  DenseNet copy = DenseNet::from_json(net.to_json());
  EXPECT_EQ(copy.parameters(), flat);
  copy.set_parameters(Eigen::VectorXd::Zero(flat.size()));
  EXPECT_TRUE(copy.parameters().isZero());
  EXPECT_THROW(copy.set_parameters(Eigen::VectorXd::Zero(3)), ShapeError);
}

TEST(DenseNet, ChainMismatchIsRejected) {
  EXPECT_THROW(DenseNet({make_layer(Eigen::MatrixXd::Zero(2, 3), Eigen::VectorXd::Zero(2), Activation::relu),
                         make_layer(Eigen::MatrixXd::Zero(1, 4), Eigen::VectorXd::Zero(1), Activation::relu)}),
               ShapeError);
}

TEST(Adam, ZeroGradientLeavesParametersAndCountsStep) {
  Eigen::VectorXd params = Eigen::VectorXd::Constant(3, 0.25);
  auto state = AdamState::for_parameters(3);
  adam_step(params, Eigen::VectorXd::Zero(3), state);
  EXPECT_EQ(params, Eigen::VectorXd::Constant(3, 0.25));
  EXPECT_EQ(state.step_count, 1);
}

TEST(Adam, FirstScalarStepMatchesHandEvaluation) {
  Eigen::VectorXd params = Eigen::VectorXd::Constant(1, 0.0);
  auto state = AdamState::for_parameters(1, 0.001);
  adam_step(params, Eigen::VectorXd::Constant(1, 1.0), state);
  // m = 0.1, v = 0.001; bias corrected m = 1, v = 1.
  const double m_hat = (0.1 * 1.0) / (1.0 - 0.9);
  const double v_hat = (0.001 * 1.0) / (1.0 - 0.999);
  EXPECT_NEAR(params(0), -0.001 * m_hat / (std::sqrt(v_hat) + 1e-8), 1e-15);
  EXPECT_NEAR(params(0), -0.0009999999900000003, 1e-15);
}

TEST(Adam, ConstantGradientMovesAgainstItsSign) {
  Eigen::VectorXd params = Eigen::VectorXd::Zero(2);
  auto state = AdamState::for_parameters(2, 0.01);
  Eigen::VectorXd g(2);
  g << 2.0, -0.5;
  for (int i = 0; i < 50; ++i) adam_step(params, g, state);
  EXPECT_LT(params(0), 0.0);
  EXPECT_GT(params(1), 0.0);
}

TEST(Adam, StateSerializationRoundTrips) {
  Eigen::VectorXd params = Eigen::VectorXd::Zero(2);
  auto state = AdamState::for_parameters(2, 0.02);
  adam_step(params, Eigen::VectorXd::Constant(2, 0.3), state);
  const auto back = adam_state_from_json(to_json(state));
  EXPECT_EQ(back.step_count, 1);
  EXPECT_EQ(back.first_moment, state.first_moment);
  EXPECT_EQ(back.second_moment, state.second_moment);
  EXPECT_DOUBLE_EQ(back.learning_rate, 0.02);
}

}  // namespace
}  // namespace hex
