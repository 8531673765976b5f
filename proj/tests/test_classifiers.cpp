#include <gtest/gtest.h>

#include <vector>

#include "hex/classifiers.hpp"

namespace hex {
namespace {

TEST(Classifier, ZeroLogisticPredictsOneHalf) {
  const auto m = ClassifierModel::logistic(Eigen::VectorXd::Zero(3), 0.0);
  EXPECT_DOUBLE_EQ(m.predict_proba(Eigen::VectorXd::Constant(3, 0.8)), 0.5);
}

TEST(Classifier, SingleLeafTree) {
  TreeNode leaf;
  leaf.leaf_probability = 0.8;
  const auto m = ClassifierModel::tree(DecisionTree({leaf}, 2));
  EXPECT_DOUBLE_EQ(m.predict_proba(Eigen::VectorXd::Zero(2)), 0.8);
}

TEST(Classifier, DepthOneTreeWalk) {
  TreeNode root;
  root.split_feature = 0;
  root.split_threshold = 0.5;
  root.left = 1;
  root.right = 2;
  TreeNode low, high;
  low.leaf_probability = 0.2;
  high.leaf_probability = 0.9;
  const auto m = ClassifierModel::tree(DecisionTree({root, low, high}, 2));
  Eigen::VectorXd x(2);
  x << 0.3, 0.9;
  EXPECT_DOUBLE_EQ(m.predict_proba(x), 0.2);
  x << 0.7, 0.1;
  EXPECT_DOUBLE_EQ(m.predict_proba(x), 0.9);
}

TEST(Decide, BoundaryIsInclusiveForClassOne) {
  EXPECT_EQ(decide(0.49, 0.5), 0);
  EXPECT_EQ(decide(0.50, 0.5), 1);
  EXPECT_EQ(decide(0.51, 0.5), 1);
}

TEST(Auc, RankStatisticWithTies) {
  const std::vector<double> perfect = {0.1, 0.2, 0.8, 0.9};
  const std::vector<int> labels = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(auc(perfect, labels), 1.0);
  const std::vector<double> tied = {0.5, 0.5, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(auc(tied, labels), 0.5);
  // One inverted pair out of four.
  const std::vector<double> mixed = {0.1, 0.6, 0.5, 0.9};
  EXPECT_DOUBLE_EQ(auc(mixed, labels), 0.75);
}

TEST(Platt, SeparatedScoresCalibrateConfidently) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    scores.push_back(i % 2 ? 1.0 : -1.0);
    labels.push_back(i % 2);
  }
  const auto p = platt_calibrate(scores, labels);
  EXPECT_GE(p.apply(1.0), 0.9);
  EXPECT_LE(p.apply(-1.0), 0.1);
  EXPECT_LT(p.apply(-0.5), p.apply(0.5));
}

TEST(Platt, SymmetricScoresGiveOneHalfAtZero) {
  const std::vector<double> scores = {-1.0, 0.0, 0.0, 1.0, -0.5, 0.5};
  const std::vector<int> labels = {0, 0, 1, 1, 0, 1};
  EXPECT_NEAR(platt_calibrate(scores, labels).apply(0.0), 0.5, 0.05);
}

TEST(Platt, SingleClassIsAnError) {
  const std::vector<double> scores = {0.1, 0.2};
  const std::vector<int> labels = {1, 1};
  EXPECT_THROW(platt_calibrate(scores, labels), TrainingError);
}

DatasetSplit linear_split() {
  SplitSpec spec;
  spec.seed = 7;
  return split(synth_boundary(BoundaryKind::linear, 400, 2, 7), spec);
}

TEST(Train, LogisticRegressionSeparatesLinearData) {
  const auto parts = linear_split();
  ClassifierTrainConfig cfg;
  cfg.seed = 1;
  const auto t = train_classifier(ModelKind::logistic_regression, parts.train, parts.validation, cfg);
  EXPECT_GE(accuracy(t.model, parts.train), 0.95);
  EXPECT_GE(accuracy(t.model, parts.test), 0.95);
}

TEST(Train, DepthFiveTreeCarvesXorQuadrants) {
  SplitSpec spec;
  spec.seed = 3;
  const auto parts = split(synth_boundary(BoundaryKind::xor_pattern, 600, 2, 5), spec);
  ClassifierTrainConfig cfg;
  cfg.max_depths = {5};
  cfg.seed = 2;
  const auto t = train_classifier(ModelKind::decision_tree, parts.train, parts.validation, cfg);
  EXPECT_GE(accuracy(t.model, parts.train), 0.95);
}

TEST(Train, ConstantLabelsAreRejected) {
  auto data = synth_boundary(BoundaryKind::linear, 40, 2, 1);
  std::fill(data.labels.begin(), data.labels.end(), 1);
  for (auto kind : {ModelKind::logistic_regression, ModelKind::decision_tree, ModelKind::svm}) {
    EXPECT_THROW(train_classifier(kind, data, data, {}), TrainingError);
  }
}

TEST(Train, ForestAndSvmProduceProbabilities) {
  const auto parts = linear_split();
  ClassifierTrainConfig cfg;
  cfg.forest_sizes = {20};
  cfg.max_depths = {5};
  cfg.kernels = {SvmKernel::linear};
  cfg.svm_epochs = 5;
  for (auto kind : {ModelKind::random_forest, ModelKind::svm}) {
    const auto t = train_classifier(kind, parts.train, parts.validation, cfg);
    EXPECT_GE(accuracy(t.model, parts.test), 0.9) << to_string(kind);
    for (const auto& x : parts.test.features) {
      const double f = t.model.predict_proba(x);
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
    }
  }
}

TEST(Serialization, EveryKindRoundTrips) {
  const auto parts = linear_split();
  ClassifierTrainConfig cfg;
  cfg.hidden_sizes = {3};
  cfg.max_epochs = 50;
  cfg.forest_sizes = {5};
  cfg.max_depths = {3};
  cfg.kernels = {SvmKernel::rbf};
  cfg.svm_epochs = 2;
  for (auto kind : {ModelKind::logistic_regression, ModelKind::neural_net, ModelKind::decision_tree,
                    ModelKind::random_forest, ModelKind::svm}) {
    const auto t = train_classifier(kind, parts.train, parts.validation, cfg);
    const auto back = ClassifierModel::from_json(t.model.to_json());
    EXPECT_EQ(back.kind(), kind);
    for (const auto& x : parts.test.features) EXPECT_EQ(back.predict_proba(x), t.model.predict_proba(x));
  }
}

TEST(Names, ShortAndLongKindNames) {
  EXPECT_EQ(model_kind_from_string("lr"), ModelKind::logistic_regression);
  EXPECT_EQ(model_kind_from_string("random_forest"), ModelKind::random_forest);
  EXPECT_THROW(model_kind_from_string("knn"), std::invalid_argument);
}

TEST(Penalties, ClassWeightConventions) {
  Dataset d;
  for (int i = 0; i < 4; ++i) {
    d.features.push_back(Eigen::VectorXd::Constant(1, 0.1 * i));
    d.labels.push_back(i == 0 ? 1 : 0);
  }
  d.feature_names = {"a"};
  d.scaling = {{0.0, 1.0}};
  const auto [svm_pos, svm_neg] = svm_class_penalties(d);
  EXPECT_DOUBLE_EQ(svm_pos, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(svm_neg, 3.0 / 4.0);
  const auto [tree_pos, tree_neg] = tree_class_penalties(d);
  EXPECT_DOUBLE_EQ(tree_pos, 0.75);
  EXPECT_DOUBLE_EQ(tree_neg, 0.25);
}

}  // namespace
}  // namespace hex
