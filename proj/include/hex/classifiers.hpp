#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hex/dataset.hpp"
#include "hex/densenet.hpp"

namespace hex {

enum class ModelKind { logistic_regression, neural_net, decision_tree, random_forest, svm };

std::string to_string(ModelKind kind);
// Accepts the long names and the short forms lr, nn, dt, rf, svm.
ModelKind model_kind_from_string(const std::string& name);

// Sigmoid mapping from raw scores to probabilities, 1 / (1 + exp(a*s + b)).
struct PlattScaling {
  double a = 0.0;
  double b = 0.0;

  double apply(double score) const;
};

// Maximum-likelihood fit with Platt's smoothed targets (Newton steps with
// backtracking). Throws TrainingError unless both labels are present.
PlattScaling platt_calibrate(std::span<const double> scores, std::span<const int> labels);

// Decision rule: 0 if probability < omega, else 1.
int decide(double probability, double omega);

struct TreeNode {
  static constexpr int kLeaf = -1;

  int split_feature = kLeaf;
  double split_threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double leaf_probability = 0.0;

  bool is_leaf() const { return split_feature == kLeaf; }
};

class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, std::size_t input_dim);

  double predict(const Instance& x) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t input_dim() const { return input_dim_; }
  int depth() const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j, std::size_t input_dim);

 private:
  std::vector<TreeNode> nodes_;
  std::size_t input_dim_ = 0;
};

enum class SvmKernel { linear, rbf, polynomial };
std::string to_string(SvmKernel kernel);
SvmKernel svm_kernel_from_string(const std::string& name);

// Probability or raw-score model behind the common classifier interface.
class ScoringModel {
 public:
  virtual ~ScoringModel() = default;
  virtual ModelKind kind() const = 0;
  virtual std::size_t input_dim() const = 0;
  // Probability for every kind except SVM, which returns a decision value.
  virtual double score(const Instance& x) const = 0;
  virtual nlohmann::json parameters_json() const = 0;
};

// The environment f together with its decision threshold omega.
class ClassifierModel {
 public:
  ClassifierModel(std::shared_ptr<const ScoringModel> scorer, double omega,
                  std::optional<PlattScaling> platt = std::nullopt);

  static ClassifierModel logistic(Eigen::VectorXd weights, double bias, double omega = 0.5);
  static ClassifierModel neural_net(DenseNet logit_net, double omega = 0.5);
  static ClassifierModel tree(DecisionTree tree, double omega = 0.5);
  static ClassifierModel forest(std::vector<DecisionTree> trees, double omega = 0.5);
  static ClassifierModel svm(SvmKernel kernel, double gamma, std::vector<Instance> support,
                             std::vector<double> coefficients, PlattScaling platt,
                             double omega = 0.5);

  // f(x) in [0,1].
  double predict_proba(const Instance& x) const;
  int classify(const Instance& x) const { return decide(predict_proba(x), omega_); }

  ModelKind kind() const { return scorer_->kind(); }
  std::size_t input_dim() const { return scorer_->input_dim(); }
  double omega() const { return omega_; }
  const std::optional<PlattScaling>& platt() const { return platt_; }
  const ScoringModel& scorer() const { return *scorer_; }

  nlohmann::json to_json() const;
  static ClassifierModel from_json(const nlohmann::json& j);

 private:
  std::shared_ptr<const ScoringModel> scorer_;
  double omega_;
  std::optional<PlattScaling> platt_;
};

struct ClassifierTrainConfig {
  // Logistic regression and neural net.
  double learning_rate = 0.01;
  int batch_size = 64;
  int max_epochs = 4000;
  int patience = 200;
  std::vector<int> hidden_sizes = {3, 5, 10, 25, 50, 100};
  // CART and random forest.
  std::vector<int> max_depths = {5, 10, 30, 50};
  int min_leaf = 2;
  std::vector<int> forest_sizes = {50, 100, 200, 400, 600};
  // SVM.
  std::vector<SvmKernel> kernels = {SvmKernel::linear, SvmKernel::rbf, SvmKernel::polynomial};
  double svm_c = 1.0;
  int svm_epochs = 20;

  double omega = 0.5;
  std::uint64_t seed = 0;
};

struct TrainedClassifier {
  ClassifierModel model;
  nlohmann::json hyperparameters;  // the selected grid cell
  double validation_auc = 0.0;
};

// Fits a model of the given kind, grid-searching hyperparameters by
// validation AUC (ties go to the smaller model). Throws TrainingError on empty
// or single-class training data.
TrainedClassifier train_classifier(ModelKind kind, const Dataset& train, const Dataset& validation,
                                   const ClassifierTrainConfig& config);

// CART with weighted gini impurity. feature_subset > 0 samples that many
// candidate features per split.
DecisionTree fit_tree(const Dataset& data, const std::vector<std::size_t>& rows,
                      const std::vector<double>& sample_weight, int max_depth, int min_leaf,
                      int feature_subset, Rng& rng);

// Class penalties: SVM uses n/n_neg for positives and its inverse for
// negatives; trees use n_neg/n for positives and 1 minus that for negatives.
std::pair<double, double> svm_class_penalties(const Dataset& data);
std::pair<double, double> tree_class_penalties(const Dataset& data);

double accuracy(const ClassifierModel& model, const Dataset& data);
// Area under the ROC curve via the rank statistic (ties averaged).
double auc(std::span<const double> scores, std::span<const int> labels);
double auc(const ClassifierModel& model, const Dataset& data);

}  // namespace hex
