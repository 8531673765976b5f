#include "hex/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hex {

namespace {

constexpr const char* kModelFormat = "hex.classifier";
constexpr int kModelVersion = 1;

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_dim(const Instance& x, std::size_t expected) {
  if (static_cast<std::size_t>(x.size()) != expected) {
    throw ShapeError("instance has " + std::to_string(x.size()) + " features, model expects " +
                     std::to_string(expected));
  }
}

class LogitNetScorer final : public ScoringModel {
 public:
  LogitNetScorer(DenseNet net, ModelKind kind) : net_(std::move(net)), kind_(kind) {
    if (net_.output_dim() != 1) throw ShapeError("logit network must have one output");
  }
  ModelKind kind() const override { return kind_; }
  std::size_t input_dim() const override { return static_cast<std::size_t>(net_.input_dim()); }
  double score(const Instance& x) const override {
    check_dim(x, input_dim());
    return sigmoid(net_.forward(x)(0));
  }
  nlohmann::json parameters_json() const override { return {{"network", net_.to_json()}}; }

 private:
  DenseNet net_;
  ModelKind kind_;
};

class ForestScorer final : public ScoringModel {
 public:
  ForestScorer(std::vector<DecisionTree> trees, ModelKind kind) : trees_(std::move(trees)), kind_(kind) {
    if (trees_.empty()) throw std::invalid_argument("forest needs at least one tree");
  }
  ModelKind kind() const override { return kind_; }
  std::size_t input_dim() const override { return trees_.front().input_dim(); }
  double score(const Instance& x) const override {
    check_dim(x, input_dim());
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(x);
    return sum / static_cast<double>(trees_.size());
  }
  nlohmann::json parameters_json() const override {
    if (kind_ == ModelKind::decision_tree) return {{"tree", trees_.front().to_json()}};
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : trees_) trees.push_back(t.to_json());
    return {{"trees", trees}};
  }

 private:
  std::vector<DecisionTree> trees_;
  ModelKind kind_;
};

// Decision value sum_j coef_j * (K(sv_j, x) + 1); the constant absorbs the bias.
class SvmScorer final : public ScoringModel {
 public:
  SvmScorer(SvmKernel kernel, double gamma, std::vector<Instance> support,
            std::vector<double> coefficients)
      : kernel_(kernel), gamma_(gamma), support_(std::move(support)), coef_(std::move(coefficients)) {
    if (support_.size() != coef_.size()) throw ShapeError("support and coefficient counts differ");
    if (support_.empty()) throw std::invalid_argument("SVM needs at least one support vector");
    dim_ = static_cast<std::size_t>(support_.front().size());
    if (kernel_ == SvmKernel::linear) {
      linear_weights_ = Eigen::VectorXd::Zero(support_.front().size());
      for (std::size_t j = 0; j < support_.size(); ++j) {
        linear_weights_ += coef_[j] * support_[j];
        linear_bias_ += coef_[j];
      }
    }
  }
  ModelKind kind() const override { return ModelKind::svm; }
  std::size_t input_dim() const override { return dim_; }
  double score(const Instance& x) const override {
    check_dim(x, dim_);
    if (kernel_ == SvmKernel::linear) return linear_weights_.dot(x) + linear_bias_;
    double sum = 0.0;
    for (std::size_t j = 0; j < support_.size(); ++j) sum += coef_[j] * (kernel(support_[j], x) + 1.0);
    return sum;
  }
  double kernel(const Instance& a, const Instance& b) const {
    switch (kernel_) {
      case SvmKernel::linear:
        return a.dot(b);
      case SvmKernel::rbf:
        return std::exp(-gamma_ * (a - b).squaredNorm());
      case SvmKernel::polynomial: {
        const double base = gamma_ * a.dot(b) + 1.0;
        return base * base;
      }
    }
    return 0.0;
  }
  nlohmann::json parameters_json() const override {
    nlohmann::json support = nlohmann::json::array();
    for (const auto& s : support_) support.push_back(to_std(s));
    return {{"kernel", to_string(kernel_)}, {"gamma", gamma_}, {"support", support}, {"coefficients", coef_}};
  }

 private:
  SvmKernel kernel_;
  double gamma_;
  std::vector<Instance> support_;
  std::vector<double> coef_;
  std::size_t dim_ = 0;
  Eigen::VectorXd linear_weights_;
  double linear_bias_ = 0.0;
};

void require_trainable(const Dataset& data) {
  if (data.size() == 0) throw TrainingError("training set is empty");
  if (data.count_label(0) == 0 || data.count_label(1) == 0) {
    throw TrainingError("training set contains a single class");
  }
}

double log_loss(const DenseNet& net, const Dataset& data) {
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double logit = net.forward(data.features[i])(0);
    // log(1 + exp(-|z|)) + max(z, 0) - y z
    loss += std::log1p(std::exp(-std::abs(logit))) + std::max(logit, 0.0) - data.labels[i] * logit;
  }
  return data.size() ? loss / static_cast<double>(data.size()) : 0.0;
}

// Minibatch Adam on binary cross-entropy with early stopping on the
// validation loss; the best-scoring parameters are restored at the end.
DenseNet fit_logit_net(DenseNet net, const Dataset& train, const Dataset& validation,
                       const ClassifierTrainConfig& config, Rng& rng) {
  const Dataset& monitor = validation.size() > 0 ? validation : train;
  AdamState adam = AdamState::for_parameters(net.parameter_count(), config.learning_rate);
  const auto n = train.size();
  const auto p = static_cast<Eigen::Index>(train.dim());
  const auto batch = static_cast<std::size_t>(std::max(1, config.batch_size));

  Eigen::VectorXd best = net.parameters();
  double best_loss = log_loss(net, monitor);
  int since_best = 0;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto order = rng.permutation(n);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t count = std::min(batch, n - start);
      Eigen::MatrixXd inputs(p, static_cast<Eigen::Index>(count));
      Eigen::RowVectorXd targets(static_cast<Eigen::Index>(count));
      for (std::size_t k = 0; k < count; ++k) {
        inputs.col(static_cast<Eigen::Index>(k)) = train.features[order[start + k]];
        targets(static_cast<Eigen::Index>(k)) = train.labels[order[start + k]];
      }
      const Eigen::MatrixXd logits = net.forward(inputs);
      Eigen::MatrixXd grad = logits.unaryExpr([](double v) { return sigmoid(v); });
      grad.row(0) -= targets;
      grad /= static_cast<double>(count);
      adam_step(net, net.backward(inputs, grad).parameters, adam);
    }
    const double loss = log_loss(net, monitor);
    if (!std::isfinite(loss)) throw TrainingError("classifier loss became non-finite");
    if (loss < best_loss) {
      best_loss = loss;
      best = net.parameters();
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  net.set_parameters(best);
  return net;
}

struct SplitCandidate {
  int feature = TreeNode::kLeaf;
  double threshold = 0.0;
  double cost = std::numeric_limits<double>::infinity();
};

double gini(double w0, double w1) {
  const double total = w0 + w1;
  if (total <= 0.0) return 0.0;
  const double q0 = w0 / total;
  const double q1 = w1 / total;
  return 1.0 - q0 * q0 - q1 * q1;
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const std::vector<double>& weight, int max_depth, int min_leaf,
              int feature_subset, Rng& rng)
      : data_(data), weight_(weight), max_depth_(max_depth), min_leaf_(std::max(1, min_leaf)),
        feature_subset_(feature_subset), rng_(rng) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    nodes_.clear();
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    double w0 = 0.0;
    double w1 = 0.0;
    for (auto r : rows) (data_.labels[r] == 1 ? w1 : w0) += weight_[r];
    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back(TreeNode{});
    nodes_[index].leaf_probability = (w0 + w1) > 0.0 ? w1 / (w0 + w1) : 0.0;

    if (depth >= max_depth_ || w0 == 0.0 || w1 == 0.0 ||
        rows.size() < 2 * static_cast<std::size_t>(min_leaf_)) {
      return index;
    }
    const SplitCandidate best = best_split(rows, w0, w1);
    if (best.feature == TreeNode::kLeaf) return index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto r : rows) {
      (data_.features[r](best.feature) <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int rt = grow(std::move(right), depth + 1);
    nodes_[index].split_feature = best.feature;
    nodes_[index].split_threshold = best.threshold;
    nodes_[index].left = l;
    nodes_[index].right = rt;
    return index;
  }

  SplitCandidate best_split(const std::vector<std::size_t>& rows, double w0, double w1) {
    const int p = static_cast<int>(data_.dim());
    std::vector<int> features(static_cast<std::size_t>(p));
    std::iota(features.begin(), features.end(), 0);
    if (feature_subset_ > 0 && feature_subset_ < p) {
      const auto order = rng_.permutation(static_cast<std::size_t>(p));
      features.clear();
      for (int k = 0; k < feature_subset_; ++k) features.push_back(static_cast<int>(order[k]));
      std::sort(features.begin(), features.end());
    }

    SplitCandidate best;
    best.cost = (w0 + w1) * gini(w0, w1);
    std::vector<std::pair<double, std::size_t>> sorted(rows.size());
    for (int f : features) {
      for (std::size_t k = 0; k < rows.size(); ++k) sorted[k] = {data_.features[rows[k]](f), rows[k]};
      std::sort(sorted.begin(), sorted.end());
      double left0 = 0.0;
      double left1 = 0.0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        const auto r = sorted[k].second;
        (data_.labels[r] == 1 ? left1 : left0) += weight_[r];
        const std::size_t left_count = k + 1;
        const std::size_t right_count = sorted.size() - left_count;
        if (left_count < static_cast<std::size_t>(min_leaf_)) continue;
        if (right_count < static_cast<std::size_t>(min_leaf_)) break;
        if (sorted[k].first == sorted[k + 1].first) continue;
        const double right0 = w0 - left0;
        const double right1 = w1 - left1;
        const double cost = (left0 + left1) * gini(left0, left1) + (right0 + right1) * gini(right0, right1);
        if (cost < best.cost - 1e-12 ||
            (best.feature == TreeNode::kLeaf && cost <= best.cost + 1e-12)) {
          best.cost = cost;
          best.feature = f;
          best.threshold = 0.5 * (sorted[k].first + sorted[k + 1].first);
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  const std::vector<double>& weight_;
  int max_depth_;
  int min_leaf_;
  int feature_subset_;
  Rng& rng_;
  std::vector<TreeNode> nodes_;
};

std::vector<double> tree_sample_weights(const Dataset& data) {
  const auto [pos, neg] = tree_class_penalties(data);
  std::vector<double> w(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) w[i] = data.labels[i] == 1 ? pos : neg;
  return w;
}

std::vector<double> scores_of(const ScoringModel& scorer, const Dataset& data) {
  std::vector<double> s(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) s[i] = scorer.score(data.features[i]);
  return s;
}

const Dataset& selection_set(const Dataset& train, const Dataset& validation) {
  if (validation.size() > 0 && validation.count_label(0) > 0 && validation.count_label(1) > 0) {
    return validation;
  }
  return train;
}

TrainedClassifier train_logit_family(ModelKind kind, const Dataset& train, const Dataset& validation,
                                     const ClassifierTrainConfig& config) {
  Rng rng(config.seed);
  const int p = static_cast<int>(train.dim());
  const Dataset& select = selection_set(train, validation);
  std::vector<int> grid = kind == ModelKind::logistic_regression ? std::vector<int>{0} : config.hidden_sizes;
  std::sort(grid.begin(), grid.end());
  if (grid.empty()) throw std::invalid_argument("hidden size grid is empty");

  std::optional<TrainedClassifier> best;
  for (int hidden : grid) {
    Rng cell = rng.fork(static_cast<std::uint64_t>(hidden));
    const std::vector<int> sizes = hidden == 0 ? std::vector<int>{p, 1} : std::vector<int>{p, hidden, 1};
    DenseNet net = DenseNet::create(sizes, Activation::relu, Activation::identity, cell);
    net = fit_logit_net(std::move(net), train, validation, config, cell);
    auto scorer = std::make_shared<LogitNetScorer>(std::move(net), kind);
    const double score = auc(scores_of(*scorer, select), select.labels);
    if (!best || score > best->validation_auc) {
      nlohmann::json hp = kind == ModelKind::logistic_regression ? nlohmann::json::object()
                                                                 : nlohmann::json{{"hidden", hidden}};
      best = TrainedClassifier{ClassifierModel(scorer, config.omega), hp, score};
    }
  }
  return *best;
}

TrainedClassifier train_tree_family(ModelKind kind, const Dataset& train, const Dataset& validation,
                                    const ClassifierTrainConfig& config) {
  Rng rng(config.seed);
  const Dataset& select = selection_set(train, validation);
  const auto weights = tree_sample_weights(train);
  std::vector<int> depths = config.max_depths;
  std::sort(depths.begin(), depths.end());
  std::vector<int> sizes = kind == ModelKind::decision_tree ? std::vector<int>{1} : config.forest_sizes;
  std::sort(sizes.begin(), sizes.end());
  if (depths.empty() || sizes.empty()) throw std::invalid_argument("tree grid is empty");

  std::vector<std::size_t> all_rows(train.size());
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
  const int feature_subset =
      kind == ModelKind::random_forest
          ? std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(train.dim())))))
          : 0;

  std::optional<TrainedClassifier> best;
  for (int depth : depths) {
    // Forests of increasing size share their leading trees.
    Rng cell = rng.fork(static_cast<std::uint64_t>(depth));
    std::vector<DecisionTree> trees;
    for (int size : sizes) {
      while (static_cast<int>(trees.size()) < size) {
        std::vector<std::size_t> rows = all_rows;
        if (kind == ModelKind::random_forest) {
          for (auto& r : rows) r = cell.index(train.size());
        }
        trees.push_back(fit_tree(train, rows, weights, depth, config.min_leaf, feature_subset, cell));
      }
      auto scorer = std::make_shared<ForestScorer>(trees, kind);
      const double score = auc(scores_of(*scorer, select), select.labels);
      if (!best || score > best->validation_auc) {
        nlohmann::json hp = {{"max_depth", depth}};
        if (kind == ModelKind::random_forest) hp["trees"] = size;
        best = TrainedClassifier{ClassifierModel(scorer, config.omega), hp, score};
      }
    }
  }
  return *best;
}

// Kernelized Pegasos on the class-weighted hinge loss, lambda = 1/(C n).
std::shared_ptr<SvmScorer> fit_svm(SvmKernel kernel, const Dataset& train,
                                   const ClassifierTrainConfig& config, Rng& rng) {
  const std::size_t n = train.size();
  const double gamma = 1.0 / static_cast<double>(train.dim());
  const auto [pos_penalty, neg_penalty] = svm_class_penalties(train);
  const double lambda = 1.0 / (config.svm_c * static_cast<double>(n));
  const long iterations = static_cast<long>(std::max(1, config.svm_epochs)) * static_cast<long>(n);

  // Shell scorer used only for its kernel.
  SvmScorer kernel_fn(kernel, gamma, {train.features.front()}, {0.0});
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = train.labels[i] == 1 ? 1.0 : -1.0;

  const bool cache = n <= 4000;
  Eigen::MatrixXd gram;
  if (cache) {
    gram.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double k = kernel_fn.kernel(train.features[i], train.features[j]) + 1.0;
        gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
        gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = k;
      }
    }
  }
  auto kij = [&](std::size_t i, std::size_t j) {
    return cache ? gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                 : kernel_fn.kernel(train.features[i], train.features[j]) + 1.0;
  };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> accum(n, 0.0);  // sum_j alpha_j y_j K'(x_j, x_i)
  for (long t = 1; t <= iterations; ++t) {
    const std::size_t i = rng.index(n);
    const double margin = y[i] * accum[i] / (lambda * static_cast<double>(t));
    if (margin < 1.0) {
      const double step = y[i] > 0 ? pos_penalty : neg_penalty;
      alpha[i] += step;
      for (std::size_t j = 0; j < n; ++j) accum[j] += step * y[i] * kij(i, j);
    }
  }

  std::vector<Instance> support;
  std::vector<double> coef;
  const double scale = 1.0 / (lambda * static_cast<double>(iterations));
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0.0) {
      support.push_back(train.features[i]);
      coef.push_back(alpha[i] * y[i] * scale);
    }
  }
  if (support.empty()) {
    support.push_back(train.features.front());
    coef.push_back(0.0);
  }
  return std::make_shared<SvmScorer>(kernel, gamma, std::move(support), std::move(coef));
}

TrainedClassifier train_svm(const Dataset& train, const Dataset& validation,
                            const ClassifierTrainConfig& config) {
  Rng rng(config.seed);
  const Dataset& select = selection_set(train, validation);
  if (config.kernels.empty()) throw std::invalid_argument("kernel grid is empty");
  std::optional<TrainedClassifier> best;
  for (SvmKernel kernel : config.kernels) {
    Rng cell = rng.fork(to_string(kernel));
    auto scorer = fit_svm(kernel, train, config, cell);
    const auto select_scores = scores_of(*scorer, select);
    const double score = auc(select_scores, select.labels);
    if (!best || score > best->validation_auc) {
      const PlattScaling platt = platt_calibrate(select_scores, select.labels);
      best = TrainedClassifier{ClassifierModel(scorer, config.omega, platt),
                               {{"kernel", to_string(kernel)}}, score};
    }
  }
  return *best;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic_regression:
      return "logistic_regression";
    case ModelKind::neural_net:
      return "neural_net";
    case ModelKind::decision_tree:
      return "decision_tree";
    case ModelKind::random_forest:
      return "random_forest";
    case ModelKind::svm:
      return "svm";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "lr" || name == "logistic_regression") return ModelKind::logistic_regression;
  if (name == "nn" || name == "neural_net") return ModelKind::neural_net;
  if (name == "dt" || name == "decision_tree") return ModelKind::decision_tree;
  if (name == "rf" || name == "random_forest") return ModelKind::random_forest;
  if (name == "svm") return ModelKind::svm;
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

std::string to_string(SvmKernel kernel) {
  switch (kernel) {
    case SvmKernel::linear:
      return "linear";
    case SvmKernel::rbf:
      return "rbf";
    case SvmKernel::polynomial:
      return "polynomial";
  }
  return "linear";
}

SvmKernel svm_kernel_from_string(const std::string& name) {
  if (name == "linear") return SvmKernel::linear;
  if (name == "rbf") return SvmKernel::rbf;
  if (name == "polynomial" || name == "poly") return SvmKernel::polynomial;
  throw std::invalid_argument("unknown SVM kernel '" + name + "'");
}

double PlattScaling::apply(double score) const {
  const double v = a * score + b;
  // Evaluated on the side that cannot overflow.
  if (v >= 0.0) {
    const double e = std::exp(-v);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(v));
}

PlattScaling platt_calibrate(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ShapeError("scores and labels differ in length");
  double prior1 = 0.0;
  double prior0 = 0.0;
  for (int l : labels) (l == 1 ? prior1 : prior0) += 1.0;
  if (prior1 == 0.0 || prior0 == 0.0) throw TrainingError("Platt scaling needs both labels");

  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  const std::size_t n = scores.size();
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = labels[i] == 1 ? hi : lo;

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = scores[i] * a + b;
      f += v >= 0.0 ? target[i] * v + std::log1p(std::exp(-v))
                    : (target[i] - 1.0) * v + std::log1p(std::exp(v));
    }
    return f;
  };

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  double fval = objective(a, b);
  constexpr double kSigma = 1e-12;
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = kSigma;
    double h22 = kSigma;
    double h21 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = scores[i] * a + b;
      double p;
      double q;
      if (v >= 0.0) {
        p = std::exp(-v) / (1.0 + std::exp(-v));
        q = 1.0 / (1.0 + std::exp(-v));
      } else {
        p = 1.0 / (1.0 + std::exp(v));
        q = std::exp(v) / (1.0 + std::exp(v));
      }
      const double d2 = p * q;
      h11 += scores[i] * scores[i] * d2;
      h22 += d2;
      h21 += scores[i] * d2;
      const double d1 = target[i] - p;
      g1 += scores[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= 1e-10) {
      const double na = a + step * da;
      const double nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < 1e-10) break;
  }
  return {a, b};
}

int decide(double probability, double omega) { return probability < omega ? 0 : 1; }

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, std::size_t input_dim)
    : nodes_(std::move(nodes)), input_dim_(input_dim) {
  if (nodes_.empty()) throw std::invalid_argument("tree has no nodes");
  const int count = static_cast<int>(nodes_.size());
  for (const auto& node : nodes_) {
    if (node.is_leaf()) {
      if (node.leaf_probability < 0.0 || node.leaf_probability > 1.0) {
        throw std::invalid_argument("leaf probability outside [0,1]");
      }
    } else if (node.split_feature < 0 || static_cast<std::size_t>(node.split_feature) >= input_dim_ ||
               node.left <= 0 || node.right <= 0 || node.left >= count || node.right >= count) {
      throw std::invalid_argument("internal node has an invalid feature or child index");
    }
  }
}

double DecisionTree::predict(const Instance& x) const {
  check_dim(x, input_dim_);
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    node = &nodes_[static_cast<std::size_t>(x(node->split_feature) <= node->split_threshold ? node->left
                                                                                              : node->right)];
  }
  return node->leaf_probability;
}

int DecisionTree::depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    if (!nodes_[i].is_leaf()) {
      depth[static_cast<std::size_t>(nodes_[i].left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(nodes_[i].right)] = depth[i] + 1;
    }
  }
  return deepest;
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    if (n.is_leaf()) {
      nodes.push_back({{"p", n.leaf_probability}});
    } else {
      nodes.push_back({{"f", n.split_feature}, {"t", n.split_threshold}, {"l", n.left}, {"r", n.right},
                       {"p", n.leaf_probability}});
    }
  }
  return nodes;
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j, std::size_t input_dim) {
  std::vector<TreeNode> nodes;
  for (const auto& item : j) {
    TreeNode n;
    n.leaf_probability = item.at("p").get<double>();
    if (item.contains("f")) {
      n.split_feature = item.at("f").get<int>();
      n.split_threshold = item.at("t").get<double>();
      n.left = item.at("l").get<int>();
      n.right = item.at("r").get<int>();
    }
    nodes.push_back(n);
  }
  return DecisionTree(std::move(nodes), input_dim);
}

ClassifierModel::ClassifierModel(std::shared_ptr<const ScoringModel> scorer, double omega,
                                 std::optional<PlattScaling> platt)
    : scorer_(std::move(scorer)), omega_(omega), platt_(platt) {
  if (!scorer_) throw std::invalid_argument("classifier needs a scoring model");
  if (!(omega_ > 0.0 && omega_ < 1.0)) throw std::invalid_argument("omega must lie in (0,1)");
  if (scorer_->kind() == ModelKind::svm && !platt_) {
    throw std::invalid_argument("SVM classifiers need Platt calibration");
  }
}

ClassifierModel ClassifierModel::logistic(Eigen::VectorXd weights, double bias, double omega) {
  DenseLayer layer;
  layer.weights = weights.transpose();
  layer.bias = Eigen::VectorXd::Constant(1, bias);
  layer.activation = Activation::identity;
  return ClassifierModel(
      std::make_shared<LogitNetScorer>(DenseNet({layer}), ModelKind::logistic_regression), omega);
}

ClassifierModel ClassifierModel::neural_net(DenseNet logit_net, double omega) {
  return ClassifierModel(std::make_shared<LogitNetScorer>(std::move(logit_net), ModelKind::neural_net),
                         omega);
}

ClassifierModel ClassifierModel::tree(DecisionTree tree, double omega) {
  return ClassifierModel(
      std::make_shared<ForestScorer>(std::vector<DecisionTree>{std::move(tree)}, ModelKind::decision_tree),
      omega);
}

ClassifierModel ClassifierModel::forest(std::vector<DecisionTree> trees, double omega) {
  return ClassifierModel(std::make_shared<ForestScorer>(std::move(trees), ModelKind::random_forest), omega);
}

ClassifierModel ClassifierModel::svm(SvmKernel kernel, double gamma, std::vector<Instance> support,
                                     std::vector<double> coefficients, PlattScaling platt, double omega) {
  return ClassifierModel(
      std::make_shared<SvmScorer>(kernel, gamma, std::move(support), std::move(coefficients)), omega, platt);
}

double ClassifierModel::predict_proba(const Instance& x) const {
  const double s = scorer_->score(x);
  const double prob = platt_ ? platt_->apply(s) : s;
  return std::clamp(prob, 0.0, 1.0);
}

nlohmann::json ClassifierModel::to_json() const {
  nlohmann::json j = {{"format", kModelFormat},
                      {"version", kModelVersion},
                      {"kind", to_string(kind())},
                      {"input_dim", input_dim()},
                      {"omega", omega_},
                      {"parameters", scorer_->parameters_json()}};
  j["platt"] = platt_ ? nlohmann::json{{"a", platt_->a}, {"b", platt_->b}} : nlohmann::json(nullptr);
  return j;
}

ClassifierModel ClassifierModel::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != kModelFormat) throw DataError("not a classifier document");
  if (j.value("version", 0) != kModelVersion) throw DataError("unsupported classifier version");
  const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
  const auto dim = j.at("input_dim").get<std::size_t>();
  const double omega = j.at("omega").get<double>();
  std::optional<PlattScaling> platt;
  if (!j.at("platt").is_null()) platt = PlattScaling{j["platt"].at("a").get<double>(), j["platt"].at("b").get<double>()};
  const auto& params = j.at("parameters");

  std::shared_ptr<const ScoringModel> scorer;
  switch (kind) {
    case ModelKind::logistic_regression:
    case ModelKind::neural_net:
      scorer = std::make_shared<LogitNetScorer>(DenseNet::from_json(params.at("network")), kind);
      break;
    case ModelKind::decision_tree:
      scorer = std::make_shared<ForestScorer>(
          std::vector<DecisionTree>{DecisionTree::from_json(params.at("tree"), dim)}, kind);
      break;
    case ModelKind::random_forest: {
      std::vector<DecisionTree> trees;
      for (const auto& t : params.at("trees")) trees.push_back(DecisionTree::from_json(t, dim));
      scorer = std::make_shared<ForestScorer>(std::move(trees), kind);
      break;
    }
    case ModelKind::svm: {
      std::vector<Instance> support;
      for (const auto& s : params.at("support")) support.push_back(from_std(s.get<std::vector<double>>()));
      scorer = std::make_shared<SvmScorer>(svm_kernel_from_string(params.at("kernel").get<std::string>()),
                                           params.at("gamma").get<double>(), std::move(support),
                                           params.at("coefficients").get<std::vector<double>>());
      break;
    }
  }
  if (scorer->input_dim() != dim) throw DataError("classifier input_dim does not match its parameters");
  return ClassifierModel(std::move(scorer), omega, platt);
}

DecisionTree fit_tree(const Dataset& data, const std::vector<std::size_t>& rows,
                      const std::vector<double>& sample_weight, int max_depth, int min_leaf,
                      int feature_subset, Rng& rng) {
  if (rows.empty()) throw TrainingError("cannot fit a tree on zero rows");
  TreeBuilder builder(data, sample_weight, max_depth, min_leaf, feature_subset, rng);
  return DecisionTree(builder.build(rows), data.dim());
}

std::pair<double, double> svm_class_penalties(const Dataset& data) {
  const double n = static_cast<double>(data.size());
  const double neg = static_cast<double>(data.count_label(0));
  if (neg == 0.0) throw TrainingError("class penalties need negatives");
  const double pos_penalty = n / neg;
  return {pos_penalty, 1.0 / pos_penalty};
}

std::pair<double, double> tree_class_penalties(const Dataset& data) {
  const double n = static_cast<double>(data.size());
  if (n == 0.0) throw TrainingError("class penalties need data");
  const double pos_penalty = static_cast<double>(data.count_label(0)) / n;
  return {pos_penalty, 1.0 - pos_penalty};
}

TrainedClassifier train_classifier(ModelKind kind, const Dataset& train, const Dataset& validation,
                                   const ClassifierTrainConfig& config) {
  require_trainable(train);
  if (validation.size() > 0 && validation.dim() != train.dim()) {
    throw ShapeError("validation set dimension differs from training set");
  }
  switch (kind) {
    case ModelKind::logistic_regression:
    case ModelKind::neural_net:
      return train_logit_family(kind, train, validation, config);
    case ModelKind::decision_tree:
    case ModelKind::random_forest:
      return train_tree_family(kind, train, validation, config);
    case ModelKind::svm:
      return train_svm(train, validation, config);
  }
  throw std::invalid_argument("unknown model kind");
}

double accuracy(const ClassifierModel& model, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (model.classify(data.features[i]) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ShapeError("scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double average = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = average;
    i = j + 1;
  }
  double pos = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == 1) {
      pos += 1.0;
      rank_sum += rank[i];
    }
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) return 0.5;
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

double auc(const ClassifierModel& model, const Dataset& data) {
  std::vector<double> s(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) s[i] = model.predict_proba(data.features[i]);
  return auc(s, data.labels);
}

}  // namespace hex
