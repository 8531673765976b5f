#include "hex/growing_spheres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hex {

namespace {

// n points uniform (by volume) in the shell lo <= |d| <= hi around center,
// clamped into the unit cube.
std::vector<Instance> sample_shell(const Instance& center, double lo, double hi, int n, Rng& rng) {
  const auto p = center.size();
  const double dim = static_cast<double>(p);
  const double lo_p = std::pow(lo, dim);
  const double hi_p = std::pow(hi, dim);
  std::vector<Instance> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd dir(p);
    for (Eigen::Index j = 0; j < p; ++j) dir(j) = rng.normal();
    double norm = dir.norm();
    while (norm == 0.0) {
      for (Eigen::Index j = 0; j < p; ++j) dir(j) = rng.normal();
      norm = dir.norm();
    }
    const double radius = std::pow(rng.uniform(lo_p, hi_p), 1.0 / dim);
    out.push_back((center + dir * (radius / norm)).cwiseMax(0.0).cwiseMin(1.0));
  }
  return out;
}

std::vector<Instance> enemies(const ClassifierModel& model, int own_class, std::vector<Instance> points) {
  std::vector<Instance> out;
  for (auto& pt : points) {
    if (model.classify(pt) != own_class) out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace

void GrowConfig::validate() const {
  if (n_in_layer < 1) throw std::invalid_argument("n_in_layer must be positive");
  if (!(first_radius > 0.0)) throw std::invalid_argument("first_radius must be positive");
  if (!(decrease_radius > 1.0)) throw std::invalid_argument("decrease_radius must exceed 1");
  if (max_grow_steps < 1 || max_shrink_steps < 1) throw std::invalid_argument("step caps must be positive");
}

std::optional<GrowExplanation> growing_spheres_explain(const ClassifierModel& model, const Instance& x,
                                                       const GrowConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(x.size()) != model.input_dim()) throw ShapeError("instance dimension mismatch");
  Rng rng(config.seed);
  const int own = model.classify(x);

  // Shrink the ball until it holds no enemy; the radius is divided once more
  // after the first empty ball, as in the reference procedure.
  double radius = config.first_radius;
  std::vector<Instance> found;
  int layers = 0;
  bool clear = false;
  for (int s = 0; s < config.max_shrink_steps; ++s) {
    auto ball = enemies(model, own, sample_shell(x, 0.0, radius, config.n_in_layer, rng));
    ++layers;
    radius /= config.decrease_radius;
    if (ball.empty()) {
      clear = true;
      break;
    }
    found = std::move(ball);
  }

  if (clear) {
    found.clear();
    const double step = (config.decrease_radius - 1.0) * radius / 5.0;
    for (int g = 0; g < config.max_grow_steps && found.empty(); ++g) {
      found = enemies(model, own, sample_shell(x, radius, radius + step, config.n_in_layer, rng));
      ++layers;
      radius += step;
    }
  }
  if (found.empty()) return std::nullopt;

  const Instance* closest = &found.front();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : found) {
    const double d = (e - x).squaredNorm();
    if (d < best) {
      best = d;
      closest = &e;
    }
  }

  // Greedy sparsification: reset the smallest moves first, keeping each reset
  // only while the class stays flipped.
  Instance out = *closest;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(out(a) - x(a)) < std::abs(out(b) - x(b));
  });
  for (Eigen::Index j : order) {
    if (out(j) == x(j)) continue;
    Instance trial = out;
    trial(j) = x(j);
    if (model.classify(trial) != own) out = std::move(trial);
  }

  GrowExplanation result;
  result.z = out - x;
  result.x_prime = std::move(out);
  result.layers_explored = layers;
  return result;
}

}  // namespace hex
