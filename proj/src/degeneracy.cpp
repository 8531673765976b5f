#include "hex/degeneracy.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hex {

namespace {

std::vector<double> snapshot_targets(const ScalarFixture& fixture, const std::vector<ExperienceTuple>& snapshot) {
  std::vector<double> y;
  y.reserve(snapshot.size());
  for (const auto& t : snapshot) {
    const Eigen::VectorXd next_action = fixture.policy_l.forward(t.x_next);
    Eigen::VectorXd input(2);
    input << t.x_next(0), next_action(0);
    y.push_back(t.reward + fixture.gamma * fixture.critic.forward(input)(0));
  }
  return y;
}

// Closed-form least squares of the same objective, used only to keep the
// generated fixtures inside the search grid.
std::pair<double, double> analytic_fit(const ScalarFixture& fixture, const std::vector<ExperienceTuple>& snapshot,
                                       double c0, double c1, double c2) {
  const auto y = snapshot_targets(fixture, snapshot);
  const double n = static_cast<double>(y.size());
  double sx = 0.0, sv = 0.0, sxx = 0.0, sxv = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double x = snapshot[i].x(0);
    const double v = y[i] - c0 - c2 * x;
    sx += x;
    sv += v;
    sxx += x * x;
    sxv += x * v;
  }
  const double slope = (n * sxv - sx * sv) / (n * sxx - sx * sx);
  const double intercept = (sv - slope * sx) / n;
  return {intercept / c1, slope / c1};
}

}  // namespace

bool detect_instance_degeneracy(double y_l, double y_lprime) { return y_l > y_lprime; }

double snapshot_target_mean(const std::vector<ExperienceTuple>& snapshot, const DenseNet& policy,
                            const DenseNet& critic, double gamma, bool project_actions) {
  if (snapshot.empty()) throw std::invalid_argument("buffer snapshot is empty");
  double sum = 0.0;
  for (const auto& t : snapshot) {
    Eigen::VectorXd z = policy.forward(t.x_next);
    if (project_actions) z = project(z, t.x_next);
    Eigen::VectorXd input(t.x_next.size() + z.size());
    input << t.x_next, z;
    sum += t.reward + gamma * critic.forward(input)(0);
  }
  return sum / static_cast<double>(snapshot.size());
}

bool detect_buffer_degeneracy(const std::vector<ExperienceTuple>& snapshot_l,
                              const std::vector<ExperienceTuple>& snapshot_lprime, const DenseNet& policy_l,
                              const DenseNet& critic_l, double gamma, bool project_actions) {
  const double earlier = snapshot_target_mean(snapshot_l, policy_l, critic_l, gamma, project_actions);
  const double later = snapshot_target_mean(snapshot_lprime, policy_l, critic_l, gamma, project_actions);
  return earlier > later;
}

DenseNet linear_scalar_policy(double a, double b) {
  DenseLayer layer;
  layer.weights = Eigen::MatrixXd::Constant(1, 1, b);
  layer.bias = Eigen::VectorXd::Constant(1, a);
  layer.activation = Activation::identity;
  return DenseNet({layer});
}

DenseNet linear_scalar_critic(double c0, double c1, double c2) {
  DenseLayer layer;
  layer.weights.resize(1, 2);
  layer.weights << c2, c1;  // input is [x; z]
  layer.bias = Eigen::VectorXd::Constant(1, c0);
  layer.activation = Activation::identity;
  return DenseNet({layer});
}

ScalarFixture make_scalar_fixture(Rng& rng, double margin, std::size_t size) {
  if (size < 2) throw std::invalid_argument("fixture needs at least two tuples");
  if (margin < 0.0) throw std::invalid_argument("margin must be non-negative");
  constexpr double kLimit = 5.0;
  for (;;) {
    const double c0 = rng.uniform(-1.0, 1.0);
    const double c1 = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(1.0, 2.0);
    const double c2 = rng.uniform(-1.0, 1.0);
    ScalarFixture f;
    f.gamma = 0.9;
    f.critic = linear_scalar_critic(c0, c1, c2);
    f.policy_l = linear_scalar_policy(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const double base = rng.uniform(-1.0, 1.0);
    const double trend = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < size; ++i) {
      ExperienceTuple t;
      t.x = Eigen::VectorXd::Constant(1, rng.uniform());
      t.z = Eigen::VectorXd::Constant(1, rng.uniform(-t.x(0), 1.0 - t.x(0)));
      t.x_next = t.x + t.z;
      t.reward = base + trend * t.x(0) + rng.uniform(-0.3, 0.3);
      f.snapshot_l.push_back(t);
      t.reward -= margin;
      f.snapshot_lprime.push_back(t);
    }
    const auto [a, b] = analytic_fit(f, f.snapshot_l, c0, c1, c2);
    const auto [a2, b2] = analytic_fit(f, f.snapshot_lprime, c0, c1, c2);
    if (std::abs(a) < kLimit && std::abs(b) < kLimit && std::abs(a2) < kLimit && std::abs(b2) < kLimit) return f;
  }
}

LinearPolicyFit fit_linear_policy(const ScalarFixture& fixture, const std::vector<ExperienceTuple>& snapshot,
                                  const PolicyGrid& grid) {
  if (snapshot.empty()) throw std::invalid_argument("buffer snapshot is empty");
  if (!(grid.step > 0.0) || grid.hi < grid.lo) throw std::invalid_argument("invalid policy grid");
  const auto y = snapshot_targets(fixture, snapshot);
  const auto& layer = fixture.critic.layers().front();
  const double c2 = layer.weights(0, 0);
  const double c1 = layer.weights(0, 1);
  const double c0 = layer.bias(0);
  // Q(x, a + b x) - y = c1 a + c1 b x + u with u = c0 + c2 x - y.
  std::vector<double> xs(snapshot.size());
  std::vector<double> us(snapshot.size());
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    xs[i] = snapshot[i].x(0);
    us[i] = c0 + c2 * xs[i] - y[i];
  }
  const long cells = static_cast<long>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1;
  LinearPolicyFit best;
  best.loss = std::numeric_limits<double>::infinity();
  for (long ia = 0; ia < cells; ++ia) {
    const double a = grid.lo + static_cast<double>(ia) * grid.step;
    for (long ib = 0; ib < cells; ++ib) {
      const double b = grid.lo + static_cast<double>(ib) * grid.step;
      double loss = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = c1 * (a + b * xs[i]) + us[i];
        loss += d * d;
      }
      if (loss < best.loss) best = {a, b, loss};
    }
  }
  best.loss /= static_cast<double>(xs.size());
  return best;
}

double policy_value(const ScalarFixture& fixture, const LinearPolicyFit& policy) {
  double sum = 0.0;
  for (const auto& t : fixture.snapshot_l) {
    Eigen::VectorXd input(2);
    input << t.x(0), policy.a + policy.b * t.x(0);
    sum += fixture.critic.forward(input)(0);
  }
  return sum / static_cast<double>(fixture.snapshot_l.size());
}

ImplicationReport check_degeneracy_implication(const std::vector<ScalarFixture>& fixtures, const PolicyGrid& grid) {
  ImplicationReport report;
  for (std::size_t k = 0; k < fixtures.size(); ++k) {
    const auto& f = fixtures[k];
    ++report.fixtures;
    const bool buffer = detect_buffer_degeneracy(f.snapshot_l, f.snapshot_lprime, f.policy_l, f.critic, f.gamma,
                                                 /*project_actions=*/false);
    const LinearPolicyFit best_l = fit_linear_policy(f, f.snapshot_l, grid);
    const LinearPolicyFit best_lprime = fit_linear_policy(f, f.snapshot_lprime, grid);
    const double value_l = policy_value(f, best_l);
    const double value_lprime = policy_value(f, best_lprime);
    const bool policy = value_l > value_lprime;
    if (buffer) ++report.buffer_degenerate;
    if (policy) ++report.policy_degenerate;
    if (buffer && !policy) {
      ++report.violations;
      std::ostringstream msg;
      msg << "fixture " << k << ": value under era-l minimizer " << value_l << " <= era-l' minimizer "
          << value_lprime;
      report.counterexamples.push_back(msg.str());
    }
  }
  return report;
}

}  // namespace hex
