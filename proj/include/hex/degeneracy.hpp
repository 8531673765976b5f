#pragma once

#include <string>
#include <vector>

#include "hex/densenet.hpp"
#include "hex/replay_buffer.hpp"

namespace hex {

// True iff the earlier target strictly exceeds the later one.
bool detect_instance_degeneracy(double y_l, double y_lprime);

// Mean of r + gamma * Q(x', pi(x')) over a snapshot. With project_actions the
// policy output is clamped into the feasible box at x'.
double snapshot_target_mean(const std::vector<ExperienceTuple>& snapshot, const DenseNet& policy,
                            const DenseNet& critic, double gamma, bool project_actions = true);

// Both snapshots scored with the frozen era-l policy and critic; true iff the
// earlier snapshot scores strictly higher. Throws on an empty snapshot.
bool detect_buffer_degeneracy(const std::vector<ExperienceTuple>& snapshot_l,
                              const std::vector<ExperienceTuple>& snapshot_lprime, const DenseNet& policy_l,
                              const DenseNet& critic_l, double gamma, bool project_actions = true);

// One-dimensional state and action. The critic is linear,
// Q(x, z) = c0 + c1 z + c2 x, and policies are linear, pi(x) = a + b x.
struct ScalarFixture {
  std::vector<ExperienceTuple> snapshot_l;
  std::vector<ExperienceTuple> snapshot_lprime;
  DenseNet policy_l;  // frozen era-l policy used for the targets
  DenseNet critic;    // 2 -> 1 identity layer
  double gamma = 0.9;
};

DenseNet linear_scalar_policy(double a, double b);
DenseNet linear_scalar_critic(double c0, double c1, double c2);

// The later snapshot shares the earlier one's states and actions; its rewards
// are lower by margin. margin 0 gives identical snapshots.
ScalarFixture make_scalar_fixture(Rng& rng, double margin, std::size_t size = 16);

struct PolicyGrid {
  double lo = -6.0;
  double hi = 6.0;
  double step = 0.01;
};

struct LinearPolicyFit {
  double a = 0.0;
  double b = 0.0;
  double loss = 0.0;
};

// Exhaustive search for the linear policy minimizing mean (Q(x, pi(x)) - y)^2
// over the snapshot, with y computed from the frozen era-l policy and critic.
LinearPolicyFit fit_linear_policy(const ScalarFixture& fixture, const std::vector<ExperienceTuple>& snapshot,
                                  const PolicyGrid& grid);

// Mean Q(x, a + b x) over the era-l snapshot states.
double policy_value(const ScalarFixture& fixture, const LinearPolicyFit& policy);

struct ImplicationReport {
  int fixtures = 0;
  int buffer_degenerate = 0;
  int policy_degenerate = 0;
  int violations = 0;  // buffer degenerate but not policy degenerate
  std::vector<std::string> counterexamples;
};

ImplicationReport check_degeneracy_implication(const std::vector<ScalarFixture>& fixtures,
                                               const PolicyGrid& grid = {});

}  // namespace hex
