#pragma once

#include <cstdint>
#include <optional>

#include "hex/classifiers.hpp"
#include "hex/mdp.hpp"

namespace hex {

struct GrowConfig {
  int n_in_layer = 200;
  double first_radius = 1.1;
  double decrease_radius = 2.0;
  int max_grow_steps = 50;
  int max_shrink_steps = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GrowExplanation {
  ActionVector z;
  Instance x_prime;
  int layers_explored = 0;
};

// Counterfactual search by growing spherical layers around x. Returns nullopt
// when no point of the other class turns up within the step cap.
std::optional<GrowExplanation> growing_spheres_explain(const ClassifierModel& model, const Instance& x,
                                                       const GrowConfig& config);

}  // namespace hex
