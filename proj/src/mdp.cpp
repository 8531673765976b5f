#include "hex/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hex {

void RewardConfig::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(epsilon_magnitude > 0.0)) {
    throw std::invalid_argument("alpha, beta and epsilon magnitude must be positive");
  }
  if (!(omega > 0.0 && omega < 1.0)) throw std::invalid_argument("omega must lie in (0,1)");
}

DeciderProfile::DeciderProfile(std::vector<bool> trusted) : trusted_(std::move(trusted)) {
  if (std::none_of(trusted_.begin(), trusted_.end(), [](bool b) { return b; })) {
    throw DataError("decider profile must trust at least one feature");
  }
}

DeciderProfile DeciderProfile::all_trusted(std::size_t p) { return DeciderProfile(std::vector<bool>(p, true)); }

DeciderProfile DeciderProfile::from_json(const nlohmann::json& j, const std::vector<std::string>& feature_names) {
  const nlohmann::json& list = j.is_object() && j.contains("trusted") ? j.at("trusted") : j;
  if (!list.is_array()) throw DataError("decider profile must be a JSON array of names or indices");
  std::vector<bool> trusted(feature_names.size(), false);
  for (const auto& item : list) {
    if (item.is_number_integer()) {
      const auto idx = item.get<long long>();
      if (idx < 0 || static_cast<std::size_t>(idx) >= feature_names.size()) {
        throw DataError("decider profile index " + std::to_string(idx) + " out of range");
      }
      trusted[static_cast<std::size_t>(idx)] = true;
    } else if (item.is_string()) {
      const auto name = item.get<std::string>();
      const auto it = std::find(feature_names.begin(), feature_names.end(), name);
      if (it == feature_names.end()) throw DataError("decider profile names unknown feature '" + name + "'");
      trusted[static_cast<std::size_t>(it - feature_names.begin())] = true;
    } else {
      throw DataError("decider profile entries must be names or indices");
    }
  }
  return DeciderProfile(std::move(trusted));
}

DeciderProfile DeciderProfile::load(const std::string& path, const std::vector<std::string>& feature_names) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open decider profile " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("decider profile " + path + ": " + e.what());
  }
  return from_json(j, feature_names);
}

DeciderProfile DeciderProfile::random_untrusted(std::size_t p, double uap, Rng& rng) {
  if (p < 2) throw std::invalid_argument("a random profile needs at least two features");
  if (!(uap > 0.0 && uap < 1.0)) throw std::invalid_argument("UAP must lie in (0,1)");
  const auto count = static_cast<std::size_t>(
      std::clamp<long>(std::lround(static_cast<double>(p) * uap), 1L, static_cast<long>(p) - 1));
  std::vector<bool> trusted(p, true);
  const auto order = rng.permutation(p);
  for (std::size_t k = 0; k < count; ++k) trusted[order[k]] = false;
  return DeciderProfile(std::move(trusted));
}

std::size_t DeciderProfile::untrusted_count() const {
  return static_cast<std::size_t>(std::count(trusted_.begin(), trusted_.end(), false));
}

nlohmann::json DeciderProfile::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t j = 0; j < trusted_.size(); ++j) {
    if (trusted_[j]) out.push_back(j);
  }
  return out;
}

bool is_used(double zj) { return std::abs(zj) > kUsedTolerance; }

std::size_t used_count(const ActionVector& z) {
  std::size_t n = 0;
  for (Eigen::Index j = 0; j < z.size(); ++j) n += is_used(z(j)) ? 1 : 0;
  return n;
}

double epsilon_x(int current_class, const RewardConfig& config) {
  return current_class == 0 ? config.epsilon_magnitude : -config.epsilon_magnitude;
}

int decision(const ClassifierModel& model, const Instance& x) { return model.classify(x); }

double reward(const Instance& x, const ActionVector& z, const ClassifierModel& model,
              const RewardConfig& config) {
  if (x.size() != z.size()) throw ShapeError("state and action lengths differ");
  const Instance next = x + z;
  constexpr double kSlack = 1e-12;
  if ((next.array() < -kSlack).any() || (next.array() > 1.0 + kSlack).any()) {
    throw std::invalid_argument("action leaves the feasible region; project it first");
  }
  const Instance clamped = next.cwiseMax(0.0).cwiseMin(1.0);
  const double f_now = model.predict_proba(x);
  const double f_next = model.predict_proba(clamped);
  const int c_now = decide(f_now, config.omega);
  const int c_next = decide(f_next, config.omega);
  const double gap = f_next - (config.omega + epsilon_x(c_now, config));
  const double flip = static_cast<double>(c_next - c_now);
  return -config.alpha * gap * gap + config.beta * flip * flip - z.norm() -
         static_cast<double>(used_count(z)) / static_cast<double>(z.size());
}

Instance transition(const Instance& x, const ActionVector& z) {
  if (x.size() != z.size()) throw ShapeError("state and action lengths differ");
  return (x + z).cwiseMax(0.0).cwiseMin(1.0);
}

ActionVector project(const ActionVector& z, const Instance& x, const DeciderProfile* profile) {
  if (x.size() != z.size()) throw ShapeError("state and action lengths differ");
  if (profile && profile->size() != static_cast<std::size_t>(z.size())) {
    throw ShapeError("decider profile length differs from action length");
  }
  ActionVector out(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (profile && !profile->trusted(static_cast<std::size_t>(j))) {
      out(j) = 0.0;
    } else {
      out(j) = std::min(std::max(-x(j), z(j)), 1.0 - x(j));
    }
  }
  return out;
}

std::size_t disagreement_score(const ActionVector& z, const DeciderProfile& profile) {
  if (profile.size() != static_cast<std::size_t>(z.size())) {
    throw ShapeError("decider profile length differs from action length");
  }
  std::size_t n = 0;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (is_used(z(j)) && !profile.trusted(static_cast<std::size_t>(j))) ++n;
  }
  return n;
}

}  // namespace hex
