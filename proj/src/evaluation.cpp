#include "hex/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace hex {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_or_nan(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

using Explanation = std::optional<std::pair<ActionVector, Instance>>;

std::vector<std::size_t> pick_rows(std::size_t available, std::size_t wanted, Rng rng) {
  auto order = rng.permutation(available);
  order.resize(std::min(wanted, available));
  return order;
}

std::vector<Explanation> explain_with_policy(const ActorCriticPolicy& policy, const Dataset& test,
                                             const std::vector<std::size_t>& rows, const DeciderProfile* profile) {
  std::vector<Explanation> out;
  for (auto r : rows) out.emplace_back(policy.explain(test.features[r], profile));
  return out;
}

std::vector<Explanation> explain_with_grow(const ClassifierModel& model, const Dataset& test,
                                           const std::vector<std::size_t>& rows, GrowConfig grow, Rng rng) {
  std::vector<Explanation> out;
  for (auto r : rows) {
    grow.seed = rng.fork(static_cast<std::uint64_t>(r)).seed();
    auto found = growing_spheres_explain(model, test.features[r], grow);
    if (found) {
      out.emplace_back(std::make_pair(std::move(found->z), std::move(found->x_prime)));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

std::vector<Explanation> explain_randomly(const Dataset& test, const std::vector<std::size_t>& rows, Rng rng) {
  std::vector<Explanation> out;
  for (auto r : rows) {
    const Instance& x = test.features[r];
    ActionVector z(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) z(j) = rng.uniform(-x(j), 1.0 - x(j));
    z = project(z, x);
    out.emplace_back(std::make_pair(z, transition(x, z)));
  }
  return out;
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream s;
  s << std::setprecision(17) << *v;
  return s.str();
}

}  // namespace

double dbd(const ClassifierModel& model, const Instance& x_prime) {
  return std::abs(model.predict_proba(x_prime) - model.omega());
}

double uep(const ActionVector& z, const DeciderProfile& profile, double uap) {
  if (!(uap > 0.0)) throw std::invalid_argument("UEP is undefined for UAP <= 0");
  if (profile.size() != static_cast<std::size_t>(z.size())) throw ShapeError("profile and explanation differ in length");
  // The untrusted count is round(p * uap) for a consistent profile; using it
  // directly keeps UEP in [0,1] when the count had to be clamped.
  const std::size_t untrusted = profile.untrusted_count();
  if (untrusted == 0) return 0.0;
  return static_cast<double>(disagreement_score(z, profile)) / static_cast<double>(untrusted);
}

std::vector<std::pair<std::string, double>> explanation_ranking(const ActionVector& z,
                                                                const std::vector<std::string>& feature_names,
                                                                std::size_t q) {
  if (feature_names.size() != static_cast<std::size_t>(z.size())) {
    throw ShapeError("feature names and explanation differ in length");
  }
  std::vector<std::size_t> order;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (z(j) != 0.0) order.push_back(static_cast<std::size_t>(j));
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(z(static_cast<Eigen::Index>(a))) > std::abs(z(static_cast<Eigen::Index>(b)));
  });
  if (order.size() > q) order.resize(q);
  std::vector<std::pair<std::string, double>> out;
  for (auto j : order) out.emplace_back(feature_names[j], z(static_cast<Eigen::Index>(j)));
  return out;
}

std::vector<double> rolling_curve(const std::vector<double>& values, std::size_t window) {
  if (window == 0) throw std::invalid_argument("window must be at least 1");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= window) sum -= values[i - window];
    out[i] = sum / static_cast<double>(std::min(window, i + 1));
  }
  return out;
}

std::string to_string(ExplainerKind kind) {
  switch (kind) {
    case ExplainerKind::ddpg:
      return "ddpg";
    case ExplainerKind::td3:
      return "td3";
    case ExplainerKind::hex_ddpg:
      return "hex-ddpg";
    case ExplainerKind::hex_td3:
      return "hex-td3";
    case ExplainerKind::grow:
      return "grow";
    case ExplainerKind::random:
      return "random";
  }
  return "unknown";
}

ExplainerKind explainer_from_string(const std::string& name) {
  for (auto k : {ExplainerKind::ddpg, ExplainerKind::td3, ExplainerKind::hex_ddpg, ExplainerKind::hex_td3,
                 ExplainerKind::grow, ExplainerKind::random}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown explainer '" + name +
                              "' (expected ddpg, td3, hex-ddpg, hex-td3, grow or random)");
}

bool is_drl(ExplainerKind kind) { return kind != ExplainerKind::grow && kind != ExplainerKind::random; }

bool is_hex(ExplainerKind kind) { return kind == ExplainerKind::hex_ddpg || kind == ExplainerKind::hex_td3; }

TrainConfig explainer_train_config(ExplainerKind kind, const TrainConfig& base,
                                   const std::optional<DeciderProfile>& profile) {
  if (!is_drl(kind)) throw std::invalid_argument(to_string(kind) + " does not learn a policy");
  TrainConfig c = base;
  c.policy.algorithm =
      kind == ExplainerKind::ddpg || kind == ExplainerKind::hex_ddpg ? Algorithm::ddpg : Algorithm::td3;
  c.selective_buffering = is_hex(kind);
  c.smote = is_hex(kind);
  c.hitl = is_hex(kind) ? profile : std::nullopt;
  return c;
}

std::string to_string(Scenario scenario) { return scenario == Scenario::hitl ? "hitl" : "decider_free"; }

Scenario scenario_from_string(const std::string& name) {
  if (name == "decider_free" || name == "decider-free") return Scenario::decider_free;
  if (name == "hitl") return Scenario::hitl;
  throw std::invalid_argument("unknown scenario '" + name + "' (expected decider_free or hitl)");
}

void EvalReport::recompute() {
  std::vector<double> d, u, r;
  for (const auto& rec : records) {
    if (!rec.found) continue;
    d.push_back(rec.dbd);
    r.push_back(rec.reward);
    if (rec.uep) u.push_back(*rec.uep);
  }
  mean_dbd = mean_or_nan(d);
  mean_uep = mean_or_nan(u);
  mean_reward = mean_or_nan(r);
  found_fraction = records.empty() ? kNaN : static_cast<double>(d.size()) / static_cast<double>(records.size());
}

EvalReport score_explanations(const ClassifierModel& model, const Dataset& test,
                              const std::vector<std::size_t>& rows, const std::vector<Explanation>& explanations,
                              const RewardConfig& reward_config, const DeciderProfile* profile,
                              std::optional<double> uap) {
  if (rows.size() != explanations.size()) throw ShapeError("rows and explanations differ in count");
  EvalReport report;
  report.uap = uap;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EvalRecord rec;
    rec.instance = rows[k];
    const Instance& x = test.features[rows[k]];
    if (!explanations[k]) {
      rec.found = false;
      rec.z = ActionVector::Zero(x.size());
      rec.x_prime = x;
      rec.f_x_prime = model.predict_proba(x);
      rec.dbd = kNaN;
      rec.reward = kNaN;
    } else {
      rec.z = explanations[k]->first;
      rec.x_prime = explanations[k]->second;
      rec.f_x_prime = model.predict_proba(rec.x_prime);
      rec.dbd = std::abs(rec.f_x_prime - model.omega());
      rec.reward = reward(x, rec.z, model, reward_config);
      if (profile && uap) rec.uep = uep(rec.z, *profile, *uap);
    }
    report.records.push_back(std::move(rec));
  }
  report.recompute();
  return report;
}

std::vector<EvalReport> run_scenario(const ScenarioConfig& config, const std::vector<ModelEntry>& models,
                                     const std::vector<ExplainerKind>& explainers) {
  if (config.trials < 1) throw std::invalid_argument("at least one trial is required");
  if (config.scenario == Scenario::hitl && config.uaps.empty()) {
    throw std::invalid_argument("the hitl scenario needs at least one UAP");
  }
  for (const auto& m : models) {
    if (!m.model || !m.policy_data || !m.test_data) throw std::invalid_argument("model entry '" + m.name + "' is incomplete");
    if (m.test_data->size() == 0) throw DataError("model entry '" + m.name + "' has no held-out data");
  }
  const bool hitl = config.scenario == Scenario::hitl;
  const Rng root(config.seed);
  std::vector<EvalReport> reports;

  for (int trial = 0; trial < config.trials; ++trial) {
    const Rng trial_rng = root.fork("trial" + std::to_string(trial));
    for (const auto& entry : models) {
      const ClassifierModel& model = *entry.model;
      const Dataset& test = *entry.test_data;
      const std::size_t p = test.dim();
      const auto rows = pick_rows(test.size(), config.test_instances, trial_rng.fork("rows"));

      std::vector<DeciderProfile> profiles;
      if (hitl) {
        for (std::size_t u = 0; u < config.uaps.size(); ++u) {
          Rng profile_rng = trial_rng.fork("uap" + std::to_string(u));
          profiles.push_back(DeciderProfile::random_untrusted(p, config.uaps[u], profile_rng));
        }
      }

      auto emit = [&](ExplainerKind kind, const std::vector<Explanation>& expl, const DeciderProfile* profile,
                      std::optional<double> uap, const std::vector<double>& curve) {
        EvalReport r = score_explanations(model, test, rows, expl, config.train.reward, profile, uap);
        r.model = entry.name;
        r.explainer = to_string(kind);
        r.scenario = config.scenario;
        r.trial = trial;
        r.trial_seed = trial_rng.seed();
        r.learning_curve = curve;
        reports.push_back(std::move(r));
      };
      // Non-HEX explainers produce one set of explanations scored against
      // every UAP profile.
      auto emit_all_uaps = [&](ExplainerKind kind, const std::vector<Explanation>& expl,
                               const std::vector<double>& curve) {
        if (!hitl) {
          emit(kind, expl, nullptr, std::nullopt, curve);
          return;
        }
        for (std::size_t u = 0; u < profiles.size(); ++u) emit(kind, expl, &profiles[u], config.uaps[u], curve);
      };

      for (ExplainerKind kind : explainers) {
        const Rng method_rng = trial_rng.fork(to_string(kind));
        if (kind == ExplainerKind::grow) {
          emit_all_uaps(kind, explain_with_grow(model, test, rows, config.grow, method_rng), {});
        } else if (kind == ExplainerKind::random) {
          emit_all_uaps(kind, explain_randomly(test, rows, method_rng), {});
        } else if (hitl && is_hex(kind)) {
          for (std::size_t u = 0; u < profiles.size(); ++u) {
            TrainConfig tc = explainer_train_config(kind, config.train, profiles[u]);
            tc.seed = method_rng.fork("uap" + std::to_string(u)).seed();
            const auto result = synthesize_policy(model, *entry.policy_data, tc);
            emit(kind, explain_with_policy(result.policy, test, rows, &profiles[u]), &profiles[u], config.uaps[u],
                 result.episode_rewards);
          }
        } else {
          TrainConfig tc = explainer_train_config(kind, config.train, std::nullopt);
          tc.seed = method_rng.fork("policy").seed();
          const auto result = synthesize_policy(model, *entry.policy_data, tc);
          emit_all_uaps(kind, explain_with_policy(result.policy, test, rows, nullptr), result.episode_rewards);
        }
      }
    }
  }
  return reports;
}

std::vector<AggregateRow> aggregate(const std::vector<EvalReport>& reports) {
  using Key = std::tuple<std::string, std::string, int, double>;
  std::map<Key, std::vector<const EvalReport*>> groups;
  std::vector<Key> order;
  for (const auto& r : reports) {
    Key key{r.model, r.explainer, static_cast<int>(r.scenario), r.uap.value_or(-1.0)};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  auto mean_of = [](const std::vector<const EvalReport*>& group, double EvalReport::*field) {
    std::vector<double> v;
    for (const auto* r : group) {
      if (!std::isnan(r->*field)) v.push_back(r->*field);
    }
    return mean_or_nan(v);
  };
  std::vector<AggregateRow> rows;
  for (const auto& key : order) {
    const auto& group = groups.at(key);
    AggregateRow row;
    row.model = std::get<0>(key);
    row.explainer = std::get<1>(key);
    row.scenario = group.front()->scenario;
    row.uap = group.front()->uap;
    row.trials = static_cast<int>(group.size());
    row.mean_dbd = mean_of(group, &EvalReport::mean_dbd);
    row.mean_uep = mean_of(group, &EvalReport::mean_uep);
    row.mean_reward = mean_of(group, &EvalReport::mean_reward);
    row.found_fraction = mean_of(group, &EvalReport::found_fraction);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_records_csv(const std::vector<EvalReport>& reports, const std::vector<std::string>& feature_names,
                       std::ostream& out) {
  out << "model,explainer,scenario,uap,trial,instance,found,f_x_prime,dbd,uep,reward";
  for (const auto& n : feature_names) out << ",z_" << n;
  for (const auto& n : feature_names) out << ",xp_" << n;
  out << '\n' << std::setprecision(17);
  for (const auto& r : reports) {
    for (const auto& rec : r.records) {
      if (static_cast<std::size_t>(rec.z.size()) != feature_names.size()) {
        throw ShapeError("record width differs from feature names");
      }
      out << r.model << ',' << r.explainer << ',' << to_string(r.scenario) << ',' << format_optional(r.uap) << ','
          << r.trial << ',' << rec.instance << ',' << (rec.found ? 1 : 0) << ',' << rec.f_x_prime << ',';
      if (rec.found) out << rec.dbd;
      out << ',' << format_optional(rec.uep) << ',';
      if (rec.found) out << rec.reward;
      for (Eigen::Index j = 0; j < rec.z.size(); ++j) out << ',' << rec.z(j);
      for (Eigen::Index j = 0; j < rec.x_prime.size(); ++j) out << ',' << rec.x_prime(j);
      out << '\n';
    }
  }
}

nlohmann::json aggregates_json(const std::vector<AggregateRow>& rows) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"model", r.model},
                   {"explainer", r.explainer},
                   {"scenario", to_string(r.scenario)},
                   {"uap", r.uap ? nlohmann::json(*r.uap) : nlohmann::json(nullptr)},
                   {"trials", r.trials},
                   {"mean_dbd", num(r.mean_dbd)},
                   {"mean_uep", num(r.mean_uep)},
                   {"mean_reward", num(r.mean_reward)},
                   {"found_fraction", num(r.found_fraction)}});
  }
  return out;
}

void write_learning_curve_csv(const std::vector<double>& rewards, std::size_t window, std::ostream& out) {
  const auto smooth = rolling_curve(rewards, window);
  out << "episode,raw_reward,rolling_mean\n" << std::setprecision(17);
  for (std::size_t i = 0; i < rewards.size(); ++i) out << i + 1 << ',' << rewards[i] << ',' << smooth[i] << '\n';
}

}  // namespace hex
