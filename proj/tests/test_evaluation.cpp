#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hex/evaluation.hpp"
#include "hex/svg.hpp"

namespace hex {
namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

TEST(Dbd, DeviationFromTheThreshold) {
  const auto at = [](double f) {
    return dbd(ClassifierModel::logistic(Eigen::VectorXd::Zero(1), logit(f)), Eigen::VectorXd::Zero(1));
  };
  EXPECT_NEAR(at(0.5), 0.0, 1e-15);
  EXPECT_NEAR(at(0.62), 0.12, 1e-12);
  EXPECT_NEAR(at(1e-12), 0.5, 1e-9);
}

TEST(Uep, HandCounts) {
  std::vector<bool> trusted(10, true);
  for (int j : {1, 3, 5, 7, 9}) trusted[static_cast<std::size_t>(j)] = false;
  const DeciderProfile profile(trusted);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(10);
  z(0) = 0.2;
  z(2) = -0.1;
  EXPECT_DOUBLE_EQ(uep(z, profile, 0.5), 0.0);
  z(3) = 0.3;
  z(7) = -0.4;
  EXPECT_DOUBLE_EQ(uep(z, profile, 0.5), 0.4);
  for (int j : {1, 5, 9}) z(j) = 0.1;
  EXPECT_DOUBLE_EQ(uep(z, profile, 0.5), 1.0);
  EXPECT_THROW(uep(z, profile, 0.0), std::invalid_argument);
}

TEST(Uep, StaysWithinUnitIntervalForClampedProfiles) {
  // p = 2 with UAP 0.1 still marks one feature untrusted.
  Rng rng(1);
  const auto profile = DeciderProfile::random_untrusted(2, 0.1, rng);
  EXPECT_DOUBLE_EQ(uep(Eigen::Vector2d(0.3, 0.3), profile, 0.1), 1.0);
}

TEST(Ranking, SortsByMagnitude) {
  const std::vector<std::string> names = {"f0", "f1", "f2"};
  const auto r = explanation_ranking(Eigen::Vector3d(0.0, -0.5, 0.2), names, 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], (std::pair<std::string, double>{"f1", -0.5}));
  EXPECT_EQ(r[1], (std::pair<std::string, double>{"f2", 0.2}));
  EXPECT_TRUE(explanation_ranking(Eigen::Vector3d::Zero(), names, 3).empty());
}

TEST(Ranking, FullPermutationAndTiesByIndex) {
  const std::vector<std::string> names = {"a", "b", "c", "d"};
  const auto r = explanation_ranking(Eigen::Vector4d(0.1, -0.3, 0.3, 0.2), names, 4);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].first, "b");
  EXPECT_EQ(r[1].first, "c");
  EXPECT_EQ(r[2].first, "d");
  EXPECT_EQ(r[3].first, "a");
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_GE(std::abs(r[i - 1].second), std::abs(r[i].second));
}

TEST(Rolling, TrailingMeans) {
  const std::vector<double> v = {0.0, 10.0};
  EXPECT_EQ(rolling_curve(v, 2), (std::vector<double>{0.0, 5.0}));
  const std::vector<double> s = {3.0, -1.0, 4.0, 1.0};
  EXPECT_EQ(rolling_curve(s, 1), s);
  EXPECT_EQ(rolling_curve(std::vector<double>(5, 2.5), 3), std::vector<double>(5, 2.5));
  EXPECT_EQ(rolling_curve(s, 3), (std::vector<double>{3.0, 1.0, 2.0, 4.0 / 3.0}));
  EXPECT_THROW(rolling_curve(s, 0), std::invalid_argument);
}

TEST(Report, AggregatesEqualRecomputedMeans) {
  const auto model = ClassifierModel::logistic(Eigen::Vector2d(10.0, 10.0), -10.0);
  Dataset test = synth_boundary(BoundaryKind::linear, 20, 2, 4);
  std::vector<std::size_t> rows = {0, 1, 2, 3};
  std::vector<std::optional<std::pair<ActionVector, Instance>>> expl;
  for (auto r : rows) {
    const ActionVector z = project(Eigen::Vector2d(0.1, -0.05), test.features[r]);
    expl.emplace_back(std::make_pair(z, transition(test.features[r], z)));
  }
  expl[2].reset();
  const auto report = score_explanations(model, test, rows, expl, {}, nullptr, std::nullopt);
  ASSERT_EQ(report.records.size(), 4u);
  EXPECT_FALSE(report.records[2].found);
  double d = 0.0, r = 0.0;
  for (const auto& rec : report.records) {
    if (!rec.found) continue;
    EXPECT_NEAR(rec.dbd, std::abs(model.predict_proba(rec.x_prime) - 0.5), 1e-15);
    d += rec.dbd / 3.0;
    r += rec.reward / 3.0;
  }
  EXPECT_NEAR(report.mean_dbd, d, 1e-12);
  EXPECT_NEAR(report.mean_reward, r, 1e-12);
  EXPECT_DOUBLE_EQ(report.found_fraction, 0.75);
  EXPECT_TRUE(std::isnan(report.mean_uep));
}

struct Scenario5 {
  Dataset data = synth_boundary(BoundaryKind::linear, 80, 2, 6);
  ClassifierModel model = ClassifierModel::logistic(Eigen::Vector2d(10.0, 10.0), -10.0);

  ScenarioConfig config(Scenario s) const {
    ScenarioConfig c;
    c.scenario = s;
    c.trials = 1;
    c.test_instances = 5;
    c.train.episodes = 4;
    c.train.inner_iterations = 6;
    c.train.batch_size = 8;
    c.seed = 13;
    return c;
  }
  std::vector<ModelEntry> entries() const { return {{"lr", &model, &data, &data}}; }
};

TEST(Scenario, DeciderFreeBookkeeping) {
  Scenario5 s;
  const auto reports = run_scenario(s.config(Scenario::decider_free), s.entries(), {ExplainerKind::hex_td3,
                                                                                   ExplainerKind::grow});
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& r : reports) {
    EXPECT_EQ(r.records.size(), 5u);
    EXPECT_FALSE(r.uap.has_value());
  }
  EXPECT_EQ(reports[0].learning_curve.size(), 4u);
  EXPECT_TRUE(reports[1].learning_curve.empty());
  EXPECT_EQ(aggregate(reports).size(), 2u);
}

TEST(Scenario, HitlHexExplainersNeverUseUntrustedFeatures) {
  Scenario5 s;
  s.data = synth_boundary(BoundaryKind::linear, 80, 6, 6);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
  w(0) = w(1) = 10.0;
  s.model = ClassifierModel::logistic(w, -10.0);
  const auto reports = run_scenario(s.config(Scenario::hitl), s.entries(),
                                    {ExplainerKind::hex_ddpg, ExplainerKind::hex_td3, ExplainerKind::td3});
  // Three UAP groups per explainer.
  ASSERT_EQ(reports.size(), 9u);
  for (const auto& r : reports) {
    ASSERT_TRUE(r.uap.has_value());
    if (r.explainer.rfind("hex", 0) == 0) EXPECT_EQ(r.mean_uep, 0.0) << r.explainer << " uap " << *r.uap;
  }
  const auto rows = aggregate(reports);
  EXPECT_EQ(rows.size(), 9u);
}

TEST(Scenario, SameSeedSameReports) {
  Scenario5 s;
  const auto kinds = std::vector<ExplainerKind>{ExplainerKind::td3, ExplainerKind::random};
  const auto a = run_scenario(s.config(Scenario::hitl), s.entries(), kinds);
  const auto b = run_scenario(s.config(Scenario::hitl), s.entries(), kinds);
  std::ostringstream ca, cb;
  write_records_csv(a, s.data.feature_names, ca);
  write_records_csv(b, s.data.feature_names, cb);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(aggregates_json(aggregate(a)), aggregates_json(aggregate(b)));
}

TEST(Scenario, MissingModelIsAnError) {
  Scenario5 s;
  EXPECT_THROW(run_scenario(s.config(Scenario::decider_free), {{"broken", nullptr, &s.data, &s.data}},
                            {ExplainerKind::grow}),
               std::invalid_argument);
}

TEST(Explainers, NamesAndTrainConfigs) {
  for (auto k : {ExplainerKind::ddpg, ExplainerKind::td3, ExplainerKind::hex_ddpg, ExplainerKind::hex_td3,
                 ExplainerKind::grow, ExplainerKind::random}) {
    EXPECT_EQ(explainer_from_string(to_string(k)), k);
  }
  const auto hex = explainer_train_config(ExplainerKind::hex_ddpg, {}, DeciderProfile({true, false}));
  EXPECT_EQ(hex.policy.algorithm, Algorithm::ddpg);
  EXPECT_TRUE(hex.selective_buffering && hex.smote && hex.hitl.has_value());
  const auto plain = explainer_train_config(ExplainerKind::td3, {}, DeciderProfile({true, false}));
  EXPECT_FALSE(plain.selective_buffering || plain.smote || plain.hitl.has_value());
  EXPECT_THROW(explainer_train_config(ExplainerKind::grow, {}, std::nullopt), std::invalid_argument);
}

TEST(Writers, LearningCurveCsvLayout) {
  std::ostringstream out;
  write_learning_curve_csv({1.0, 3.0}, 2, out);
  EXPECT_EQ(out.str(), "episode,raw_reward,rolling_mean\n1,1,1\n2,3,2\n");
}

TEST(Svg, BarChartHasOneBarPerRankedFeature) {
  const auto svg = ranking_bar_svg("x", {{"a", 0.4}, {"b", -0.2}, {"c<d", 0.1}});
  std::size_t bars = 0;
  for (auto pos = svg.find("class=\"bar\""); pos != std::string::npos; pos = svg.find("class=\"bar\"", pos + 1)) {
    ++bars;
  }
  EXPECT_EQ(bars, 3u);
  EXPECT_NE(svg.find("c&lt;d"), std::string::npos);
}

TEST(Svg, CurveGridDrawsEverySeries) {
  const auto svg = learning_curve_grid_svg({{"p1", {{"s1", {1, 2, 3}}, {"s2", {3, 2, 1}}}}, {"p2", {{"s", {0, 1}}}}},
                                           2);
  std::size_t lines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++lines;
  EXPECT_EQ(lines, 3u);
}

}  // namespace
}  // namespace hex
