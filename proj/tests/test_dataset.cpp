#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hex/dataset.hpp"
#include "hex/rng.hpp"

namespace hex {
namespace {

Dataset parse(const std::string& text, const std::string& label = "y") {
  std::istringstream in(text);
  CsvOptions opt;
  opt.label_column = label;
  return parse_csv(in, opt);
}

TEST(Csv, MinMaxEndpointsScaleToZeroAndOne) {
  const auto d = parse("a,y\n10,0\n30,1\n");
  EXPECT_DOUBLE_EQ(d.features[0](0), 0.0);
  EXPECT_DOUBLE_EQ(d.features[1](0), 1.0);
}

TEST(Csv, ThreeRowsScaleByHand) {
  const auto d = parse("a,y\n10,0\n20,1\n30,1\n");
  EXPECT_DOUBLE_EQ(d.features[0](0), 0.0);
  EXPECT_DOUBLE_EQ(d.features[1](0), 0.5);
  EXPECT_DOUBLE_EQ(d.features[2](0), 1.0);
  EXPECT_DOUBLE_EQ(d.unscale(d.features[1])(0), 20.0);
}

TEST(Csv, ConstantColumnScalesToZero) {
  const auto d = parse("a,b,y\n5,1,0\n5,2,1\n5,3,0\n");
  for (const auto& x : d.features) EXPECT_DOUBLE_EQ(x(0), 0.0);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"a", "b"}));
}

TEST(Csv, LabelColumnMayBeAnywhere) {
  const auto d = parse("y,a\n1,0\n0,4\n");
  EXPECT_EQ(d.labels, (std::vector<int>{1, 0}));
  EXPECT_DOUBLE_EQ(d.features[1](0), 1.0);
}

TEST(Csv, MissingLabelColumnIsRejected) { EXPECT_THROW(parse("a,b\n1,2\n", "y"), DataError); }

TEST(Csv, NonNumericCellIsRejected) { EXPECT_THROW(parse("a,y\n1,0\nx,1\n"), DataError); }

TEST(Csv, NonBinaryLabelIsRejected) { EXPECT_THROW(parse("a,y\n1,0\n2,2\n"), DataError); }

TEST(Csv, StoredScalingClampsNewRows) {
  std::istringstream in("a,y\n40,1\n0,0\n");
  CsvOptions opt;
  opt.label_column = "y";
  opt.scaling = std::vector<FeatureScaling>{{10.0, 30.0}};
  const auto d = parse_csv(in, opt);
  EXPECT_DOUBLE_EQ(d.features[0](0), 1.0);
  EXPECT_DOUBLE_EQ(d.features[1](0), 0.0);
}

TEST(Split, HundredRowsGiveSeventyFifteenFifteen) {
  EXPECT_EQ(split_sizes(100, {}), (std::vector<std::size_t>{70, 15, 15}));
}

TEST(Split, LargestRemainderRoundingOnHundredOne) {
  // 70.7, 15.15, 15.15: floors sum to 100, the leftover row goes to the
  // largest remainder.
  EXPECT_EQ(split_sizes(101, {}), (std::vector<std::size_t>{71, 15, 15}));
}

TEST(Split, SeededSplitIsDeterministicAndDisjoint) {
  const auto data = synth_boundary(BoundaryKind::linear, 60, 2, 1);
  SplitSpec spec;
  spec.seed = 4;
  const auto a = split(data, spec);
  const auto b = split(data, spec);
  ASSERT_EQ(a.train.size(), b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) EXPECT_EQ(a.train.features[i], b.train.features[i]);
  EXPECT_EQ(a.train.size() + a.validation.size() + a.test.size(), 60u);
}

TEST(Split, TooFewRowsIsAnError) {
  const auto data = synth_boundary(BoundaryKind::linear, 20, 2, 1).subset({0, 1, 2});
  EXPECT_THROW(split(data, {}), DataError);
}

Dataset labelled(const std::vector<std::pair<std::vector<double>, int>>& rows) {
  Dataset d;
  for (const auto& [v, label] : rows) {
    d.features.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    d.labels.push_back(label);
  }
  for (std::size_t j = 0; j < rows.front().first.size(); ++j) {
    d.feature_names.push_back("f" + std::to_string(j));
    d.scaling.push_back({0.0, 1.0});
  }
  return d;
}

TEST(Smote, BalancedInputIsReturnedUnchanged) {
  const auto d = labelled({{{0.1, 0.2}, 0}, {{0.3, 0.4}, 1}});
  const auto out = smote_oversample(d, 5, 1);
  EXPECT_EQ(out.size(), 2u);
  EXPECT_EQ(out.features[1], d.features[1]);
}

TEST(Smote, DiagonalMinorityStaysOnDiagonal) {
  const auto d = labelled({{{0.0, 0.0}, 1}, {{1.0, 1.0}, 1}, {{0.2, 0.7}, 0}, {{0.4, 0.1}, 0},
                           {{0.9, 0.3}, 0}, {{0.5, 0.6}, 0}});
  const auto out = smote_oversample(d, 1, 3);
  EXPECT_EQ(out.count_label(1), 4u);
  for (std::size_t i = d.size(); i < out.size(); ++i) EXPECT_DOUBLE_EQ(out.features[i](0), out.features[i](1));
}

TEST(Smote, TenToThreeBecomesTenToTen) {
  Rng rng(8);
  std::vector<std::pair<std::vector<double>, int>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({{rng.uniform(), rng.uniform()}, 0});
  for (int i = 0; i < 3; ++i) rows.push_back({{rng.uniform(), rng.uniform()}, 1});
  const auto out = smote_oversample(labelled(rows), 5, 2);
  EXPECT_EQ(out.count_label(0), 10u);
  EXPECT_EQ(out.count_label(1), 10u);
}

TEST(Smote, SingleClassIsAnError) {
  EXPECT_THROW(smote_oversample(labelled({{{0.1}, 1}, {{0.2}, 1}}), 1, 0), DataError);
}

TEST(Synthetic, LabelsFollowTheBoundaries) {
  for (auto kind : {BoundaryKind::linear, BoundaryKind::radial, BoundaryKind::xor_pattern}) {
    const auto d = synth_boundary(kind, 300, 3, 9);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double a = d.features[i](0);
      const double b = d.features[i](1);
      int truth = 0;
      if (kind == BoundaryKind::linear) truth = a + b > 1.0;
      if (kind == BoundaryKind::radial) truth = std::hypot(a - 0.5, b - 0.5) < 0.3;
      if (kind == BoundaryKind::xor_pattern) truth = (a > 0.5) != (b > 0.5);
      EXPECT_EQ(d.labels[i], truth);
    }
  }
}

TEST(Synthetic, SameSeedSameData) {
  const auto a = synth_boundary(BoundaryKind::radial, 50, 2, 3);
  const auto b = synth_boundary(BoundaryKind::radial, 50, 2, 3);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.features[i], b.features[i]);
}

TEST(Snapshot, RoundTripsThroughDisk) {
  const auto d = synth_boundary(BoundaryKind::linear, 30, 2, 2);
  const std::string path = ::testing::TempDir() + "snapshot.bin";
  save_snapshot(d, path);
  const auto back = load_snapshot(path);
  ASSERT_EQ(back.size(), d.size());
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.features.back(), d.features.back());
  EXPECT_EQ(back.feature_names, d.feature_names);
}

}  // namespace
}  // namespace hex
