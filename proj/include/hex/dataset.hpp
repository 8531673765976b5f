#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hex/error.hpp"

namespace hex {

// A point in [0,1]^p.
using Instance = Eigen::VectorXd;

struct FeatureScaling {
  double min = 0.0;
  double max = 0.0;

  // Zero-range features map to 0.
  double scale(double raw) const;
  double unscale(double scaled) const;
};

struct Dataset {
  std::vector<Instance> features;
  std::vector<int> labels;  // 0 or 1
  std::vector<std::string> feature_names;
  std::vector<FeatureScaling> scaling;

  std::size_t size() const { return features.size(); }
  std::size_t dim() const { return feature_names.size(); }
  std::size_t count_label(int label) const;

  // Rows selected by index, keeping names and scaling.
  Dataset subset(const std::vector<std::size_t>& rows) const;
  Instance unscale(const Instance& scaled) const;

  // Throws DataError when rows, labels, names or value ranges disagree.
  void validate() const;
};

struct CsvOptions {
  std::string label_column;
  // Reuse a stored scaling instead of fitting min/max on this file; scaled
  // values are clamped into [0,1].
  std::optional<std::vector<FeatureScaling>> scaling;
};

Dataset load_csv(const std::string& path, const CsvOptions& options);
Dataset parse_csv(std::istream& in, const CsvOptions& options);

struct SplitSpec {
  double train_fraction = 0.70;
  double validation_fraction = 0.15;
  double test_fraction = 0.15;
  std::uint64_t seed = 0;
};

struct DatasetSplit {
  Dataset train;
  Dataset validation;
  Dataset test;
};

// Partition sizes by largest-remainder rounding of n * fraction.
std::vector<std::size_t> split_sizes(std::size_t n, const SplitSpec& spec);
DatasetSplit split(const Dataset& data, const SplitSpec& spec);

// Upsamples the minority class to the majority count with synthetic points on
// segments between a minority point and one of its k nearest minority
// neighbours.
Dataset smote_oversample(const Dataset& train, int k_neighbors, std::uint64_t seed);

enum class BoundaryKind { linear, radial, xor_pattern };
BoundaryKind boundary_kind_from_string(const std::string& name);

// Uniform points in [0,1]^p labelled by a known boundary over the first two
// coordinates:
//   linear  x0 + x1 > 1
//   radial  ||(x0, x1) - 0.5|| < 0.3
//   xor     (x0 > 0.5) != (x1 > 0.5)
Dataset synth_boundary(BoundaryKind kind, std::size_t n, std::size_t p, std::uint64_t seed);

nlohmann::json to_json(const std::vector<FeatureScaling>& scaling);
std::vector<FeatureScaling> scaling_from_json(const nlohmann::json& j);

// Binary snapshot of a scaled dataset including its scaling metadata.
void save_snapshot(const Dataset& data, const std::string& path);
Dataset load_snapshot(const std::string& path);

}  // namespace hex
