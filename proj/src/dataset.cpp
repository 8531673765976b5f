#include "hex/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "hex/rng.hpp"

namespace hex {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& text) {
  const std::string cell = trim(text);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

double FeatureScaling::scale(double raw) const {
  const double range = max - min;
  if (range <= 0.0) return 0.0;
  return (raw - min) / range;
}

double FeatureScaling::unscale(double scaled) const { return min + scaled * (max - min); }

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.scaling = scaling;
  out.features.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    out.features.push_back(features.at(r));
    out.labels.push_back(labels.at(r));
  }
  return out;
}

Instance Dataset::unscale(const Instance& scaled) const {
  if (static_cast<std::size_t>(scaled.size()) != scaling.size()) {
    throw ShapeError("unscale: instance length does not match scaling");
  }
  Instance raw(scaled.size());
  for (Eigen::Index j = 0; j < scaled.size(); ++j) raw(j) = scaling[j].unscale(scaled(j));
  return raw;
}

void Dataset::validate() const {
  if (features.size() != labels.size()) throw DataError("feature rows and labels differ in count");
  const auto p = static_cast<Eigen::Index>(feature_names.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != p) {
      throw DataError("row " + std::to_string(i) + " has the wrong number of features");
    }
    if ((features[i].array() < 0.0).any() || (features[i].array() > 1.0).any()) {
      throw DataError("row " + std::to_string(i) + " lies outside [0,1]^p");
    }
    if (labels[i] != 0 && labels[i] != 1) {
      throw DataError("row " + std::to_string(i) + " has a non-binary label");
    }
  }
  if (!scaling.empty() && scaling.size() != feature_names.size()) {
    throw DataError("scaling metadata does not match feature count");
  }
}

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("CSV is empty; a header row is required");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
  const auto header = split_csv_line(line);

  std::optional<std::size_t> label_index;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (trim(header[c]) == options.label_column) label_index = c;
  }
  if (!label_index) throw DataError("label column '" + options.label_column + "' not found");

  Dataset data;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != *label_index) data.feature_names.push_back(trim(header[c]));
  }
  const std::size_t p = data.feature_names.size();
  if (p == 0) throw DataError("CSV has no feature columns");
  if (options.scaling && options.scaling->size() != p) {
    throw DataError("stored scaling has " + std::to_string(options.scaling->size()) +
                    " features, CSV has " + std::to_string(p));
  }

  std::vector<std::vector<double>> raw;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row_number) + ": expected " +
                      std::to_string(header.size()) + " cells, found " +
                      std::to_string(cells.size()));
    }
    std::vector<double> values;
    values.reserve(p);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto value = parse_number(cells[c]);
      if (c == *label_index) {
        if (!value) {
          throw DataError("row " + std::to_string(row_number) + ": missing or non-numeric label");
        }
        if (*value != 0.0 && *value != 1.0) {
          throw DataError("row " + std::to_string(row_number) + ": label must be 0 or 1");
        }
        data.labels.push_back(static_cast<int>(*value));
      } else {
        if (!value) {
          throw DataError("row " + std::to_string(row_number) + ", column '" + trim(header[c]) +
                          "': non-numeric value '" + cells[c] + "'");
        }
        values.push_back(*value);
      }
    }
    raw.push_back(std::move(values));
  }

  if (options.scaling) {
    data.scaling = *options.scaling;
  } else {
    data.scaling.assign(p, FeatureScaling{});
    for (std::size_t j = 0; j < p; ++j) {
      double lo = raw.empty() ? 0.0 : raw[0][j];
      double hi = lo;
      for (const auto& row : raw) {
        lo = std::min(lo, row[j]);
        hi = std::max(hi, row[j]);
      }
      data.scaling[j] = {lo, hi};
    }
  }

  data.features.reserve(raw.size());
  for (const auto& row : raw) {
    Instance x(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
      x(static_cast<Eigen::Index>(j)) = std::clamp(data.scaling[j].scale(row[j]), 0.0, 1.0);
    }
    data.features.push_back(std::move(x));
  }
  return data;
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_csv(in, options);
}

std::vector<std::size_t> split_sizes(std::size_t n, const SplitSpec& spec) {
  const double fractions[3] = {spec.train_fraction, spec.validation_fraction, spec.test_fraction};
  if (std::abs(fractions[0] + fractions[1] + fractions[2] - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
  std::vector<std::size_t> sizes(3);
  std::vector<double> remainders(3);
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = fractions[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    remainders[i] = exact - std::floor(exact);
    assigned += sizes[i];
  }
  std::vector<int> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) sizes[order[k % 3]] += 1;
  return sizes;
}

DatasetSplit split(const Dataset& data, const SplitSpec& spec) {
  if (data.size() < 10) throw DataError("need at least 10 rows to split, have " + std::to_string(data.size()));
  const auto sizes = split_sizes(data.size(), spec);
  Rng rng(spec.seed);
  const auto order = rng.permutation(data.size());
  auto take = [&](std::size_t from, std::size_t count) {
    return data.subset(std::vector<std::size_t>(order.begin() + static_cast<long>(from),
                                                order.begin() + static_cast<long>(from + count)));
  };
  return {take(0, sizes[0]), take(sizes[0], sizes[1]), take(sizes[0] + sizes[1], sizes[2])};
}

Dataset smote_oversample(const Dataset& train, int k_neighbors, std::uint64_t seed) {
  const std::size_t ones = train.count_label(1);
  const std::size_t zeros = train.count_label(0);
  if (ones == 0 || zeros == 0) throw DataError("SMOTE needs both classes present");
  if (ones == zeros) return train;

  const int minority_label = ones < zeros ? 1 : 0;
  const std::size_t majority_count = std::max(ones, zeros);
  std::vector<std::size_t> minority;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.labels[i] == minority_label) minority.push_back(i);
  }

  int k = k_neighbors;
  if (static_cast<std::size_t>(k) >= minority.size()) {
    const int reduced = static_cast<int>(minority.size()) - 1;
    std::cerr << "warning: SMOTE minority class has " << minority.size()
              << " points; reducing k_neighbors from " << k << " to " << reduced << "\n";
    k = reduced;
  }

  // k nearest minority neighbours of each minority point.
  std::vector<std::vector<std::size_t>> neighbours(minority.size());
  for (std::size_t a = 0; a < minority.size(); ++a) {
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t b = 0; b < minority.size(); ++b) {
      if (a == b) continue;
      dist.emplace_back((train.features[minority[a]] - train.features[minority[b]]).squaredNorm(), b);
    }
    std::sort(dist.begin(), dist.end());
    for (int n = 0; n < k; ++n) neighbours[a].push_back(dist[static_cast<std::size_t>(n)].second);
  }

  Dataset out = train;
  Rng rng(seed);
  const std::size_t needed = majority_count - minority.size();
  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t a = rng.index(minority.size());
    const Instance& base = train.features[minority[a]];
    Instance synthetic = base;
    if (k > 0) {
      const Instance& other = train.features[minority[neighbours[a][rng.index(static_cast<std::size_t>(k))]]];
      const double gap = rng.uniform();
      synthetic = base + gap * (other - base);
    }
    synthetic = synthetic.cwiseMax(0.0).cwiseMin(1.0);
    out.features.push_back(std::move(synthetic));
    out.labels.push_back(minority_label);
  }
  return out;
}

BoundaryKind boundary_kind_from_string(const std::string& name) {
  if (name == "linear") return BoundaryKind::linear;
  if (name == "radial") return BoundaryKind::radial;
  if (name == "xor") return BoundaryKind::xor_pattern;
  throw std::invalid_argument("unknown boundary kind '" + name + "'");
}

Dataset synth_boundary(BoundaryKind kind, std::size_t n, std::size_t p, std::uint64_t seed) {
  if (n < 20) throw std::invalid_argument("synth_boundary needs n >= 20");
  if (p < 2) throw std::invalid_argument("synth_boundary needs p >= 2");
  Rng rng(seed);
  Dataset data;
  for (std::size_t j = 0; j < p; ++j) {
    data.feature_names.push_back("x" + std::to_string(j));
    data.scaling.push_back({0.0, 1.0});
  }
  for (std::size_t i = 0; i < n; ++i) {
    Instance x(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) x(static_cast<Eigen::Index>(j)) = rng.uniform();
    int label = 0;
    switch (kind) {
      case BoundaryKind::linear:
        label = x(0) + x(1) > 1.0 ? 1 : 0;
        break;
      case BoundaryKind::radial:
        label = std::hypot(x(0) - 0.5, x(1) - 0.5) < 0.3 ? 1 : 0;
        break;
      case BoundaryKind::xor_pattern:
        label = (x(0) > 0.5) != (x(1) > 0.5) ? 1 : 0;
        break;
    }
    data.features.push_back(std::move(x));
    data.labels.push_back(label);
  }
  return data;
}

nlohmann::json to_json(const std::vector<FeatureScaling>& scaling) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : scaling) out.push_back({s.min, s.max});
  return out;
}

std::vector<FeatureScaling> scaling_from_json(const nlohmann::json& j) {
  std::vector<FeatureScaling> out;
  for (const auto& item : j) out.push_back({item.at(0).get<double>(), item.at(1).get<double>()});
  return out;
}

namespace {

constexpr char kSnapshotMagic[8] = {'H', 'E', 'X', 'D', 'A', 'T', 'A', '1'};

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw DataError("truncated dataset snapshot");
  return value;
}

}  // namespace

void save_snapshot(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  write_pod<std::uint64_t>(out, data.size());
  write_pod<std::uint64_t>(out, data.dim());
  for (std::size_t j = 0; j < data.dim(); ++j) {
    const auto& name = data.feature_names[j];
    write_pod<std::uint64_t>(out, name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    const FeatureScaling s = j < data.scaling.size() ? data.scaling[j] : FeatureScaling{};
    write_pod(out, s.min);
    write_pod(out, s.max);
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    write_pod<std::int32_t>(out, data.labels[i]);
    out.write(reinterpret_cast<const char*>(data.features[i].data()),
              static_cast<std::streamsize>(sizeof(double) * data.dim()));
  }
}

Dataset load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  char magic[sizeof(kSnapshotMagic)];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kSnapshotMagic))) {
    throw DataError("'" + path + "' is not a dataset snapshot");
  }
  const auto n = read_pod<std::uint64_t>(in);
  const auto p = read_pod<std::uint64_t>(in);
  Dataset data;
  for (std::uint64_t j = 0; j < p; ++j) {
    const auto len = read_pod<std::uint64_t>(in);
    std::string name(len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(len));
    data.feature_names.push_back(std::move(name));
    const auto lo = read_pod<double>(in);
    const auto hi = read_pod<double>(in);
    data.scaling.push_back({lo, hi});
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    data.labels.push_back(read_pod<std::int32_t>(in));
    Instance x(static_cast<Eigen::Index>(p));
    in.read(reinterpret_cast<char*>(x.data()), static_cast<std::streamsize>(sizeof(double) * p));
    if (!in) throw DataError("truncated dataset snapshot");
    data.features.push_back(std::move(x));
  }
  data.validate();
  return data;
}

}  // namespace hex
