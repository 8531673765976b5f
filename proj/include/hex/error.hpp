#pragma once

#include <stdexcept>
#include <string>

namespace hex {

// Dimension mismatch between an input and the object consuming it.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or unusable input data (CSV cells, labels, profiles, model files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fitting or learning procedure could not proceed (degenerate data,
// non-finite loss).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hex
