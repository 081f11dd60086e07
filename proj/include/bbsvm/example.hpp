#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbsvm/meb.hpp"

namespace bbsvm {

/// One nonzero entry of a sparse vector; indices are 1-based.
struct Feature {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Entries sorted by strictly increasing index.
using SparseVector = std::vector<Feature>;

struct TrainingExample {
  SparseVector x;
  Label y = Label::kPositive;

  friend bool operator==(const TrainingExample&, const TrainingExample&) = default;
};

/// Malformed input data (bad file contents, unusable vectors, bad model
/// files). Carries the 1-based line number when one is known.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bbsvm
