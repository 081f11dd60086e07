#pragma once

#include <span>
#include <vector>

namespace bbsvm {

struct ExactBall {
  std::vector<double> center;
  double radius = 0.0;
};

/// Exact minimum enclosing ball of a small low-dimensional point set by
/// exhaustive search over every ball whose boundary passes through at most
/// dim+1 of the points. Meant as a reference for testing.
///
/// Requires 1 <= points.size() <= 60 and 1 <= dim <= 3; throws
/// std::invalid_argument otherwise.
ExactBall exact_meb_small(std::span<const std::vector<double>> points);

}  // namespace bbsvm
