#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace bbsvm {

/// Stream index of a training point. Each id owns one slack basis direction.
using PointId = std::uint64_t;

/// Id carried by query points; never used by a training point.
inline constexpr PointId kQueryId = std::numeric_limits<PointId>::max();

enum class Label : std::int8_t { kNegative = -1, kPositive = 1 };

inline int sign_of(Label label) { return static_cast<int>(label); }
inline Label flipped(Label label) {
  return label == Label::kPositive ? Label::kNegative : Label::kPositive;
}

/// A point of the augmented space: an explicit dense block plus a single
/// implicit slack coordinate `slack_weight` along the basis direction `id`.
/// Two points share a slack direction only when their ids coincide.
struct AugPoint {
  std::vector<double> coords;
  double slack_weight = 0.0;
  PointId id = 0;
  std::optional<Label> label;

  std::size_t dim() const { return coords.size(); }
  double norm2() const;
};

/// Slack-free point, used for plain geometric instances.
AugPoint raw_point(std::vector<double> coords, PointId id);

/// Same point reflected through the origin (slack block untouched).
AugPoint negated(const AugPoint& p);

/// Ball center: explicit block plus the coefficients along the slack
/// directions of the points it was combined from. Zero coefficients are
/// never stored.
class Center {
 public:
  Center() = default;
  explicit Center(std::vector<double> coords, std::map<PointId, double> slack = {});

  static Center at(const AugPoint& p);

  const std::vector<double>& coords() const { return coords_; }
  const std::map<PointId, double>& slack() const { return slack_; }
  double slack_coeff(PointId id) const;
  double slack_norm2() const { return slack_norm2_; }
  double norm2() const;
  double norm() const;
  std::size_t dim() const { return coords_.size(); }

  friend bool operator==(const Center&, const Center&) = default;

 private:
  std::vector<double> coords_;
  std::map<PointId, double> slack_;
  double slack_norm2_ = 0.0;
};

struct Ball {
  Center center;
  double radius = 0.0;

  friend bool operator==(const Ball&, const Ball&) = default;
};

/// Witness points of a ball. The ball's center is a convex combination of
/// the members.
struct CoreSet {
  std::vector<AugPoint> members;
  Ball ball;
};

double inner_product(const AugPoint& p, const AugPoint& q);

/// Squared distance in the augmented space. Throws std::invalid_argument on
/// a dimension mismatch.
double distance2(const Center& c, const AugPoint& p);

/// Closed (1+eps)-expansion membership.
bool expansion_contains(const Ball& ball, const AugPoint& p, double eps);

enum class StepRule {
  kLineSearch,  // exact line search on the dual (default)
  kHarmonic,    // fixed 1/(i+1) step of the classic iteration
};

struct MebOptions {
  double delta = 0.01;
  StepRule step = StepRule::kLineSearch;
  // Disabling skips the slack arithmetic; only meaningful when every slack
  // weight is zero.
  bool track_slack = true;
  // 0 selects iteration_cap(delta).
  std::size_t max_iterations = 0;
};

/// ceil(1 / delta^2), the farthest-point iteration budget.
std::size_t iteration_cap(double delta);

/// (1+delta)-approximate minimum enclosing ball by farthest-point
/// iteration. The center starts at the first point and moves toward the
/// farthest point each round; the loop stops once the farthest distance is
/// within (1+delta) of the dual lower bound on the optimal radius, or when
/// the iteration budget runs out. The reported radius is the true maximum
/// distance from the final center, so every input is contained.
///
/// Farthest-point ties go to the lowest id. Throws std::invalid_argument on
/// empty input, mixed dimensions or delta <= 0.
CoreSet approx_meb(std::span<const AugPoint> points, double delta);
CoreSet approx_meb(std::span<const AugPoint> points, const MebOptions& options);
CoreSet approx_meb(std::span<const AugPoint* const> points, const MebOptions& options);

}  // namespace bbsvm
