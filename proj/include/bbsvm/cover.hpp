#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bbsvm/meb.hpp"

namespace bbsvm {

/// Points waiting for the next escape check.
class Lookahead {
 public:
  /// A lookahead of 0 behaves as a buffer of one point.
  explicit Lookahead(std::size_t lookahead) : capacity_(lookahead == 0 ? 1 : lookahead) {}

  std::size_t capacity() const { return capacity_; }
  bool full() const { return pending_.size() >= capacity_; }
  bool empty() const { return pending_.empty(); }
  const std::vector<AugPoint>& pending() const { return pending_; }

  void push(AugPoint p) { pending_.push_back(std::move(p)); }
  void clear() { pending_.clear(); }

 private:
  std::vector<AugPoint> pending_;
  std::size_t capacity_;
};

/// Blurred ball cover: a list of core sets with their balls, grown whenever
/// a batch of points is not covered by the (1+epsilon)-expansions.
class BlurredBallCover {
 public:
  BlurredBallCover(double epsilon, double delta);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  std::size_t points_seen() const { return points_seen_; }
  const std::vector<CoreSet>& cores() const { return cores_; }
  std::size_t ball_count() const { return cores_.size(); }
  bool empty() const { return cores_.empty(); }

  /// Sum of core-set sizes over all retained balls.
  std::size_t stored_points() const;

  /// True when `p` lies outside the expansion of every ball (and always
  /// when the cover is empty). Boundary points count as covered.
  bool escapes(const AugPoint& p) const;

  /// Buffers `p`. Once the buffer is full it is checked, merged if any
  /// point escapes, and cleared. Returns whether a merge happened.
  bool offer(Lookahead& buffer, AugPoint p);

  /// End-of-stream check of whatever remains in the buffer.
  bool flush(Lookahead& buffer);

  /// Folds `batch` and every retained core point into one new ball, then
  /// drops older balls smaller than epsilon/4 of the new radius.
  void merge_update(std::span<const AugPoint> batch);

  /// Retained core points in ball order, first occurrence of each id.
  std::vector<AugPoint> all_core_points() const;

  /// Rebuilds a cover from previously saved core sets.
  static BlurredBallCover restore(double epsilon, double delta, std::vector<CoreSet> cores,
                                  std::size_t points_seen);

 private:
  bool check_and_merge(Lookahead& buffer);

  std::vector<CoreSet> cores_;
  double epsilon_;
  double delta_;
  std::size_t points_seen_ = 0;
};

}  // namespace bbsvm
