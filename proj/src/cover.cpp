#include "bbsvm/cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace bbsvm {

BlurredBallCover::BlurredBallCover(double epsilon, double delta)
    : epsilon_(epsilon), delta_(delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("cover: epsilon must be positive");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("cover: delta must be positive");
  }
}

std::size_t BlurredBallCover::stored_points() const {
  std::size_t total = 0;
  for (const CoreSet& core : cores_) total += core.members.size();
  return total;
}

bool BlurredBallCover::escapes(const AugPoint& p) const {
  return std::none_of(cores_.begin(), cores_.end(), [&](const CoreSet& core) {
    return expansion_contains(core.ball, p, epsilon_);
  });
}

bool BlurredBallCover::offer(Lookahead& buffer, AugPoint p) {
  ++points_seen_;
  buffer.push(std::move(p));
  if (!buffer.full()) return false;
  return check_and_merge(buffer);
}

bool BlurredBallCover::flush(Lookahead& buffer) {
  if (buffer.empty()) return false;
  return check_and_merge(buffer);
}

bool BlurredBallCover::check_and_merge(Lookahead& buffer) {
  const auto& pending = buffer.pending();
  const bool escaped =
      std::any_of(pending.begin(), pending.end(), [&](const AugPoint& p) { return escapes(p); });
  if (escaped) merge_update(pending);
  buffer.clear();
  return escaped;
}

void BlurredBallCover::merge_update(std::span<const AugPoint> batch) {
  std::vector<const AugPoint*> input;
  std::unordered_set<PointId> seen;
  for (const CoreSet& core : cores_) {
    for (const AugPoint& p : core.members) {
      if (seen.insert(p.id).second) input.push_back(&p);
    }
  }
  for (const AugPoint& p : batch) {
    if (seen.insert(p.id).second) input.push_back(&p);
  }

  CoreSet fresh = approx_meb(std::span<const AugPoint* const>(input), MebOptions{.delta = delta_});

  const double floor = 0.25 * epsilon_ * fresh.ball.radius;
  std::erase_if(cores_, [floor](const CoreSet& core) { return core.ball.radius < floor; });
  cores_.push_back(std::move(fresh));
}

std::vector<AugPoint> BlurredBallCover::all_core_points() const {
  std::vector<AugPoint> out;
  std::unordered_set<PointId> seen;
  for (const CoreSet& core : cores_) {
    for (const AugPoint& p : core.members) {
      if (seen.insert(p.id).second) out.push_back(p);
    }
  }
  return out;
}

BlurredBallCover BlurredBallCover::restore(double epsilon, double delta,
                                           std::vector<CoreSet> cores, std::size_t points_seen) {
  BlurredBallCover cover(epsilon, delta);
  cover.cores_ = std::move(cores);
  cover.points_seen_ = points_seen;
  return cover;
}

}  // namespace bbsvm
