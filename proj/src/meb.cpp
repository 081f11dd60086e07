#include "bbsvm/meb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bbsvm {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double squared_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

// Smallest double whose square is >= value2, so that r*r never undercuts
// the distance it was derived from.
double covering_radius(double value2) {
  double r = std::sqrt(value2);
  while (r * r < value2) r = std::nextafter(r, std::numeric_limits<double>::infinity());
  return r;
}

}  // namespace

double AugPoint::norm2() const { return dot(coords, coords) + slack_weight * slack_weight; }

AugPoint raw_point(std::vector<double> coords, PointId id) {
  AugPoint p;
  p.coords = std::move(coords);
  p.id = id;
  return p;
}

AugPoint negated(const AugPoint& p) {
  AugPoint q = p;
  for (double& v : q.coords) v = -v;
  if (q.label) q.label = flipped(*q.label);
  return q;
}

Center::Center(std::vector<double> coords, std::map<PointId, double> slack)
    : coords_(std::move(coords)), slack_(std::move(slack)) {
  std::erase_if(slack_, [](const auto& kv) { return kv.second == 0.0; });
  for (const auto& [id, coeff] : slack_) slack_norm2_ += coeff * coeff;
}

Center Center::at(const AugPoint& p) {
  std::map<PointId, double> slack;
  if (p.slack_weight != 0.0) slack.emplace(p.id, p.slack_weight);
  return Center(p.coords, std::move(slack));
}

double Center::slack_coeff(PointId id) const {
  auto it = slack_.find(id);
  return it == slack_.end() ? 0.0 : it->second;
}

double Center::norm2() const { return dot(coords_, coords_) + slack_norm2_; }

double Center::norm() const { return std::sqrt(norm2()); }

double inner_product(const AugPoint& p, const AugPoint& q) {
  double s = dot(p.coords, q.coords);
  if (p.id == q.id) s += p.slack_weight * q.slack_weight;
  return s;
}

double distance2(const Center& c, const AugPoint& p) {
  if (c.dim() != p.dim()) {
    throw std::invalid_argument("distance2: center has dimension " + std::to_string(c.dim()) +
                                ", point has " + std::to_string(p.dim()));
  }
  double d2 = squared_gap(c.coords(), p.coords);
  if (c.slack_norm2() != 0.0 || p.slack_weight != 0.0) {
    const double a = c.slack_coeff(p.id);
    const double t = a - p.slack_weight;
    d2 += std::max(0.0, c.slack_norm2() - a * a) + t * t;
  }
  return d2;
}

bool expansion_contains(const Ball& ball, const AugPoint& p, double eps) {
  const double reach = (1.0 + eps) * ball.radius;
  return distance2(ball.center, p) <= reach * reach;
}

std::size_t iteration_cap(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("approx_meb: delta must be a positive finite number");
  }
  return static_cast<std::size_t>(std::ceil(1.0 / (delta * delta)));
}

CoreSet approx_meb(std::span<const AugPoint> points, double delta) {
  return approx_meb(points, MebOptions{.delta = delta});
}

CoreSet approx_meb(std::span<const AugPoint> points, const MebOptions& options) {
  std::vector<const AugPoint*> refs;
  refs.reserve(points.size());
  for (const AugPoint& p : points) refs.push_back(&p);
  return approx_meb(std::span<const AugPoint* const>(refs), options);
}

CoreSet approx_meb(std::span<const AugPoint* const> points, const MebOptions& options) {
  if (points.empty()) throw std::invalid_argument("approx_meb: empty point set");
  const std::size_t cap =
      options.max_iterations ? options.max_iterations : iteration_cap(options.delta);
  const double delta = options.delta;
  if (!(delta > 0.0)) throw std::invalid_argument("approx_meb: delta must be positive");

  const std::size_t n = points.size();
  const std::size_t dim = points.front()->dim();
  for (const AugPoint* p : points) {
    if (p->dim() != dim) throw std::invalid_argument("approx_meb: mixed point dimensions");
  }
  const bool track = options.track_slack;

  // Working state: center = sum_m weight[m] * points[member[m]].
  std::vector<double> center = points.front()->coords;
  std::vector<std::size_t> members{0};
  std::vector<double> weights{1.0};
  std::vector<std::ptrdiff_t> slot(n, -1);
  slot[0] = 0;

  std::vector<double> d2(n);
  const double grow2 = (1.0 + delta) * (1.0 + delta);

  for (std::size_t iter = 1;; ++iter) {
    double slack2 = 0.0;
    if (track) {
      for (std::size_t m = 0; m < members.size(); ++m) {
        const double a = weights[m] * points[members[m]]->slack_weight;
        slack2 += a * a;
      }
    }

    std::size_t far = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const AugPoint& p = *points[i];
      double e = squared_gap(center, p.coords);
      if (track) {
        const double a = slot[i] < 0 ? 0.0 : weights[slot[i]] * p.slack_weight;
        const double t = a - p.slack_weight;
        e += std::max(0.0, slack2 - a * a) + t * t;
      }
      d2[i] = e;
      if (e > d2[far] || (e == d2[far] && p.id < points[far]->id)) far = i;
    }

    // Dual value sum_m w_m |p_m - c|^2 bounds the optimal radius^2 from below.
    double lower2 = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) lower2 += weights[m] * d2[members[m]];

    const double far2 = d2[far];
    if (far2 <= grow2 * lower2 || far2 == 0.0 || iter > cap) break;

    const double step = options.step == StepRule::kLineSearch
                            ? 0.5 * (1.0 - lower2 / far2)
                            : 1.0 / static_cast<double>(iter + 1);
    const double keep = 1.0 - step;
    const std::vector<double>& z = points[far]->coords;
    for (std::size_t k = 0; k < dim; ++k) center[k] = keep * center[k] + step * z[k];
    for (double& w : weights) w *= keep;
    if (slot[far] < 0) {
      slot[far] = static_cast<std::ptrdiff_t>(members.size());
      members.push_back(far);
      weights.push_back(step);
    } else {
      weights[slot[far]] += step;
    }
  }

  std::map<PointId, double> slack;
  if (track) {
    for (std::size_t m = 0; m < members.size(); ++m) {
      const AugPoint& p = *points[members[m]];
      if (p.slack_weight != 0.0) slack[p.id] += weights[m] * p.slack_weight;
    }
  }

  CoreSet core;
  core.ball.center = Center(std::move(center), std::move(slack));
  double max2 = 0.0;
  for (const AugPoint* p : points) max2 = std::max(max2, distance2(core.ball.center, *p));
  core.ball.radius = covering_radius(max2);
  core.members.reserve(members.size());
  for (std::size_t m : members) core.members.push_back(*points[m]);
  return core;
}

}  // namespace bbsvm
