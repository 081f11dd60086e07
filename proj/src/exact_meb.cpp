#include "bbsvm/exact_meb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace bbsvm {

namespace {

constexpr std::size_t kMaxPoints = 60;
constexpr std::size_t kMaxDim = 3;

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double dist2(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

// Center of the smallest sphere through all of `support`, restricted to
// their affine hull. Empty when the points are affinely dependent.
std::optional<Vec> circumcenter(std::span<const Vec* const> support) {
  const Vec& p0 = *support[0];
  const std::size_t k = support.size() - 1;
  if (k == 0) return p0;

  std::vector<Vec> v(k);
  for (std::size_t i = 0; i < k; ++i) {
    v[i] = *support[i + 1];
    for (std::size_t j = 0; j < p0.size(); ++j) v[i][j] -= p0[j];
  }
  // Gram system G t = b / 2 with G_ij = v_i . v_j and b_i = |v_i|^2.
  std::array<std::array<double, 4>, 3> a{};
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = dot(v[i], v[j]);
    a[i][k] = 0.5 * a[i][i];
    scale = std::max(scale, a[i][i]);
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) <= 1e-12 * scale) return std::nullopt;
    std::swap(a[pivot], a[col]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Vec center = p0;
  for (std::size_t i = 0; i < k; ++i) {
    const double t = a[i][k] / a[i][i];
    for (std::size_t j = 0; j < p0.size(); ++j) center[j] += t * v[i][j];
  }
  return center;
}

struct Search {
  std::span<const Vec> points;
  std::size_t max_support;
  std::vector<const Vec*> chosen;
  double best2 = std::numeric_limits<double>::infinity();
  Vec best_center;

  void consider() {
    auto center = circumcenter(chosen);
    if (!center) return;
    const double r2 = dist2(*center, *chosen[0]);
    if (r2 >= best2) return;
    const double allow = r2 * (1.0 + 1e-12) + 1e-300;
    for (const Vec& p : points) {
      if (dist2(*center, p) > allow) return;
    }
    best2 = r2;
    best_center = std::move(*center);
  }

  void recurse(std::size_t start) {
    if (!chosen.empty()) consider();
    if (chosen.size() == max_support) return;
    for (std::size_t i = start; i < points.size(); ++i) {
      chosen.push_back(&points[i]);
      recurse(i + 1);
      chosen.pop_back();
    }
  }
};

}  // namespace

ExactBall exact_meb_small(std::span<const Vec> points) {
  if (points.empty()) throw std::invalid_argument("exact_meb_small: empty point set");
  if (points.size() > kMaxPoints) throw std::invalid_argument("exact_meb_small: too many points");
  const std::size_t dim = points.front().size();
  if (dim == 0 || dim > kMaxDim) throw std::invalid_argument("exact_meb_small: dim must be 1..3");
  for (const Vec& p : points) {
    if (p.size() != dim) throw std::invalid_argument("exact_meb_small: mixed dimensions");
  }

  Search search{points, dim + 1, {}, std::numeric_limits<double>::infinity(), {}};
  search.recurse(0);

  // The radius is the true maximum distance from the chosen center.
  double r2 = 0.0;
  for (const Vec& p : points) r2 = std::max(r2, dist2(search.best_center, p));
  return ExactBall{search.best_center, std::sqrt(r2)};
}

}  // namespace bbsvm
