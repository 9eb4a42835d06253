#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "netsense/geometry.hpp"

namespace netsense {

/// Convex hull by Andrew's monotone chain, counter-clockwise, collinear points dropped.
/// Degenerate inputs stay well defined: one distinct point gives one vertex,
/// collinear points give the two extreme endpoints.
inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto &p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// Shoelace area; zero for fewer than three vertices.
inline double polygon_area(std::span<const Vec2> poly) {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) twice += cross(poly[j], poly[i]);
  return 0.5 * std::abs(twice);
}

struct Extents {
  double dx = 0.0;
  double dy = 0.0;
};

/// Axis-aligned widths of a point set.
inline Extents axis_extents(std::span<const Vec2> pts) {
  if (pts.empty()) return {};
  auto [xmin, xmax] = std::minmax_element(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x; });
  auto [ymin, ymax] = std::minmax_element(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.y < b.y; });
  return {xmax->x - xmin->x, ymax->y - ymin->y};
}

} // namespace netsense
