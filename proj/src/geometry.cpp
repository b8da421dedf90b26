#include "relaymon/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace relaymon {

std::vector<Point> convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Point& a, const Point& b) {
                             return a.x == b.x && a.y == b.y;
                           }),
               points.end());
  const size_t n = points.size();
  if (n <= 2) return points;

  std::vector<Point> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 1e-9) --k;
    hull[k++] = points[i];
  }
  size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 1e-9)
      --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;  // CCW, starts at lexicographic minimum
}

namespace {

std::vector<Point> clip_halfplane(const std::vector<Point>& poly, int axis,
                                  double bound) {
  auto coord = [axis](const Point& p) { return axis == 0 ? p.x : p.y; };
  std::vector<Point> out;
  const size_t n = poly.size();
  if (n == 0) return out;
  if (n == 1) {
    if (coord(poly[0]) >= bound) out.push_back(poly[0]);
    return out;
  }
  for (size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    bool a_in = coord(a) >= bound;
    bool b_in = coord(b) >= bound;
    if (a_in) out.push_back(a);
    if (a_in != b_in) {
      double t = (bound - coord(a)) / (coord(b) - coord(a));
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

}  // namespace

std::vector<Point> clip_lower_bounds(const std::vector<Point>& polygon,
                                     double min_x, double min_y) {
  auto p = clip_halfplane(polygon, 0, min_x);
  p = clip_halfplane(p, 1, min_y);
  if (p.size() > 2) p = convex_hull(std::move(p));  // canonical order, dedup
  return p;
}

std::vector<Point> convex_hull_clip(const std::vector<Point>& points,
                                    double min_x, double min_y) {
  return clip_lower_bounds(convex_hull(std::vector<Point>(points)), min_x,
                           min_y);
}

double polygon_area(const std::vector<Point>& polygon) {
  const size_t n = polygon.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

bool is_convex_ccw(const std::vector<Point>& polygon, double tol) {
  const size_t n = polygon.size();
  if (n < 3) return true;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    const Point& c = polygon[(i + 2) % n];
    if (cross(a, b, c) < -tol) return false;
  }
  return true;
}

bool contains_point(const std::vector<Point>& polygon, const Point& p,
                    double tol) {
  const size_t n = polygon.size();
  if (n == 0) return false;
  if (n == 1)
    return std::abs(polygon[0].x - p.x) <= tol &&
           std::abs(polygon[0].y - p.y) <= tol;
  if (n == 2) {
    double c = cross(polygon[0], polygon[1], p);
    double len = std::hypot(polygon[1].x - polygon[0].x,
                            polygon[1].y - polygon[0].y);
    if (std::abs(c) > tol * std::max(1.0, len)) return false;
    double d = (p.x - polygon[0].x) * (polygon[1].x - polygon[0].x) +
               (p.y - polygon[0].y) * (polygon[1].y - polygon[0].y);
    return d >= -tol && d <= len * len + tol;
  }
  for (size_t i = 0; i < n; ++i) {
    if (cross(polygon[i], polygon[(i + 1) % n], p) < -tol) return false;
  }
  return true;
}

}  // namespace relaymon
