#ifndef RELAYMON_GEOMETRY_HPP
#define RELAYMON_GEOMETRY_HPP

#include <vector>

namespace relaymon {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Monotone-chain convex hull. Vertices counterclockwise, starting at the
/// lexicographically smallest point; collinear points (within 1e-9 cross)
/// dropped. Degenerate inputs give back what they can (0, 1 or 2 points).
std::vector<Point> convex_hull(std::vector<Point> points);

/// Clips a convex polygon by the halfplanes x >= min_x and y >= min_y
/// (Sutherland-Hodgman, one halfplane at a time).
std::vector<Point> clip_lower_bounds(const std::vector<Point>& polygon,
                                     double min_x, double min_y);

/// Hull of the points, then clipped by the two lower-bound halfplanes.
std::vector<Point> convex_hull_clip(const std::vector<Point>& points,
                                    double min_x, double min_y);

/// Shoelace area; 0 for fewer than 3 vertices.
double polygon_area(const std::vector<Point>& polygon);

/// Every cross product of consecutive edges nonnegative (within tol).
bool is_convex_ccw(const std::vector<Point>& polygon, double tol = 1e-9);

/// True if p lies inside or on the convex CCW polygon (within tol).
bool contains_point(const std::vector<Point>& polygon, const Point& p,
                    double tol = 1e-9);

}  // namespace relaymon

#endif
