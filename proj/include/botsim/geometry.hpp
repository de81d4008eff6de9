#pragma once

#include <Eigen/Dense>
#include <vector>

namespace botsim {

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

inline constexpr double kPi = 3.14159265358979323846;

struct Rect {
  double min_x{0.0}, min_y{0.0}, max_x{0.0}, max_y{0.0};

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(const Vec2& p) const {
    return p.x() >= min_x && p.x() <= max_x && p.y() >= min_y && p.y() <= max_y;
  }
};

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline Vec2 unit(double bearing) { return {std::cos(bearing), std::sin(bearing)}; }

// Wraps into [0, 2*pi).
double normalize_heading(double h);

bool point_in_polygon(const Vec2& p, const Polygon& poly);

double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b);

// 0 when p lies inside.
double distance_to_polygon(const Vec2& p, const Polygon& poly);

// Smallest t >= 0 with p + t*d on segment [a, b]; infinity when they miss.
double ray_segment(const Vec2& p, const Vec2& d, const Vec2& a, const Vec2& b);

// Ray against the rectangle's four edges (robot rays start inside bounds).
double ray_rect(const Vec2& p, const Vec2& d, const Rect& r);

// Axis-aligned rectangle as a polygon, for building wall obstacles.
Polygon rect_polygon(double min_x, double min_y, double max_x, double max_y);

}  // namespace botsim
