#include "botsim/geometry.hpp"

#include <cmath>
#include <limits>

namespace botsim {

double normalize_heading(double h) {
  double two_pi = 2.0 * kPi;
  double r = std::fmod(h, two_pi);
  if (r < 0.0) r += two_pi;
  // fmod can land exactly on two_pi after the correction when h is a tiny
  // negative number; fold that back to zero.
  if (r >= two_pi) r = 0.0;
  return r;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  bool inside = false;
  size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    bool crosses = (a.y() > p.y()) != (b.y() > p.y());
    if (crosses) {
      double x_at = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x_at) inside = !inside;
    }
  }
  return inside;
}

double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double distance_to_polygon(const Vec2& p, const Polygon& poly) {
  if (point_in_polygon(p, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    best = std::min(best, distance_to_segment(p, poly[j], poly[i]));
  }
  return best;
}

double ray_segment(const Vec2& p, const Vec2& d, const Vec2& a, const Vec2& b) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Vec2 e = b - a;
  double denom = cross2(d, e);
  if (std::abs(denom) < 1e-12) return kInf;
  double t = cross2(a - p, e) / denom;
  double s = cross2(a - p, d) / denom;
  if (t < 0.0 || s < 0.0 || s > 1.0) return kInf;
  return t;
}

double ray_rect(const Vec2& p, const Vec2& d, const Rect& r) {
  Vec2 c00{r.min_x, r.min_y}, c10{r.max_x, r.min_y};
  Vec2 c11{r.max_x, r.max_y}, c01{r.min_x, r.max_y};
  double best = std::numeric_limits<double>::infinity();
  best = std::min(best, ray_segment(p, d, c00, c10));
  best = std::min(best, ray_segment(p, d, c10, c11));
  best = std::min(best, ray_segment(p, d, c11, c01));
  best = std::min(best, ray_segment(p, d, c01, c00));
  return best;
}

Polygon rect_polygon(double min_x, double min_y, double max_x, double max_y) {
  return {{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y}};
}

}  // namespace botsim
