#include "plyplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "plyplan/errors.hpp"

namespace plyplan {

Vec2 BoundingRect::long_axis() const { return {std::cos(angle), std::sin(angle)}; }

Vec2 BoundingRect::short_axis() const { return {-std::sin(angle), std::cos(angle)}; }

std::array<Vec2, 4> BoundingRect::corners() const {
  const Vec2 u = (length / 2.0) * long_axis();
  const Vec2 v = (width / 2.0) * short_axis();
  return {center - u - v, center + u - v, center + u + v, center - u + v};
}

double BoundingRect::signed_distance_inside(Vec2 p) const {
  const Vec2 d = p - center;
  const double along = dot(d, long_axis());
  const double across = dot(d, short_axis());
  return std::min(length / 2.0 - std::abs(along), width / 2.0 - std::abs(across));
}

double signed_area(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % n]);
  }
  return twice / 2.0;
}

double polygon_area(std::span<const Vec2> polygon) {
  if (polygon.size() < 3) {
    throw DegenerateGeometry("polygon needs at least 3 vertices, got " +
                             std::to_string(polygon.size()));
  }
  const double area = signed_area(polygon);
  if (area < 0.0) throw DegenerateGeometry("polygon is clockwise");
  if (area < kMinArea) throw DegenerateGeometry("polygon area below 1e-12");
  return area;
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(a, b, c);
  if (v > kMinArea) return 1;
  if (v < -kMinArea) return -1;
  return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) - kPointEps <= p.x && p.x <= std::max(a.x, b.x) + kPointEps &&
         std::min(a.y, b.y) - kPointEps <= p.y && p.y <= std::max(a.y, b.y) + kPointEps;
}

bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return o1 != o2 && o3 != o4;
}

bool same_point(Vec2 a, Vec2 b) {
  return std::abs(a.x - b.x) <= kPointEps && std::abs(a.y - b.y) <= kPointEps;
}

}  // namespace

bool is_simple(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[(i + 1) % n];
    if (same_point(a, b)) return false;
    // Adjacent edge folding back onto this one.
    const Vec2 c = polygon[(i + 2) % n];
    if (orientation(a, b, c) == 0 && dot(b - a, c - b) < 0.0) return false;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_touch(a, b, polygon[j], polygon[(j + 1) % n])) return false;
    }
  }
  return true;
}

Polygon convex_hull(std::span<const Vec2> points) {
  if (points.size() < 3) {
    throw DegenerateGeometry("convex hull needs at least 3 points");
  }
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(),
            [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  Polygon hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= kMinArea) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= kMinArea) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateGeometry("all points are collinear");
  return hull;
}

namespace {

bool inside_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  return cross(a, b, p) >= -kMinArea && cross(b, c, p) >= -kMinArea &&
         cross(c, a, p) >= -kMinArea;
}

}  // namespace

std::vector<Triangle> triangulate(std::span<const Vec2> polygon) {
  polygon_area(polygon);
  std::vector<std::size_t> ring(polygon.size());
  for (std::size_t i = 0; i < ring.size(); ++i) ring[i] = i;

  std::vector<Triangle> triangles;
  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    bool clipped = false;
    for (std::size_t k = 0; k < m && !clipped; ++k) {
      const Vec2 a = polygon[ring[(k + m - 1) % m]];
      const Vec2 b = polygon[ring[k]];
      const Vec2 c = polygon[ring[(k + 1) % m]];
      if (cross(a, b, c) <= kMinArea) continue;
      bool ear = true;
      for (std::size_t q = 0; q < m && ear; ++q) {
        if (q == k || q == (k + 1) % m || q == (k + m - 1) % m) continue;
        const Vec2 p = polygon[ring[q]];
        if (same_point(p, a) || same_point(p, b) || same_point(p, c)) continue;
        ear = !inside_triangle(p, a, b, c);
      }
      if (!ear) continue;
      triangles.push_back({a, b, c});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(k));
      clipped = true;
    }
    if (clipped) continue;
    // No proper ear: drop a collinear vertex, which contributes no area.
    auto flat = ring.end();
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2 a = polygon[ring[(k + m - 1) % m]];
      const Vec2 b = polygon[ring[k]];
      const Vec2 c = polygon[ring[(k + 1) % m]];
      if (std::abs(cross(a, b, c)) <= kMinArea) {
        flat = ring.begin() + static_cast<std::ptrdiff_t>(k);
        break;
      }
    }
    if (flat == ring.end()) throw DegenerateGeometry("ear clipping failed; polygon not simple");
    ring.erase(flat);
  }
  const Triangle last{polygon[ring[0]], polygon[ring[1]], polygon[ring[2]]};
  if (cross(last[0], last[1], last[2]) > kMinArea) triangles.push_back(last);
  return triangles;
}

Polygon clip_convex(std::span<const Vec2> subject, std::span<const Vec2> convex_clip) {
  Polygon output(subject.begin(), subject.end());
  const std::size_t m = convex_clip.size();
  for (std::size_t e = 0; e < m && !output.empty(); ++e) {
    const Vec2 c1 = convex_clip[e];
    const Vec2 c2 = convex_clip[(e + 1) % m];
    const Polygon input = std::move(output);
    output.clear();
    for (std::size_t i = 0; i < input.size(); ++i) {
      const Vec2 cur = input[i];
      const Vec2 prev = input[(i + input.size() - 1) % input.size()];
      const double s_cur = cross(c1, c2, cur);
      const double s_prev = cross(c1, c2, prev);
      const auto crossing = [&] {
        const double t = s_prev / (s_prev - s_cur);
        return prev + t * (cur - prev);
      };
      if (s_cur >= 0.0) {
        if (s_prev < 0.0) output.push_back(crossing());
        output.push_back(cur);
      } else if (s_prev >= 0.0) {
        output.push_back(crossing());
      }
    }
  }
  return output;
}

namespace {

struct Box {
  double x0, y0, x1, y1;
};

Box box_of(std::span<const Vec2> pts) {
  Box b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const Vec2& p : pts) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

bool boxes_overlap(const Box& a, const Box& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

}  // namespace

double overlap_area(std::span<const Vec2> a, std::span<const Vec2> b) {
  polygon_area(a);
  polygon_area(b);
  if (!boxes_overlap(box_of(a), box_of(b))) return 0.0;
  const auto ta = triangulate(a);
  const auto tb = triangulate(b);
  double total = 0.0;
  for (const Triangle& s : ta) {
    const Box sb = box_of(s);
    for (const Triangle& t : tb) {
      if (!boxes_overlap(sb, box_of(t))) continue;
      const Polygon piece = clip_convex(s, t);
      if (piece.size() < 3) continue;
      const double area = signed_area(piece);
      if (area > kMinArea) total += area;
    }
  }
  return total;
}

namespace {

double normalize_angle(double a) {
  a = std::fmod(a, std::numbers::pi);
  if (a < 0.0) a += std::numbers::pi;
  if (a >= std::numbers::pi - 1e-12) a = 0.0;
  return a;
}

// a better than b under (area, angle, length) with tolerances.
bool better(const BoundingRect& a, const BoundingRect& b) {
  const double tol = 1e-12 * std::max(1.0, b.area());
  if (a.area() < b.area() - tol) return true;
  if (a.area() > b.area() + tol) return false;
  if (a.angle < b.angle - 1e-12) return true;
  if (a.angle > b.angle + 1e-12) return false;
  return a.length < b.length - 1e-12;
}

}  // namespace

BoundingRect min_enclosing_rectangle(std::span<const Vec2> polygon) {
  const Polygon hull = convex_hull(polygon);
  const std::size_t h = hull.size();
  const auto at = [&](std::size_t i) { return hull[i % h]; };

  BoundingRect best;
  bool have_best = false;
  std::size_t right = 0, top = 0, left = 0;
  for (std::size_t i = 0; i < h; ++i) {
    const Vec2 edge = at(i + 1) - at(i);
    const double norm = std::hypot(edge.x, edge.y);
    const Vec2 u = (1.0 / norm) * edge;
    const Vec2 v{-u.y, u.x};  // inward normal for CCW order
    if (i == 0) {
      for (std::size_t k = 0; k < h; ++k) {
        if (dot(hull[k], u) > dot(hull[right], u)) right = k;
        if (dot(hull[k], v) > dot(hull[top], v)) top = k;
        if (dot(hull[k], u) < dot(hull[left], u)) left = k;
      }
    } else {
      while (dot(at(right + 1) - at(right), u) > 1e-15) right = (right + 1) % h;
      while (dot(at(top + 1) - at(top), v) > 1e-15) top = (top + 1) % h;
      while (dot(at(left + 1) - at(left), u) < -1e-15) left = (left + 1) % h;
    }
    const double u_min = dot(hull[left], u);
    const double u_max = dot(hull[right], u);
    const double v_min = dot(hull[i], v);
    const double v_max = dot(hull[top], v);
    const double extent_u = u_max - u_min;
    const double extent_v = v_max - v_min;
    const Vec2 center = (0.5 * (u_min + u_max)) * u + (0.5 * (v_min + v_max)) * v;

    const double angle_u = normalize_angle(std::atan2(u.y, u.x));
    const double angle_v = normalize_angle(std::atan2(v.y, v.x));
    double angle;
    const double tie = 1e-12 * std::max(1.0, std::max(extent_u, extent_v));
    if (extent_u > extent_v + tie) {
      angle = angle_u;
    } else if (extent_v > extent_u + tie) {
      angle = angle_v;
    } else {
      angle = std::min(angle_u, angle_v);
    }
    BoundingRect candidate{center, angle, std::max(extent_u, extent_v),
                           std::min(extent_u, extent_v)};
    if (!have_best || better(candidate, best)) {
      best = candidate;
      have_best = true;
    }
  }
  return best;
}

}  // namespace plyplan
