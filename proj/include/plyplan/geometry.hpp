#pragma once

#include <array>
#include <span>
#include <vector>

#include "plyplan/model.hpp"

namespace plyplan {

inline constexpr double kPointEps = 1e-9;    // coincidence tolerance, meters
inline constexpr double kMinArea = 1e-12;    // below this a polygon is degenerate

struct BoundingRect {
  Vec2 center;
  double angle = 0.0;   // long axis orientation in [0, pi)
  double length = 0.0;  // long side
  double width = 0.0;   // short side

  double area() const { return length * width; }
  Vec2 long_axis() const;
  Vec2 short_axis() const;
  // Counter-clockwise corners starting at (-length/2, -width/2) in the rect frame.
  std::array<Vec2, 4> corners() const;
  // Minimum signed distance of p to the four sides; >= 0 iff p lies inside.
  double signed_distance_inside(Vec2 p) const;
};

using Triangle = std::array<Vec2, 3>;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double cross(Vec2 o, Vec2 a, Vec2 b) { return cross(a - o, b - o); }

// Shoelace area, positive for counter-clockwise vertex order.
double signed_area(std::span<const Vec2> polygon);

// Area of a CCW polygon. Throws DegenerateGeometry for fewer than three
// vertices, clockwise order or area below kMinArea.
double polygon_area(std::span<const Vec2> polygon);

// True when no two non-adjacent edges touch and no adjacent edges fold back.
bool is_simple(std::span<const Vec2> polygon);

// Andrew's monotone chain. CCW, collinear points dropped.
Polygon convex_hull(std::span<const Vec2> points);

// Ear clipping of a simple CCW polygon into CCW triangles.
std::vector<Triangle> triangulate(std::span<const Vec2> polygon);

// Sutherland-Hodgman: subject clipped against a convex CCW clip polygon.
Polygon clip_convex(std::span<const Vec2> subject, std::span<const Vec2> convex_clip);

// Intersection area of two simple CCW polygons. Boundary contact gives 0.
double overlap_area(std::span<const Vec2> a, std::span<const Vec2> b);

// Minimum-area enclosing rectangle by rotating calipers over the hull. Ties
// prefer the smaller angle, then the smaller length.
BoundingRect min_enclosing_rectangle(std::span<const Vec2> polygon);

}  // namespace plyplan
