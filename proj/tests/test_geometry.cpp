#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "plyplan/errors.hpp"
#include "support.hpp"

using namespace plyplan;
using namespace plyplan::test;

namespace {

Polygon random_convex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> count(3, 25);
  while (true) {
    Polygon pts;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) pts.push_back({u(rng) * 2.0 + 0.5, u(rng) + 0.3});
    Polygon hull = convex_hull(pts);
    if (hull.size() >= 3 && signed_area(hull) > 1e-6) return hull;
  }
}

// Star-shaped around a random center: simple, CCW, usually concave.
Polygon random_star(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = 5 + static_cast<int>(u(rng) * 10);
  const Vec2 c{u(rng), u(rng)};
  Polygon p;
  for (int i = 0; i < k; ++i) {
    const double a = 2 * std::numbers::pi * (i + 0.1 + 0.8 * u(rng)) / k;
    const double r = 0.2 + u(rng);
    p.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return p;
}

// Smallest rectangle aligned with any hull edge, by direct projection.
double brute_force_mer_area(const Polygon& poly) {
  const Polygon hull = convex_hull(poly);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2 e = hull[(i + 1) % hull.size()] - hull[i];
    const double len = std::hypot(e.x, e.y);
    const Vec2 ux{e.x / len, e.y / len};
    const Vec2 uy{-ux.y, ux.x};
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const Vec2& p : poly) {
      lo_x = std::min(lo_x, dot(p, ux));
      hi_x = std::max(hi_x, dot(p, ux));
      lo_y = std::min(lo_y, dot(p, uy));
      hi_y = std::max(hi_y, dot(p, uy));
    }
    best = std::min(best, (hi_x - lo_x) * (hi_y - lo_y));
  }
  return best;
}

bool inside_or_on_convex(const Polygon& hull, Vec2 p) {
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (cross(hull[i], hull[(i + 1) % hull.size()], p) < -1e-12) return false;
  }
  return true;
}

bool same_cycle(const Polygon& a, const Polygon& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t shift = 0; shift < a.size(); ++shift) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) ok = a[(i + shift) % a.size()] == b[i];
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("polygon_area") {
  CHECK(polygon_area(rect(0, 0, 1, 1)) == doctest::Approx(1.0));
  CHECK(polygon_area(Polygon{{0, 0}, {2, 0}, {0, 2}}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(polygon_area(Polygon{{0, 0}, {0, 1}, {1, 1}, {1, 0}}), DegenerateGeometry);
  CHECK_THROWS_AS(polygon_area(Polygon{{0, 0}, {1, 0}}), DegenerateGeometry);
  CHECK_THROWS_AS(polygon_area(Polygon{{0, 0}, {1, 0}, {2, 0}}), DegenerateGeometry);
  CHECK(signed_area(Polygon{{0, 0}, {0, 1}, {1, 1}, {1, 0}}) == doctest::Approx(-1.0));
}

TEST_CASE("is_simple") {
  CHECK(is_simple(rect(0, 0, 1, 1)));
  CHECK(is_simple(Polygon{{0, 0}, {2, 0}, {2, 2}, {1, 1}, {0, 2}}));
  CHECK_FALSE(is_simple(Polygon{{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
  CHECK_FALSE(is_simple(Polygon{{0, 0}, {2, 0}, {1, 0}, {1, 1}}));
}

TEST_CASE("convex_hull") {
  Polygon with_inner = rect(0, 0, 1, 1);
  with_inner.push_back({0.5, 0.5});
  with_inner.push_back({0.5, 0.0});  // collinear on an edge
  CHECK(same_cycle(convex_hull(with_inner), rect(0, 0, 1, 1)));

  Polygon pentagon;
  for (int i = 0; i < 5; ++i) {
    const double a = 2 * std::numbers::pi * i / 5;
    pentagon.push_back({std::cos(a), std::sin(a)});
  }
  CHECK(same_cycle(convex_hull(pentagon), pentagon));

  CHECK_THROWS_AS(convex_hull(Polygon{{0, 0}, {1, 1}, {2, 2}}), DegenerateGeometry);
}

TEST_CASE("convex_hull contains every input point") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int round = 0; round < 20; ++round) {
    Polygon pts;
    for (int i = 0; i < 100; ++i) pts.push_back({u(rng), u(rng)});
    const Polygon hull = convex_hull(pts);
    CHECK(signed_area(hull) > 0.0);
    for (const Vec2& p : pts) CHECK(inside_or_on_convex(hull, p));
    for (std::size_t i = 0; i < hull.size(); ++i) {
      CHECK(cross(hull[i], hull[(i + 1) % hull.size()], hull[(i + 2) % hull.size()]) > 0.0);
    }
  }
}

TEST_CASE("triangulate") {
  const Polygon u_shape{{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  const auto tris = triangulate(u_shape);
  CHECK(tris.size() == u_shape.size() - 2);
  double sum = 0.0;
  for (const Triangle& t : tris) {
    CHECK(signed_area(t) > 0.0);
    sum += signed_area(t);
  }
  CHECK(sum == doctest::Approx(polygon_area(u_shape)));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Polygon p = random_star(rng);
    double total = 0.0;
    for (const Triangle& t : triangulate(p)) total += signed_area(t);
    CHECK(total == doctest::Approx(polygon_area(p)).epsilon(1e-9));
  }
}

TEST_CASE("clip_convex") {
  const Polygon clipped = clip_convex(rect(0, 0, 2, 2), rect(1, 1, 3, 3));
  CHECK(signed_area(clipped) == doctest::Approx(1.0));
  CHECK(clip_convex(rect(0, 0, 1, 1), rect(2, 2, 3, 3)).size() < 3);
}

TEST_CASE("overlap_area examples") {
  CHECK(overlap_area(rect(0, 0, 2, 2), rect(1, 1, 3, 3)) == doctest::Approx(1.0));
  CHECK(overlap_area(rect(0, 0, 1, 1), rect(5, 5, 6, 6)) == 0.0);
  CHECK(overlap_area(rect(0, 0, 1, 1), rect(1, 0, 2, 1)) == 0.0);
  CHECK(overlap_area(rect(0, 0, 1, 1), rect(1, 1, 2, 2)) == 0.0);
  const Polygon u_shape{{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  // the bar crosses both arms of the U but not the notch
  CHECK(overlap_area(u_shape, rect(-1, 1.25, 4, 1.75)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(overlap_area(Polygon{{0, 0}, {0, 1}, {1, 0}}, rect(0, 0, 1, 1)), DegenerateGeometry);
}

TEST_CASE("overlap_area properties") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const Polygon a = (i % 2) ? random_star(rng) : random_convex(rng);
    const Polygon b = (i % 3) ? random_star(rng) : random_convex(rng);
    const double ab = overlap_area(a, b);
    CHECK(ab >= 0.0);
    CHECK(std::abs(ab - overlap_area(b, a)) <= 1e-9);
    CHECK(std::abs(overlap_area(a, a) - polygon_area(a)) <= 1e-9);
    CHECK(ab <= std::min(polygon_area(a), polygon_area(b)) + 1e-9);
  }
}

TEST_CASE("min_enclosing_rectangle examples") {
  const BoundingRect sq = min_enclosing_rectangle(rect(0, 0, 1, 1));
  CHECK(sq.center.x == doctest::Approx(0.5));
  CHECK(sq.center.y == doctest::Approx(0.5));
  CHECK(sq.angle == 0.0);
  CHECK(sq.length == doctest::Approx(1.0));
  CHECK(sq.width == doctest::Approx(1.0));

  const BoundingRect diamond = min_enclosing_rectangle(Polygon{{1, 0}, {2, 1}, {1, 2}, {0, 1}});
  CHECK(diamond.angle == doctest::Approx(std::numbers::pi / 4));
  CHECK(diamond.length == doctest::Approx(std::sqrt(2.0)));
  CHECK(diamond.width == doctest::Approx(std::sqrt(2.0)));
  CHECK(diamond.area() == doctest::Approx(2.0));
  CHECK(diamond.center.x == doctest::Approx(1.0));
  CHECK(diamond.center.y == doctest::Approx(1.0));

  const BoundingRect tall = min_enclosing_rectangle(rect(0, 0, 0.3, 1.5));
  CHECK(tall.angle == doctest::Approx(std::numbers::pi / 2));
  CHECK(tall.length == doctest::Approx(1.5));
  CHECK(tall.width == doctest::Approx(0.3));

  CHECK_THROWS_AS(min_enclosing_rectangle(Polygon{{0, 0}, {1, 0}}), DegenerateGeometry);
}

TEST_CASE("min_enclosing_rectangle against brute force") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const Polygon p = (i % 4 == 3) ? random_star(rng) : random_convex(rng);
    const BoundingRect r = min_enclosing_rectangle(p);
    const double oracle = brute_force_mer_area(p);
    CHECK(std::abs(r.area() - oracle) <= 1e-9 * oracle);
    CHECK(r.angle >= 0.0);
    CHECK(r.angle < std::numbers::pi);
    CHECK(r.length >= r.width);
    CHECK(r.width > 0.0);
    for (const Vec2& v : p) CHECK(r.signed_distance_inside(v) >= -1e-9);
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const Vec2& v : p) {
      lo_x = std::min(lo_x, v.x);
      hi_x = std::max(hi_x, v.x);
      lo_y = std::min(lo_y, v.y);
      hi_y = std::max(hi_y, v.y);
    }
    CHECK(r.area() <= (hi_x - lo_x) * (hi_y - lo_y) + 1e-9);
  }
}

TEST_CASE("bounding rect helpers") {
  BoundingRect r{{1, 1}, 0.0, 2.0, 1.0};
  const auto c = r.corners();
  CHECK(c[0] == Vec2{0, 0.5});
  CHECK(c[2] == Vec2{2, 1.5});
  CHECK(r.signed_distance_inside({1, 1}) == doctest::Approx(0.5));
  CHECK(r.signed_distance_inside({3, 1}) < 0.0);
  CHECK(r.long_axis().x == doctest::Approx(1.0));
  CHECK(r.short_axis().y == doctest::Approx(1.0));
}
