#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "updraft/error.hpp"
#include "updraft/geometry.hpp"

using namespace updraft;

TEST_CASE("polygon area and centroid of a rectangle") {
  const Polygon r{{0, 0}, {4, 0}, {4, 2}, {0, 2}};
  CHECK(signed_area(r) == doctest::Approx(8.0));
  Polygon cw(r.rbegin(), r.rend());
  CHECK(signed_area(cw) == doctest::Approx(-8.0));
  CHECK(polygon_area(cw) == doctest::Approx(8.0));
  const Vec2 c = polygon_centroid(r);
  CHECK(c.x == doctest::Approx(2.0));
  CHECK(c.y == doctest::Approx(1.0));
}

TEST_CASE("convex hull drops interior and collinear points") {
  const std::vector<Vec2> pts{{0, 0}, {2, 0}, {1, 0}, {2, 2}, {0, 2}, {1, 1}, {0, 1}};
  const Polygon h = convex_hull_2d(pts);
  CHECK(h.size() == 4);
  CHECK(is_convex_ccw(h));
  CHECK(polygon_area(h) == doctest::Approx(4.0));
}

TEST_CASE("convex hull of collinear points is degenerate") {
  const std::vector<Vec2> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_WITH_AS(convex_hull_2d(pts), "degenerate hull", Error);
  CHECK_FALSE(has_planar_extent(pts));
  const std::vector<Vec2> two{{0, 0}, {1, 0}};
  CHECK_THROWS_AS(convex_hull_2d(two), Error);
}

TEST_CASE("convex hull contains every input point and is idempotent") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    fx::Rng rng(seed);
    std::vector<Vec2> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({rng.uniform(-50, 50), rng.uniform(-50, 50)});
    const Polygon h = convex_hull_2d(pts);
    REQUIRE(is_convex_ccw(h));
    for (const auto &p : pts) CHECK(contains(h, p, 1e-9));
    CHECK(convex_hull_2d(h) == h);
  }
}

TEST_CASE("contains agrees with ray casting on random convex polygons") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    fx::Rng rng(seed);
    const Polygon poly = fx::random_convex(rng, 0, 0, 30, 12);
    for (int i = 0; i < 200; ++i) {
      const Vec2 p{rng.uniform(-40, 40), rng.uniform(-40, 40)};
      if (distance_to_polygon(poly, p) == 0.0 && !strictly_contains(poly, p, 1e-6)) continue;
      CHECK(contains(poly, p) == fx::point_in_polygon(poly, p));
    }
  }
}

TEST_CASE("distance to polygon") {
  const Polygon sq{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  CHECK(distance_to_polygon(sq, {5, 5}) == 0.0);
  CHECK(distance_to_polygon(sq, {13, 5}) == doctest::Approx(3.0));
  CHECK(distance_to_polygon(sq, {13, 14}) == doctest::Approx(5.0));
}

TEST_CASE("clip of two rectangles is their intersection") {
  fx::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double ax = rng.uniform(0, 10), az = rng.uniform(0, 10), bx = rng.uniform(0, 10), bz = rng.uniform(0, 10);
    const double aw = rng.uniform(1, 10), ad = rng.uniform(1, 10), bw = rng.uniform(1, 10), bd = rng.uniform(1, 10);
    const Polygon a{{ax, az}, {ax + aw, az}, {ax + aw, az + ad}, {ax, az + ad}};
    const Polygon b{{bx, bz}, {bx + bw, bz}, {bx + bw, bz + bd}, {bx, bz + bd}};
    const double ox = std::max(0.0, std::min(ax + aw, bx + bw) - std::max(ax, bx));
    const double oz = std::max(0.0, std::min(az + ad, bz + bd) - std::max(az, bz));
    const Polygon c = clip_convex(a, b);
    const double area = c.size() >= 3 ? polygon_area(c) : 0.0;
    CHECK(area == doctest::Approx(ox * oz).epsilon(1e-9));
  }
}

TEST_CASE("iou of prisms") {
  const HullPrism unit{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0, 1};
  CHECK(iou_prism(unit, unit) == doctest::Approx(1.0));
  HullPrism far = unit;
  for (auto &v : far.footprint) v.x += 5;
  CHECK(iou_prism(unit, far) == 0.0);
  HullPrism half = unit;
  for (auto &v : half.footprint) v.x += 0.5;
  CHECK(iou_prism(unit, half) == doctest::Approx(1.0 / 3.0));
  HullPrism raised = unit;
  raised.base_height = 0.5;
  raised.top_height = 1.5;
  CHECK(iou_prism(unit, raised) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("iou is symmetric, bounded and one only for identical prisms") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    fx::Rng rng(seed);
    const HullPrism a{fx::random_convex(rng, 0, 0, 10), rng.uniform(0, 5), rng.uniform(6, 20)};
    const HullPrism b{fx::random_convex(rng, rng.uniform(-5, 5), rng.uniform(-5, 5), 10), rng.uniform(0, 5),
                      rng.uniform(6, 20)};
    const double ab = iou_prism(a, b), ba = iou_prism(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab >= 0.0);
    CHECK(ab < 1.0);
    CHECK(iou_prism(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("hull prism of a point cloud") {
  std::vector<Vec3> pts;
  for (double x : {0.0, 10.0})
    for (double y : {2.0, 8.0})
      for (double z : {0.0, 5.0}) pts.push_back({x, y, z});
  pts.push_back({5, 4, 2});
  const HullPrism h = hull_prism_of(pts);
  CHECK(h.footprint.size() == 4);
  CHECK(polygon_area(h.footprint) == doctest::Approx(50.0));
  CHECK(h.base_height == 2.0);
  CHECK(h.top_height == 8.0);
  CHECK(prism_volume(h) == doctest::Approx(300.0));
}

TEST_CASE("dilation contains the original polygon") {
  fx::Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const Polygon p = fx::random_convex(rng, 0, 0, 20);
    const double r = rng.uniform(0.5, 15);
    const Polygon d = dilate_convex(p, r);
    CHECK(is_convex_ccw(d));
    for (const auto &v : p) CHECK(strictly_contains(d, v, 0.5 * r));
    for (const auto &v : d) CHECK(distance_to_polygon(p, v) <= r + 1e-9);
  }
}

TEST_CASE("poisson disk on a region smaller than one disk yields one point") {
  const Polygon tiny{{0, 0}, {3, 0}, {3, 3}, {0, 3}};
  const auto pts = poisson_disk(tiny, 15.0, 1);
  CHECK(pts.size() == 1);
  CHECK(contains(tiny, pts[0]));
}

TEST_CASE("poisson disk separation, containment and determinism") {
  const Polygon sq{{0, 0}, {100, 0}, {100, 100}, {0, 100}};
  const auto a = poisson_disk(sq, 15.0, 42);
  CHECK(a == poisson_disk(sq, 15.0, 42));
  CHECK(a != poisson_disk(sq, 15.0, 43));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(contains(sq, a[i]));
    for (std::size_t j = i + 1; j < a.size(); ++j) CHECK(distance(a[i], a[j]) >= 15.0);
  }
}

TEST_CASE("poisson disk separation holds over many seeds") {
  const Polygon sq{{0, 0}, {60, 0}, {60, 45}, {0, 45}};
  double min_gap = 1e9;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto pts = poisson_disk(sq, 10.0, seed);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) min_gap = std::min(min_gap, distance(pts[i], pts[j]));
  }
  CHECK(min_gap >= 10.0);
}

TEST_CASE("poisson disk is maximal up to the fill lattice") {
  const Polygon sq{{0, 0}, {100, 0}, {100, 100}, {0, 100}};
  const double r = 15.0;
  int far_probes = 0, probes = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pts = poisson_disk(sq, r, seed);
    fx::Rng rng(seed + 1000);
    for (int i = 0; i < 500; ++i, ++probes) {
      const Vec2 p{rng.uniform(0, 100), rng.uniform(0, 100)};
      double d = 1e9;
      for (const auto &s : pts) d = std::min(d, distance(p, s));
      if (d >= r) ++far_probes;
      worst = std::max(worst, d);
    }
  }
  CHECK(static_cast<double>(far_probes) / probes < 0.01);
  CHECK(worst < 1.1 * r);
}

namespace {

bool inside_prism(const Vec3 &p, const Polygon &fp, double base, double top) {
  return p.y > base && p.y < top && strictly_contains(fp, plan_of(p), 0.0);
}

}  // namespace

TEST_CASE("segment clipping matches dense point sampling") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    fx::Rng rng(seed);
    const Polygon fp = fx::random_convex(rng, 0, 0, 10);
    const double base = rng.uniform(0, 5), top = rng.uniform(6, 20);
    const Vec3 a{rng.uniform(-20, 20), rng.uniform(-5, 30), rng.uniform(-20, 20)};
    const Vec3 b{rng.uniform(-20, 20), rng.uniform(-5, 30), rng.uniform(-20, 20)};
    double t0 = 0, t1 = 0;
    const bool hit = clip_segment_to_prism(a, b, fp, base, top, t0, t1);
    const int n = 4000;
    double first = 2, last = -1;
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      if (inside_prism(a + (b - a) * t, fp, base, top)) {
        first = std::min(first, t);
        last = std::max(last, t);
      }
    }
    if (last >= 0) {
      REQUIRE(hit);
      CHECK(t0 <= first + 1e-9);
      CHECK(t1 >= last - 1e-9);
      CHECK(first - t0 <= 1.0 / n + 1e-9);
      CHECK(t1 - last <= 1.0 / n + 1e-9);
    } else if (hit) {
      CHECK(t1 - t0 <= 1.0 / n + 1e-9);
    }
  }
}
