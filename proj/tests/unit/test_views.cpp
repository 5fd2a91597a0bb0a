#include <doctest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "updraft/error.hpp"
#include "updraft/views.hpp"

using namespace updraft;

TEST_CASE("rig directions are unit vectors tilted from vertical") {
  CHECK(rig_direction(RigSlot::Nadir) == Vec3{0, -1, 0});
  for (RigSlot s : {RigSlot::PosX, RigSlot::NegX, RigSlot::PosZ, RigSlot::NegZ}) {
    const Vec3 d = rig_direction(s);
    CHECK(norm(d) == doctest::Approx(1.0));
    CHECK(std::acos(-d.y) == doctest::Approx(deg_to_rad(30.0)));
  }
  CHECK(rig_direction(RigSlot::PosX).x > 0.0);
  CHECK(rig_direction(RigSlot::NegZ).z < 0.0);
}

TEST_CASE("padding distance") {
  CHECK(padding(120.0, deg_to_rad(25.0), deg_to_rad(30.0), 15.0) ==
        doctest::Approx(120.0 * std::tan(deg_to_rad(5.0)) + 15.0));
  CHECK(padding(120.0, 0.4, 0.4, 7.0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(padding(120.0, 0.5, 0.4, 0.0), Error);
  CHECK_THROWS_AS(padding(120.0, 0.1, kPi / 2.0, 0.0), Error);
  CHECK_THROWS_AS(padding(120.0, 0.1, 0.2, -1.0), Error);
}

TEST_CASE("candidate ids, heights and placement") {
  const Polygon region{{0, 0}, {60, 0}, {60, 40}, {0, 40}};
  CandidateSpec spec;
  spec.radius = 10.0;
  spec.pad = 8.0;
  const auto views = generate_candidates(region, spec, 5, 100);
  REQUIRE(views.size() % 5 == 0);
  const Polygon padded = dilate_convex(region, spec.pad);
  for (std::size_t i = 0; i < views.size(); ++i) {
    const View &v = views[i];
    CHECK(v.id == static_cast<ViewId>(100 + i));
    CHECK(v.slot == kRigSlots[i % 5]);
    CHECK(v.position.y == 120.0);
    CHECK(v.position == views[i - i % 5].position);
    CHECK(contains(padded, plan_of(v.position), 1e-9));
    CHECK(v.orientation == rig_direction(v.slot));
  }
  CHECK(generate_candidates(region, spec, 5, 100) == views);
}

TEST_CASE("a region smaller than one disk gives a single rig position") {
  const Polygon region{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CandidateSpec spec;
  spec.radius = 15.0;
  CHECK(generate_candidates(region, spec, 1).size() == 5);
}

TEST_CASE("degenerate regions are rejected") {
  const Polygon line{{0, 0}, {5, 5}, {10, 10}};
  CHECK_THROWS_WITH_AS(generate_candidates(line, CandidateSpec{}, 1), "degenerate target region", Error);
  CandidateSpec bad;
  bad.radius = 0.0;
  CHECK_THROWS_AS(generate_candidates(Rect{0, 0, 10, 10}, bad, 1), Error);
}

TEST_CASE("frustum limits") {
  const View nadir = make_view(0, {0, 120, 0}, RigSlot::Nadir, Camera{});
  const Frustum f = frustum_of(nadir);
  CHECK(in_frustum(f, {0, 0, 0}));
  CHECK_FALSE(in_frustum(f, {0, 130, 0}));
  // Image x runs along world x for a nadir view: 35 degree half angle there, 25 along z.
  const double reach_x = 120.0 * std::tan(deg_to_rad(35.0));
  const double reach_z = 120.0 * std::tan(deg_to_rad(25.0));
  CHECK(in_frustum(f, {reach_x - 0.01, 0, 0}));
  CHECK_FALSE(in_frustum(f, {reach_x + 0.01, 0, 0}));
  CHECK(in_frustum(f, {0, 0, reach_z - 0.01}));
  CHECK_FALSE(in_frustum(f, {0, 0, reach_z + 0.01}));

  Camera short_range;
  short_range.far = 100.0;
  CHECK_FALSE(in_frustum(frustum_of(make_view(0, {0, 120, 0}, RigSlot::Nadir, short_range)), {0, 0, 0}));

  const View east = make_view(1, {0, 120, 0}, RigSlot::PosX, Camera{});
  const double ahead = 120.0 * std::tan(deg_to_rad(30.0));
  CHECK(in_frustum(frustum_of(east), {ahead, 0, 0}));
  CHECK_FALSE(in_frustum(frustum_of(east), {-ahead, 0, 0}));
}
