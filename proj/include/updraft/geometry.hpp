#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "updraft/vec.hpp"

namespace updraft {

using Polygon = std::vector<Vec2>;

/// Vertical extrusion of a convex footprint; the target volume of a detected change.
struct HullPrism {
  Polygon footprint;
  double base_height = 0.0;
  double top_height = 0.0;

  bool operator==(const HullPrism &) const = default;
};

/// Signed area, positive for counter-clockwise polygons.
double signed_area(std::span<const Vec2> poly);
double polygon_area(std::span<const Vec2> poly);
Vec2 polygon_centroid(std::span<const Vec2> poly);

/// True when the polygon is convex and counter-clockwise with no collinear
/// triple spanning zero area. Collinear vertices along an edge are tolerated.
bool is_convex_ccw(std::span<const Vec2> poly, double tol = 1e-9);

/// Point-in-convex-polygon including the boundary (within `tol` metres).
bool contains(std::span<const Vec2> convex_ccw, const Vec2 &p, double tol = 1e-9);

/// Strict interior test: the point is at least `tol` inside every edge.
bool strictly_contains(std::span<const Vec2> convex_ccw, const Vec2 &p, double tol = 1e-9);

/// Euclidean distance from p to the polygon (0 when inside).
double distance_to_polygon(std::span<const Vec2> convex_ccw, const Vec2 &p);

/// Andrew's monotone chain. Output is CCW with collinear points removed.
/// Throws updraft::Error("degenerate hull") for fewer than 3 non-collinear points.
Polygon convex_hull_2d(std::span<const Vec2> points);

/// Whether the points span a non-zero area in plan view.
bool has_planar_extent(std::span<const Vec2> points);

/// Sutherland-Hodgman clip of one convex polygon against another.
Polygon clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip);

/// Minkowski sum of a convex polygon with a regular n-gon of circumradius `radius`.
Polygon dilate_convex(std::span<const Vec2> convex_ccw, double radius, int segments = 16);

HullPrism hull_prism_of(std::span<const Vec3> points);

double prism_volume(const HullPrism &p);

/// Volume IoU of two convex prisms: exact footprint intersection area times
/// the height-interval overlap. Flat prisms fall back to footprint IoU when
/// their heights coincide.
double iou_prism(const HullPrism &a, const HullPrism &b);

/// Bridson dart throwing inside a convex region followed by a lattice fill
/// pass, so the result is maximal up to the fill lattice resolution.
/// Deterministic for a fixed seed.
std::vector<Vec2> poisson_disk(std::span<const Vec2> region, double radius, std::uint64_t seed);

/// Parametric entry/exit of the segment a->b through a convex prism.
/// Returns false when the segment misses the prism. t values are in [0, 1].
bool clip_segment_to_prism(const Vec3 &a, const Vec3 &b, std::span<const Vec2> footprint,
                           double base_height, double top_height, double &t_enter, double &t_exit);

}  // namespace updraft
