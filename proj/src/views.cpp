#include "updraft/views.hpp"

#include <cmath>

#include "updraft/error.hpp"

namespace updraft {

std::string_view to_string(RigSlot slot) {
  switch (slot) {
    case RigSlot::Nadir: return "nadir";
    case RigSlot::PosX: return "+x";
    case RigSlot::NegX: return "-x";
    case RigSlot::PosZ: return "+z";
    case RigSlot::NegZ: return "-z";
  }
  return "?";
}

Vec3 rig_direction(RigSlot slot) {
  const double s = std::sin(kRigTilt);
  const double c = std::cos(kRigTilt);
  switch (slot) {
    case RigSlot::Nadir: return {0.0, -1.0, 0.0};
    case RigSlot::PosX: return {s, -c, 0.0};
    case RigSlot::NegX: return {-s, -c, 0.0};
    case RigSlot::PosZ: return {0.0, -c, s};
    case RigSlot::NegZ: return {0.0, -c, -s};
  }
  return {0.0, -1.0, 0.0};
}

View make_view(ViewId id, const Vec3 &position, RigSlot slot, const Camera &camera) {
  View v;
  v.id = id;
  v.position = position;
  v.orientation = rig_direction(slot);
  v.slot = slot;
  v.camera = camera;
  return v;
}

Frustum frustum_of(const View &view) {
  Frustum f;
  f.apex = view.position;
  f.direction = view.orientation;
  // Slots tilted about the x axis keep image x along world x; the rest along z.
  const bool tilts_along_x = view.slot == RigSlot::PosX || view.slot == RigSlot::NegX;
  f.horizontal_axis = tilts_along_x ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  f.vertical_axis = normalized(cross(f.direction, f.horizontal_axis));
  f.horizontal_half_angle = view.camera.horizontal_half_fov;
  f.vertical_half_angle = view.camera.vertical_half_fov;
  f.far = view.camera.far;
  f.tan_horizontal = std::tan(f.horizontal_half_angle);
  f.tan_vertical = std::tan(f.vertical_half_angle);
  return f;
}

bool in_frustum(const Frustum &f, const Vec3 &p) {
  const Vec3 w = p - f.apex;
  const double depth = dot(w, f.direction);
  if (depth <= 0.0) return false;
  if (dot(w, w) > f.far * f.far) return false;
  return std::abs(dot(w, f.horizontal_axis)) <= depth * f.tan_horizontal &&
         std::abs(dot(w, f.vertical_axis)) <= depth * f.tan_vertical;
}

double padding(double h, double alpha, double beta, double d) {
  if (!(alpha >= 0.0 && beta < kPi / 2.0)) throw Error("padding angles must lie in [0, pi/2)");
  if (beta < alpha) throw Error("padding requires beta >= alpha");
  if (d < 0.0) throw Error("padding constant must be non-negative");
  return h * std::tan(beta - alpha) + d;
}

std::vector<View> generate_candidates(std::span<const Vec2> region, const CandidateSpec &spec,
                                      std::uint64_t seed, ViewId first_id) {
  if (!(spec.radius > 0.0)) throw Error("candidate radius must be positive");
  if (region.size() < 3 || polygon_area(region) <= 1e-9) throw Error("degenerate target region");
  const Polygon padded = dilate_convex(region, spec.pad);
  const auto positions = poisson_disk(padded, spec.radius, seed);

  std::vector<View> views;
  views.reserve(positions.size() * kRigSlots.size());
  ViewId id = first_id;
  for (const auto &p : positions) {
    for (RigSlot slot : kRigSlots) {
      views.push_back(make_view(id++, {p.x, spec.safe_height, p.y}, slot, spec.camera));
    }
  }
  return views;
}

std::vector<View> generate_candidates(const HullPrism &target, const CandidateSpec &spec,
                                      std::uint64_t seed, ViewId first_id) {
  return generate_candidates(target.footprint, spec, seed, first_id);
}

std::vector<View> generate_candidates(const Rect &bounds, const CandidateSpec &spec,
                                      std::uint64_t seed, ViewId first_id) {
  return generate_candidates(bounds.polygon(), spec, seed, first_id);
}

}  // namespace updraft
