#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "updraft/geometry.hpp"
#include "updraft/scene.hpp"

namespace updraft {

/// The five co-located orientations of the camera rig.
enum class RigSlot { Nadir, PosX, NegX, PosZ, NegZ };
inline constexpr std::array kRigSlots{RigSlot::Nadir, RigSlot::PosX, RigSlot::NegX,
                                      RigSlot::PosZ, RigSlot::NegZ};
std::string_view to_string(RigSlot slot);

enum class ViewStatus { Unvisited, Visited };

/// Pinhole intrinsics as half field-of-view angles plus a far clip distance.
struct Camera {
  double horizontal_half_fov = deg_to_rad(35.0);
  double vertical_half_fov = deg_to_rad(25.0);
  double far = 360.0;

  bool operator==(const Camera &) const = default;
};

/// Tilt of the four oblique rig slots, measured from vertical.
inline constexpr double kRigTilt = deg_to_rad(30.0);

struct View {
  ViewId id = 0;
  Vec3 position;
  Vec3 orientation{0.0, -1.0, 0.0};
  RigSlot slot = RigSlot::Nadir;
  ViewStatus status = ViewStatus::Unvisited;
  Camera camera;

  bool operator==(const View &) const = default;
};

/// Unit viewing direction of a rig slot.
Vec3 rig_direction(RigSlot slot);

View make_view(ViewId id, const Vec3 &position, RigSlot slot, const Camera &camera);

struct Frustum {
  Vec3 apex;
  Vec3 direction;
  Vec3 horizontal_axis;  ///< image x axis, perpendicular to direction
  Vec3 vertical_axis;    ///< image y axis
  double horizontal_half_angle = 0.0;
  double vertical_half_angle = 0.0;
  double far = 0.0;
  double tan_horizontal = 0.0;
  double tan_vertical = 0.0;
};

Frustum frustum_of(const View &view);
bool in_frustum(const Frustum &f, const Vec3 &p);

/// Pad distance h * tan(beta - alpha) + d. Throws for beta < alpha or angles
/// outside [0, pi/2).
double padding(double h, double alpha, double beta, double d);

/// Parameters for one candidate-generation pass.
struct CandidateSpec {
  double safe_height = 120.0;
  double radius = 15.0;     ///< Poisson-disk spacing of view positions
  double pad = 0.0;         ///< footprint dilation distance
  Camera camera;
};

/// Poisson-disk positions over the region dilated by `spec.pad`; five views
/// per position with ids first_id + 5 * position_index + slot_index.
std::vector<View> generate_candidates(std::span<const Vec2> region, const CandidateSpec &spec,
                                      std::uint64_t seed, ViewId first_id = 0);
std::vector<View> generate_candidates(const HullPrism &target, const CandidateSpec &spec,
                                      std::uint64_t seed, ViewId first_id = 0);
std::vector<View> generate_candidates(const Rect &bounds, const CandidateSpec &spec,
                                      std::uint64_t seed, ViewId first_id = 0);

}  // namespace updraft
