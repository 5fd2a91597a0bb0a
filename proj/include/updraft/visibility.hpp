#pragma once

#include <span>
#include <vector>

#include "updraft/scene.hpp"
#include "updraft/views.hpp"

namespace updraft {

/// Contact with a sample's own face closer than this does not occlude it.
inline constexpr double kSelfContactTolerance = 1e-3;

/// Prism set with cached plan bounding boxes for segment occlusion queries.
class Occluders {
 public:
  Occluders() = default;
  explicit Occluders(std::span<const Prism> prisms);
  explicit Occluders(const Scene &scene) : Occluders(std::span<const Prism>(scene.prisms)) {}

  /// True when the segment from `eye` to `target` passes through the interior
  /// of any prism before reaching the target.
  bool blocked(const Vec3 &eye, const Vec3 &target) const;

  std::size_t size() const { return hulls_.size(); }

 private:
  struct Box {
    double min_x, min_z, max_x, max_z;
  };
  std::vector<HullPrism> hulls_;
  std::vector<Box> boxes_;
};

/// 1 iff the sample is inside the view frustum, faces the view, and is not
/// occluded by any scene prism.
int visible(const Sample &sample, const View &view, const Scene &scene);
int visible(const Sample &sample, const View &view, const Occluders &occluders);
int visible(const Vec3 &position, const Vec3 &normal, const View &view, const Occluders &occluders);

/// Batched visibility over a fixed sample set, bucketed on a plan grid so each
/// view only tests samples under its frustum footprint.
class VisibilityEngine {
 public:
  VisibilityEngine(std::span<const Sample> samples, Occluders occluders, double cell = 20.0);

  /// Sorted indices of samples visible from the view.
  std::vector<int> visible_from(const View &view) const;

  std::size_t sample_count() const { return positions_.size(); }
  const Occluders &occluders() const { return occluders_; }

 private:
  std::vector<Vec3> positions_;
  std::vector<Vec3> normals_;
  Occluders occluders_;
  double cell_;
  double min_x_ = 0.0, min_z_ = 0.0, min_y_ = 0.0;
  int nx_ = 0, nz_ = 0;
  std::vector<std::vector<int>> buckets_;
};

/// Sample/view incidence in both directions. View entries index the input view span.
struct VisibilityTable {
  std::vector<std::vector<int>> by_view;
  std::vector<std::vector<int>> by_sample;
};

VisibilityTable build_visibility(std::span<const View> views, std::span<const Sample> samples,
                                 const Scene &scene);
VisibilityTable build_visibility(std::span<const View> views, const VisibilityEngine &engine);

}  // namespace updraft
