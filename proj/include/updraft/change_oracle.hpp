#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "updraft/config.hpp"
#include "updraft/geometry.hpp"
#include "updraft/scene.hpp"
#include "updraft/views.hpp"
#include "updraft/visibility.hpp"

namespace updraft {

/// The most recent visited views, oldest first.
class DetectionWindow {
 public:
  explicit DetectionWindow(std::size_t capacity = 8);
  void push(const View &v);
  const std::deque<View> &views() const { return views_; }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::deque<View> views_;
};

struct OracleNoise {
  double dropout_prob = 0.0;
  double jitter_sigma = 0.0;
  std::uint64_t seed = 0;

  /// Throws InvariantError for dropout outside [0, 1] or negative jitter.
  void validate() const;
  bool operator==(const OracleNoise &) const = default;
};

/// Geometric stand-in for image-based change detection: reports surface
/// points of the ground-truth change regions that the window's views can see
/// in the second epoch.
class ChangeOracle {
 public:
  ChangeOracle(const Scene &t1, const Scene &t2, double spacing, OracleNoise noise);

  /// Points seen from any window view; noise is keyed on the newest view id.
  std::vector<Vec3> observe(const DetectionWindow &window) const;

  const std::vector<Prism> &regions() const { return regions_; }

 private:
  std::vector<Prism> regions_;
  std::vector<Sample> points_;
  Occluders occluders_;
  OracleNoise noise_;
};

/// One-shot form: builds the oracle and observes.
std::vector<Vec3> observe(const View &view, const Scene &t1, const Scene &t2,
                          const DetectionWindow &window, const OracleNoise &noise,
                          double spacing = 5.0);

/// Accumulated change cloud and the hull the planner explores.
struct ChangeTarget {
  int id = 0;
  std::vector<Vec3> cloud;
  std::optional<HullPrism> hull;
  std::vector<Sample> target_samples;  ///< hull surface, q = 1
  bool explored = false;
  bool unreachable = false;
  /// Points too degenerate to span a hull yet.
  std::vector<Vec3> pending;
  int version = 0;  ///< bumped on every hull change
};

struct MergeOptions {
  double phi = 0.3;
  bool always_union = false;
  double spacing = 5.0;  ///< target sample spacing
};

/// Union when the new hull overlaps the current one by IoU below phi,
/// replace otherwise. A cloud without plan extent is held in `pending`.
ChangeTarget merge_target(const std::optional<ChangeTarget> &current, std::span<const Vec3> new_points,
                          const MergeOptions &opts);

/// Hull surface samples (top and walls) with q = 1.
std::vector<Sample> target_surface(const HullPrism &hull, double spacing);

/// Single-linkage clusters under `gap`, nearest centroid to `from` first.
std::vector<std::vector<Vec3>> split_targets(std::span<const Vec3> points, double gap, const Vec3 &from);

/// Associates fresh detections with known targets and sequences exploration.
class TargetTracker {
 public:
  TargetTracker(MergeOptions opts, double gap);

  /// Feeds one observation; returns true when any target hull changed.
  bool ingest(std::span<const Vec3> points, const Vec3 &drone);

  /// Active target, choosing the queued target nearest the drone when idle.
  ChangeTarget *active(const Vec3 &drone);
  void finish_active(bool unreachable);

  const std::vector<ChangeTarget> &targets() const { return targets_; }
  std::vector<const ChangeTarget *> finished() const;
  std::vector<std::string> &warnings() { return warnings_; }

 private:
  int associate(const std::vector<Vec3> &cluster) const;

  MergeOptions opts_;
  double gap_;
  std::vector<ChangeTarget> targets_;
  std::vector<int> queue_;  ///< indices into targets_
  int active_ = -1;
  std::vector<int> finished_order_;
  std::vector<std::string> warnings_;
};

}  // namespace updraft
