#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "updraft/realtime_planner.hpp"
#include "updraft/scene.hpp"

namespace updraft {

/// Uniform-grid nearest-neighbour index over a fixed point set.
class PointIndex {
 public:
  explicit PointIndex(std::span<const Vec3> points);
  /// Distance to the nearest indexed point. Throws on an empty index.
  double nearest_distance(const Vec3 &q) const;

 private:
  std::vector<Vec3> points_;
  double cell_ = 1.0;
  Vec3 lo_;
  int nx_ = 0, ny_ = 0, nz_ = 0;
  std::vector<std::vector<int>> cells_;
};

/// For each recon point, the distance to its nearest gt point.
std::vector<double> nearest_distances(std::span<const Vec3> from, std::span<const Vec3> to);

/// Nearest-rank pct-quantile (pct in (0, 100]) of the recon-to-gt distances.
double error_percentile(std::span<const Vec3> recon, std::span<const Vec3> gt, double pct);

/// Percentage of gt points whose nearest recon point is closer than d.
double completeness(std::span<const Vec3> recon, std::span<const Vec3> gt, double d);

struct TargetMatch {
  int target_id = 0;
  int gt_index = -1;  ///< -1 for a false positive
  double iou = 0.0;

  bool operator==(const TargetMatch &) const = default;
};

struct QualityReport {
  std::string method;
  std::vector<TargetMatch> per_target_iou;
  int false_positives = 0;
  int missed = 0;  ///< ground-truth regions without a matched target
  int gt_regions = 0;
  int n_views = 0;
  double path_len_m = 0.0;
  std::optional<double> error_p85, error_p90, error_p95;
  std::map<double, double> completeness_at;  ///< threshold (m) -> percent
  double avg_nbv_time_s = 0.0;

  bool operator==(const QualityReport &) const = default;
};

struct EvalOptions {
  double densify_spacing = 1.0;
  std::vector<double> thresholds{1.0, 2.0, 5.0};
};

/// Greedy one-to-one matching of finished hulls to ground-truth regions by
/// descending IoU, plus surface accuracy between the matched sets.
QualityReport evaluate_mission(const MissionResult &result, const Scene &t1, const Scene &t2,
                               const EvalOptions &opts = {});

}  // namespace updraft
