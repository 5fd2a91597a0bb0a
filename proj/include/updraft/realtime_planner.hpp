#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "updraft/change_oracle.hpp"
#include "updraft/changeability.hpp"
#include "updraft/config.hpp"
#include "updraft/prior_planner.hpp"
#include "updraft/scene.hpp"
#include "updraft/views.hpp"
#include "updraft/visibility.hpp"

namespace updraft {

/// Memoised visibility of the prior samples (per view id) and of the bound
/// target's samples (per view id, reset whenever the target hull changes).
class VisibilityCache {
 public:
  VisibilityCache(const Scene &model, std::span<const Sample> prior_samples);

  const std::vector<int> &prior_visible(const View &v);
  const std::vector<int> &target_visible(const View &v);

  /// Switches the target cache to the given hull surface. Model prisms whose
  /// footprint overlaps the hull are dropped from its occluders: the change
  /// makes their first-epoch geometry unreliable there.
  void bind_target(int target_id, int version, const HullPrism &hull, std::span<const Sample> samples);
  const Occluders &target_occluders() const { return target_occluders_; }

 private:
  Scene model_;
  VisibilityEngine prior_engine_;
  std::map<ViewId, std::vector<int>> prior_;
  std::vector<Sample> target_samples_;
  Occluders target_occluders_;
  std::map<ViewId, std::vector<int>> target_;
  int target_id_ = -1;
  int target_version_ = -1;
};

struct PlannerState {
  Scene model;  ///< first-epoch scene the planner reasons with
  std::vector<View> visited;
  std::set<ViewId> visited_ids;
  std::vector<View> prior_remaining;  ///< in route order
  std::vector<View> realtime_views;   ///< generated for the bound target
  std::vector<Sample> samples;        ///< prior samples
  std::vector<double> prior_q;
  std::vector<int> prior_seen;        ///< visited observers per prior sample
  long prior_seen_total = 0;

  int target_id = -1;
  int target_version = -1;
  int realtime_target = -1;  ///< target the realtime views were generated for
  HullPrism realtime_hull;   ///< hull they were generated over
  std::vector<Sample> target_samples;
  std::vector<double> target_q;
  std::vector<int> target_seen;
  long target_seen_total = 0;

  /// Whether prior samples enter the real-time gain alongside target samples.
  bool gain_over_prior = true;
  Vec3 position;
  bool diverged = false;  ///< an exploration detour left the prior route
  ViewId next_view_id = 0;
  std::uint64_t realtime_seed = 0;
  std::shared_ptr<VisibilityCache> cache;
};

PlannerState make_state(const Scene &model, const PriorPlan &plan, std::uint64_t realtime_seed);

/// Marks the view visited and updates every observation count.
void visit(PlannerState &state, View v);

/// Points the state at a target's current samples, recounting their observers.
void bind_target(PlannerState &state, const ChangeTarget &target);

/// Unvisited prior views plus real-time views generated over the target hull,
/// keeping those that see at least one target sample no visited view has seen.
std::vector<View> candidate_pool(PlannerState &state, const ChangeTarget &target, const PlannerConfig &cfg);

/// Real-time gain of one candidate over prior and target samples.
double candidate_gain(const PlannerState &state, const View &candidate, const ScoreParams &params);

/// Top-K by gain (ties: lower id), then the one nearest the current position
/// (ties: lower id). Throws Error("no candidates") on an empty pool.
View next_best_view(const PlannerState &state, std::span<const View> pool, const ScoreParams &params, int K);

/// Whether every target sample is seen by some visited view.
bool target_complete(const ChangeTarget &target, std::span<const View> visited, const Scene &scene);

/// Next prior view worth flying to, discarding views that would see nothing new.
std::optional<View> resume_prior(PlannerState &state);

struct StepRecord {
  int step_index = 0;
  ViewId view_id = 0;
  std::string kind;  ///< "prior", "nbv" or "sweep"
  int target_id = -1;
  double gain = 0.0;
  int candidates_considered = 0;
  double wall_time_s = 0.0;

  bool operator==(const StepRecord &) const = default;
};

struct TargetRecord {
  int id = 0;
  HullPrism hull;
  bool unreachable = false;
  int nbv_steps = 0;
  std::size_t cloud_size = 0;
  double iou_gt = 0.0;  ///< best IoU against any ground-truth change region

  bool operator==(const TargetRecord &) const = default;
};

struct VisitedView {
  ViewId id = 0;
  Vec3 position;
  RigSlot slot = RigSlot::Nadir;

  bool operator==(const VisitedView &) const = default;
};

struct MissionResult {
  std::string method;  ///< "updraft" or "rd"
  Trajectory trajectory;
  std::vector<VisitedView> views;  ///< in flight order
  std::vector<TargetRecord> targets;
  std::vector<StepRecord> steps;
  std::size_t prior_view_count = 0;
  std::vector<std::string> warnings;
  PlannerConfig config;
  OracleNoise noise;
  std::uint64_t seed = 0;
  double grid_frac = 0.0;  ///< sweep baseline only

  bool operator==(const MissionResult &) const = default;
};

MissionResult run_mission(const Scene &t1, const Scene &t2, const PlannerConfig &cfg, const OracleNoise &noise,
                          std::uint64_t seed);
/// Same, reusing an existing prior plan of t1.
MissionResult run_mission(const Scene &t1, const Scene &t2, const PriorPlan &plan, const PlannerConfig &cfg,
                          const OracleNoise &noise, std::uint64_t seed);

/// Average wall time of the next-best-view steps, 0 without any.
double average_nbv_time(const MissionResult &r);

/// Per-target IoU against the best-matching ground-truth region.
void score_targets(MissionResult &r, const Scene &t1, const Scene &t2);

}  // namespace updraft
