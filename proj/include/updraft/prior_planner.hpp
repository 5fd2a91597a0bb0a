#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "updraft/changeability.hpp"
#include "updraft/config.hpp"
#include "updraft/scene.hpp"
#include "updraft/views.hpp"
#include "updraft/visibility.hpp"

namespace updraft {

struct ReduceResult {
  std::vector<View> retained;       ///< input order preserved
  std::vector<ViewId> removed;      ///< in removal order
  /// Views whose removal was attempted and undone because some sample had
  /// them as its only remaining observer.
  std::vector<ViewId> reverted;
  std::vector<int> uncoverable;     ///< samples no candidate sees
};

/// Greedy redundancy removal under a hard coverage constraint. Each step
/// takes the remaining view of lowest prior importance (ties: lower id) and
/// removes it unless that would leave a coverable sample unobserved.
ReduceResult reduce_views(std::span<const View> candidates, std::span<const Sample> samples,
                          const VisibilityTable &table, const ScoreParams &params);
ReduceResult reduce_views(std::span<const View> candidates, std::span<const Sample> samples,
                          const Scene &scene, const ScoreParams &params);

struct Trajectory {
  std::vector<ViewId> ordered_views;
  double length_m = 0.0;

  bool operator==(const Trajectory &) const = default;
};

double path_length(std::span<const Vec3> positions);

/// Open tour over every view starting at `start`: nearest neighbour followed
/// by 2-opt and segment-move passes until no move shortens it.
Trajectory tsp_tour(std::span<const View> views, ViewId start);

/// Id of the view closest to a plan point (ties: lower id).
ViewId nearest_view(std::span<const View> views, const Vec2 &p);

struct PriorPlan {
  std::vector<View> views;  ///< retained views
  Trajectory trajectory;
  std::vector<Sample> samples;
  std::size_t candidate_count = 0;
  std::vector<int> uncoverable;
  std::vector<ViewId> removal_order;
};

/// Samples the scene, generates candidates, reduces them and routes the rest.
PriorPlan plan_prior(const Scene &scene_t1, const PlannerConfig &cfg, std::uint64_t seed);

/// Number of coverable samples not seen by any of the views.
int coverage_violations(const PriorPlan &plan, const Scene &scene);

}  // namespace updraft
