#include "updraft/baseline.hpp"

#include <cmath>

#include "updraft/error.hpp"

namespace updraft {

MissionResult baseline_rd(const Scene &t1, const Scene &t2, double grid_frac, const PlannerConfig &cfg,
                          const OracleNoise &noise, std::uint64_t seed) {
  if (!(grid_frac > 0.0 && grid_frac <= 1.0)) throw Error("grid fraction must lie in (0, 1]");
  cfg.validate();
  noise.validate();
  MissionResult result;
  result.method = "rd";
  result.config = cfg;
  result.noise = noise;
  result.seed = seed;
  result.grid_frac = grid_frac;

  const int n = static_cast<int>(std::ceil(1.0 / grid_frac - 1e-9));
  const Rect &b = t1.bounds;
  const double cw = b.width() / n;
  const double cd = b.depth() / n;

  OracleNoise oracle_noise = noise;
  oracle_noise.seed = noise.seed ^ fan_out(seed).oracle;
  const ChangeOracle oracle(t1, t2, cfg.target_spacing_m, oracle_noise);
  MergeOptions merge{cfg.phi, cfg.merge_always_union, cfg.target_spacing_m};
  TargetTracker tracker(merge, cfg.cluster_gap_m);
  DetectionWindow window(static_cast<std::size_t>(cfg.window));

  const Camera camera = cfg.camera();
  std::vector<Vec3> positions;
  ViewId id = 0;
  for (int row = 0; row < n; ++row) {
    for (int k = 0; k < n; ++k) {
      const int col = row % 2 == 0 ? k : n - 1 - k;
      const Vec3 p{b.min_x + (col + 0.5) * cw, cfg.h, b.min_z + (row + 0.5) * cd};
      for (RigSlot slot : {RigSlot::PosX, RigSlot::NegX, RigSlot::PosZ, RigSlot::NegZ}) {
        View v = make_view(id++, p, slot, camera);
        v.status = ViewStatus::Visited;
        result.steps.push_back({static_cast<int>(result.steps.size()), v.id, "sweep", -1, 0.0, 0, 0.0});
        result.views.push_back({v.id, v.position, v.slot});
        result.trajectory.ordered_views.push_back(v.id);
        positions.push_back(p);
        window.push(v);
        const auto pts = oracle.observe(window);
        if (!pts.empty()) tracker.ingest(pts, p);
      }
    }
  }
  result.trajectory.length_m = path_length(positions);

  // Every detection with a hull counts; the sweep itself is the exploration.
  const Vec3 end = positions.empty() ? Vec3{} : positions.back();
  while (tracker.active(end) != nullptr) tracker.finish_active(false);
  for (const ChangeTarget *t : tracker.finished()) {
    TargetRecord rec;
    rec.id = t->id;
    rec.hull = *t->hull;
    rec.cloud_size = t->cloud.size();
    result.targets.push_back(rec);
  }
  score_targets(result, t1, t2);
  return result;
}

}  // namespace updraft
