#include "updraft/realtime_planner.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "updraft/error.hpp"

namespace updraft {

namespace {

std::vector<Prism> occluders_around(const Scene &model, const HullPrism &hull) {
  std::vector<Prism> keep;
  for (const auto &p : model.prisms) {
    const Polygon inter = clip_convex(p.footprint, hull.footprint);
    if (inter.size() >= 3 && polygon_area(inter) > 1e-9) continue;
    keep.push_back(p);
  }
  return keep;
}

std::uint64_t mix_seed(std::uint64_t seed, int a, int b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::mt19937_64 rng(seq);
  return rng();
}

}  // namespace

VisibilityCache::VisibilityCache(const Scene &model, std::span<const Sample> prior_samples)
    : model_(model), prior_engine_(prior_samples, Occluders(model)) {}

const std::vector<int> &VisibilityCache::prior_visible(const View &v) {
  auto it = prior_.find(v.id);
  if (it == prior_.end()) it = prior_.emplace(v.id, prior_engine_.visible_from(v)).first;
  return it->second;
}

const std::vector<int> &VisibilityCache::target_visible(const View &v) {
  auto it = target_.find(v.id);
  if (it == target_.end()) {
    std::vector<int> vis;
    for (std::size_t i = 0; i < target_samples_.size(); ++i) {
      if (visible(target_samples_[i], v, target_occluders_)) vis.push_back(static_cast<int>(i));
    }
    it = target_.emplace(v.id, std::move(vis)).first;
  }
  return it->second;
}

void VisibilityCache::bind_target(int target_id, int version, const HullPrism &hull,
                                  std::span<const Sample> samples) {
  if (target_id == target_id_ && version == target_version_) return;
  target_id_ = target_id;
  target_version_ = version;
  target_samples_.assign(samples.begin(), samples.end());
  const auto occ = occluders_around(model_, hull);
  target_occluders_ = Occluders(std::span<const Prism>(occ));
  target_.clear();
}

PlannerState make_state(const Scene &model, const PriorPlan &plan, std::uint64_t realtime_seed) {
  PlannerState s;
  s.model = model;
  s.samples = plan.samples;
  s.prior_q.reserve(s.samples.size());
  for (const auto &x : s.samples) s.prior_q.push_back(x.q);
  s.prior_seen.assign(s.samples.size(), 0);

  std::unordered_map<ViewId, const View *> by_id;
  ViewId max_id = -1;
  for (const auto &v : plan.views) {
    by_id[v.id] = &v;
    max_id = std::max(max_id, v.id);
  }
  for (ViewId id : plan.trajectory.ordered_views) s.prior_remaining.push_back(*by_id.at(id));
  if (!s.prior_remaining.empty()) s.position = s.prior_remaining.front().position;
  s.next_view_id = std::max<ViewId>(max_id + 1, static_cast<ViewId>(plan.candidate_count));
  s.realtime_seed = realtime_seed;
  s.cache = std::make_shared<VisibilityCache>(model, s.samples);
  return s;
}

void visit(PlannerState &state, View v) {
  if (state.visited_ids.contains(v.id)) throw InvariantError("view " + std::to_string(v.id) + " visited twice");
  v.status = ViewStatus::Visited;
  state.position = v.position;
  for (int i : state.cache->prior_visible(v)) {
    ++state.prior_seen[static_cast<std::size_t>(i)];
    ++state.prior_seen_total;
  }
  if (state.target_id >= 0) {
    for (int i : state.cache->target_visible(v)) {
      ++state.target_seen[static_cast<std::size_t>(i)];
      ++state.target_seen_total;
    }
  }
  std::erase_if(state.prior_remaining, [&](const View &p) { return p.id == v.id; });
  std::erase_if(state.realtime_views, [&](const View &p) { return p.id == v.id; });
  state.visited_ids.insert(v.id);
  state.visited.push_back(v);
}

void bind_target(PlannerState &state, const ChangeTarget &target) {
  if (!target.hull) throw Error("cannot bind a target without a hull");
  if (state.target_id == target.id && state.target_version == target.version) return;
  state.target_id = target.id;
  state.target_version = target.version;
  state.target_samples = target.target_samples;
  state.target_q.clear();
  for (const auto &s : state.target_samples) state.target_q.push_back(s.q);
  state.cache->bind_target(target.id, target.version, *target.hull, state.target_samples);
  state.target_seen.assign(state.target_samples.size(), 0);
  state.target_seen_total = 0;
  for (const auto &v : state.visited) {
    for (int i : state.cache->target_visible(v)) {
      ++state.target_seen[static_cast<std::size_t>(i)];
      ++state.target_seen_total;
    }
  }
}

std::vector<View> candidate_pool(PlannerState &state, const ChangeTarget &target, const PlannerConfig &cfg) {
  bind_target(state, target);
  const bool stale = state.realtime_target != target.id ||
                     iou_prism(state.realtime_hull, *target.hull) < cfg.regen_iou;
  if (stale) {
    state.realtime_target = target.id;
    state.realtime_hull = *target.hull;
    state.realtime_views.clear();
    if (polygon_area(target.hull->footprint) > 1e-9) {
      const std::uint64_t seed = mix_seed(state.realtime_seed, target.id, target.version);
      state.realtime_views = generate_candidates(*target.hull, cfg.realtime_spec(), seed, state.next_view_id);
      state.next_view_id += static_cast<ViewId>(state.realtime_views.size());
    }
  }

  std::vector<View> pool;
  auto consider = [&](const View &v) {
    if (state.visited_ids.contains(v.id)) return;
    for (int i : state.cache->target_visible(v)) {
      if (state.target_seen[static_cast<std::size_t>(i)] == 0) {
        pool.push_back(v);
        return;
      }
    }
  };
  for (const auto &v : state.prior_remaining) consider(v);
  for (const auto &v : state.realtime_views) consider(v);
  return pool;
}

double candidate_gain(const PlannerState &state, const View &candidate, const ScoreParams &params) {
  double g = 0.0;
  if (state.gain_over_prior) {
    g = realtime_gain(state.cache->prior_visible(candidate), state.prior_q, state.prior_seen, state.prior_seen_total,
                      params);
  }
  if (state.target_id >= 0) {
    g += realtime_gain(state.cache->target_visible(candidate), state.target_q, state.target_seen,
                       state.target_seen_total, params);
  }
  return g;
}

View next_best_view(const PlannerState &state, std::span<const View> pool, const ScoreParams &params, int K) {
  if (pool.empty()) throw Error("no candidates");
  if (K < 1) throw Error("K must be at least 1");
  std::vector<double> gain(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) gain[i] = candidate_gain(state, pool[i], params);

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (gain[a] != gain[b]) return gain[a] > gain[b];
    return pool[a].id < pool[b].id;
  });
  const std::size_t k = std::min(order.size(), static_cast<std::size_t>(K));

  std::size_t best = order[0];
  double best_d = distance(pool[best].position, state.position);
  for (std::size_t r = 1; r < k; ++r) {
    const std::size_t i = order[r];
    const double d = distance(pool[i].position, state.position);
    if (d < best_d || (d == best_d && pool[i].id < pool[best].id)) {
      best = i;
      best_d = d;
    }
  }
  return pool[best];
}

bool target_complete(const ChangeTarget &target, std::span<const View> visited, const Scene &scene) {
  if (target.target_samples.empty()) return true;
  if (!target.hull) return false;
  const auto occ_prisms = occluders_around(scene, *target.hull);
  const Occluders occ{std::span<const Prism>(occ_prisms)};
  for (const auto &s : target.target_samples) {
    const bool seen = std::any_of(visited.begin(), visited.end(),
                                  [&](const View &v) { return visible(s, v, occ) == 1; });
    if (!seen) return false;
  }
  return true;
}

std::optional<View> resume_prior(PlannerState &state) {
  auto useful = [&](const View &v) {
    for (int i : state.cache->prior_visible(v)) {
      if (state.prior_seen[static_cast<std::size_t>(i)] == 0) return true;
    }
    return false;
  };

  if (!state.diverged) {
    while (!state.prior_remaining.empty()) {
      View v = state.prior_remaining.front();
      state.prior_remaining.erase(state.prior_remaining.begin());
      if (useful(v)) return v;
    }
    return std::nullopt;
  }

  // Back from a detour: drop what the detour already covered and re-route the rest.
  std::erase_if(state.prior_remaining, [&](const View &v) { return !useful(v); });
  if (state.prior_remaining.empty()) return std::nullopt;
  const View *start = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto &v : state.prior_remaining) {
    const double d = distance(v.position, state.position);
    if (d < best || (d == best && v.id < start->id)) {
      best = d;
      start = &v;
    }
  }
  const Trajectory route = tsp_tour(state.prior_remaining, start->id);
  std::unordered_map<ViewId, View> by_id;
  for (const auto &v : state.prior_remaining) by_id.emplace(v.id, v);
  state.prior_remaining.clear();
  for (ViewId id : route.ordered_views) state.prior_remaining.push_back(by_id.at(id));
  state.diverged = false;

  View v = state.prior_remaining.front();
  state.prior_remaining.erase(state.prior_remaining.begin());
  return v;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

MissionResult run_mission(const Scene &t1, const Scene &t2, const PriorPlan &plan, const PlannerConfig &cfg,
                          const OracleNoise &noise, std::uint64_t seed) {
  cfg.validate();
  noise.validate();
  const SeedFan seeds = fan_out(seed);
  MissionResult result;
  result.method = "updraft";
  result.config = cfg;
  result.noise = noise;
  result.seed = seed;
  result.prior_view_count = plan.views.size();
  if (!plan.uncoverable.empty()) {
    result.warnings.push_back(std::to_string(plan.uncoverable.size()) +
                              " prior samples are not visible from any candidate view");
  }

  PlannerState state = make_state(t1, plan, seeds.realtime_views);
  state.gain_over_prior = cfg.gain_samples == GainSamples::PriorAndTarget;
  OracleNoise oracle_noise = noise;
  oracle_noise.seed = noise.seed ^ seeds.oracle;
  const ChangeOracle oracle(t1, t2, cfg.target_spacing_m, oracle_noise);
  TargetTracker tracker({cfg.phi, cfg.merge_always_union, cfg.target_spacing_m}, cfg.cluster_gap_m);
  DetectionWindow window(static_cast<std::size_t>(cfg.window));
  const ScoreParams params = cfg.score_params();
  std::map<int, int> nbv_count;

  auto t0 = std::chrono::steady_clock::now();
  std::optional<View> next = resume_prior(state);
  StepRecord pending{0, 0, "prior", -1, 0.0, 0, seconds_since(t0)};

  while (next) {
    pending.step_index = static_cast<int>(result.steps.size());
    pending.view_id = next->id;
    result.steps.push_back(pending);
    visit(state, *next);
    window.push(state.visited.back());

    const auto points = oracle.observe(window);
    if (!points.empty()) tracker.ingest(points, state.position);

    t0 = std::chrono::steady_clock::now();
    next.reset();
    while (ChangeTarget *target = tracker.active(state.position)) {
      bind_target(state, *target);
      const bool done = std::all_of(state.target_seen.begin(), state.target_seen.end(), [](int c) { return c > 0; });
      if (done) {
        tracker.finish_active(false);
        continue;
      }
      if (nbv_count[target->id] >= cfg.max_nbv_per_target) {
        result.warnings.push_back("target " + std::to_string(target->id) + " hit the next-best-view cap");
        tracker.finish_active(true);
        continue;
      }
      const auto pool = candidate_pool(state, *target, cfg);
      if (pool.empty()) {
        tracker.finish_active(true);
        continue;
      }
      const View nbv = next_best_view(state, pool, params, cfg.K);
      ++nbv_count[target->id];
      state.diverged = true;
      pending = StepRecord{0, 0, "nbv", target->id, candidate_gain(state, nbv, params),
                           static_cast<int>(pool.size()), 0.0};
      next = nbv;
      break;
    }
    if (!next) {
      next = resume_prior(state);
      pending = StepRecord{0, 0, "prior", -1, 0.0, 0, 0.0};
    }
    pending.wall_time_s = seconds_since(t0);
  }

  std::vector<Vec3> positions;
  for (const auto &v : state.visited) {
    result.views.push_back({v.id, v.position, v.slot});
    result.trajectory.ordered_views.push_back(v.id);
    positions.push_back(v.position);
  }
  result.trajectory.length_m = path_length(positions);

  for (const ChangeTarget *t : tracker.finished()) {
    TargetRecord rec;
    rec.id = t->id;
    rec.hull = *t->hull;
    rec.unreachable = t->unreachable;
    rec.nbv_steps = nbv_count[t->id];
    rec.cloud_size = t->cloud.size();
    result.targets.push_back(rec);
  }
  for (const auto &w : tracker.warnings()) result.warnings.push_back(w);
  score_targets(result, t1, t2);
  return result;
}

MissionResult run_mission(const Scene &t1, const Scene &t2, const PlannerConfig &cfg, const OracleNoise &noise,
                          std::uint64_t seed) {
  return run_mission(t1, t2, plan_prior(t1, cfg, seed), cfg, noise, seed);
}

double average_nbv_time(const MissionResult &r) {
  double total = 0.0;
  int n = 0;
  for (const auto &s : r.steps) {
    if (s.kind != "nbv") continue;
    total += s.wall_time_s;
    ++n;
  }
  return n == 0 ? 0.0 : total / n;
}

void score_targets(MissionResult &r, const Scene &t1, const Scene &t2) {
  const auto regions = diff_scenes(t1, t2);
  for (auto &t : r.targets) {
    t.iou_gt = 0.0;
    for (const auto &g : regions) t.iou_gt = std::max(t.iou_gt, iou_prism(t.hull, g.as_hull()));
  }
}

}  // namespace updraft
