#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "updraft/config.hpp"
#include "updraft/error.hpp"
#include "updraft/realtime_planner.hpp"

using namespace updraft;

namespace {

View nadir(ViewId id, double x, double z) { return make_view(id, {x, 120, z}, RigSlot::Nadir, Camera{}); }

PriorPlan manual_plan(std::vector<View> views, std::vector<Sample> samples) {
  PriorPlan plan;
  for (const auto &v : views) plan.trajectory.ordered_views.push_back(v.id);
  plan.views = std::move(views);
  plan.samples = std::move(samples);
  plan.candidate_count = plan.views.size();
  return plan;
}

ChangeTarget box_target(int id, double x0, double z0, double x1, double z1, double top) {
  std::vector<Vec3> cloud;
  for (double x : {x0, x1})
    for (double z : {z0, z1})
      for (double y : {0.0, top}) cloud.push_back({x, y, z});
  ChangeTarget t = merge_target(std::nullopt, cloud, MergeOptions{});
  t.id = id;
  return t;
}

}  // namespace

TEST_CASE("a target already fully observed yields no candidates") {
  const Scene s = fx::scene(200, 200);
  PlannerState st = make_state(s, manual_plan({nadir(0, 100, 100)}, {}), 1);
  const ChangeTarget flat = box_target(0, 95, 95, 105, 105, 0.0);
  CHECK_FALSE(target_complete(flat, st.visited, s));
  visit(st, st.prior_remaining.front());
  CHECK(target_complete(flat, st.visited, s));
  CHECK(candidate_pool(st, flat, PlannerConfig{}).empty());
}

TEST_CASE("every pooled candidate sees an unobserved target sample") {
  const Scene s = fx::scene(200, 200);
  PlannerState st = make_state(s, manual_plan({nadir(0, 20, 20), nadir(1, 180, 180)}, {}), 7);
  const ChangeTarget t = box_target(0, 90, 90, 110, 110, 20.0);
  const auto pool = candidate_pool(st, t, PlannerConfig{});
  REQUIRE_FALSE(pool.empty());
  CHECK(st.realtime_views.size() % 5 == 0);
  for (const auto &v : st.realtime_views) CHECK(v.id >= 2);
  const Occluders none;
  for (const auto &v : pool) {
    bool sees = false;
    for (const auto &smp : t.target_samples) sees |= visible(smp, v, none) == 1;
    CHECK(sees);
  }
  // Same target and hull: the pool is not regenerated.
  const auto ids = st.realtime_views;
  candidate_pool(st, t, PlannerConfig{});
  CHECK(st.realtime_views == ids);
}

TEST_CASE("candidate pool keeps a prior view that sees the target") {
  const Scene s = fx::scene(200, 200);
  PlannerState st = make_state(s, manual_plan({nadir(0, 100, 100), nadir(1, 10, 10)}, {}), 7);
  const auto pool = candidate_pool(st, box_target(0, 90, 90, 110, 110, 20.0), PlannerConfig{});
  CHECK(std::any_of(pool.begin(), pool.end(), [](const View &v) { return v.id == 0; }));
  CHECK_FALSE(std::any_of(pool.begin(), pool.end(), [](const View &v) { return v.id == 1; }));
}

TEST_CASE("next best view on tiny pools") {
  const Scene s = fx::scene(200, 200);
  PlannerState st = make_state(s, manual_plan({nadir(0, 0, 0)}, {}), 1);
  const ScoreParams p;
  CHECK_THROWS_WITH_AS(next_best_view(st, std::vector<View>{}, p, 10), "no candidates", Error);
  const std::vector<View> one{nadir(5, 50, 50)};
  CHECK(next_best_view(st, one, p, 10).id == 5);
  // Equal gains: the nearer view wins regardless of order.
  const std::vector<View> two{nadir(8, 150, 0), nadir(9, 30, 0)};
  CHECK(next_best_view(st, two, p, 10).id == 9);
}

TEST_CASE("next best view matches brute-force ranking") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    fx::Rng rng(seed);
    const Scene s = fx::random_scene(rng, 200, 5);
    auto samples = sample_surface(s, 10.0);
    for (auto &smp : samples) smp.q = rng.integer(0, 64) / 64.0;
    std::vector<View> route;
    for (int i = 0; i < 4; ++i) route.push_back(fx::random_view(rng, i, 200));
    PlannerState st = make_state(s, manual_plan(route, samples), seed);
    visit(st, route[0]);
    visit(st, route[1]);
    std::vector<View> pool;
    for (int i = 0; i < 30; ++i) pool.push_back(fx::random_view(rng, 100 + i, 200));
    const int K = rng.integer(1, 10);
    const ScoreParams p;
    const View got = next_best_view(st, pool, p, K);

    std::vector<std::pair<double, ViewId>> ranked;
    for (const auto &v : pool) ranked.push_back({-g_view_realtime(v, st.visited, samples, s, p), v.id});
    std::sort(ranked.begin(), ranked.end());
    const View *best = nullptr;
    for (int r = 0; r < K; ++r) {
      const View &v = *std::find_if(pool.begin(), pool.end(), [&](const View &x) { return x.id == ranked[r].second; });
      const double d = distance(v.position, st.position);
      if (!best || d < distance(best->position, st.position) ||
          (d == distance(best->position, st.position) && v.id < best->id))
        best = &v;
    }
    CHECK(got.id == best->id);
  }
}

TEST_CASE("visiting a view twice is an invariant violation") {
  const Scene s = fx::scene(100, 100);
  PlannerState st = make_state(s, manual_plan({nadir(0, 50, 50)}, {}), 1);
  const View v = st.prior_remaining.front();
  visit(st, v);
  CHECK(st.prior_remaining.empty());
  CHECK_THROWS_AS(visit(st, v), InvariantError);
}

TEST_CASE("prior route resumes in order and skips views with nothing new") {
  const Scene s = fx::scene(200, 200);
  const std::vector<Sample> samples{fx::ground_sample(20, 20), fx::ground_sample(150, 150)};
  const std::vector<View> route{nadir(0, 20, 20), nadir(1, 22, 20), nadir(2, 150, 150)};

  PlannerState st = make_state(s, manual_plan(route, samples), 1);
  auto v = resume_prior(st);
  REQUIRE(v);
  CHECK(v->id == 0);
  visit(st, *v);
  v = resume_prior(st);
  REQUIRE(v);
  CHECK(v->id == 2);
  visit(st, *v);
  CHECK_FALSE(resume_prior(st));

  PlannerState none = make_state(s, manual_plan({nadir(0, 20, 20)}, {}), 1);
  CHECK_FALSE(resume_prior(none));
}

TEST_CASE("after a detour the remaining route restarts at the nearest useful view") {
  const Scene s = fx::scene(300, 300);
  const std::vector<Sample> samples{fx::ground_sample(20, 20), fx::ground_sample(150, 20), fx::ground_sample(280, 20)};
  const std::vector<View> route{nadir(0, 20, 20), nadir(1, 150, 20), nadir(2, 280, 20)};
  PlannerState st = make_state(s, manual_plan(route, samples), 1);
  visit(st, *resume_prior(st));
  visit(st, nadir(50, 290, 20));  // detour that also covers the last route view
  st.diverged = true;
  const auto v = resume_prior(st);
  REQUIRE(v);
  CHECK(v->id == 1);
  CHECK_FALSE(st.diverged);
  CHECK(st.prior_remaining.empty());
}

TEST_CASE("identical epochs fly exactly the prior route") {
  const Scene s = load_scene(UPDRAFT_DATA_DIR "/two_blocks/scene_t1.json");
  const PlannerConfig cfg;
  const PriorPlan plan = plan_prior(s, cfg, 5);
  const MissionResult r = run_mission(s, s, plan, cfg, OracleNoise{}, 5);
  CHECK(r.targets.empty());
  CHECK(r.trajectory.ordered_views == plan.trajectory.ordered_views);
  CHECK(r.trajectory.length_m == doctest::Approx(plan.trajectory.length_m).epsilon(1e-12));
}

TEST_CASE("mission over the bundled change scene") {
  const Scene t1 = load_scene(UPDRAFT_DATA_DIR "/five_changes/scene_t1.json");
  const Scene t2 = load_scene(UPDRAFT_DATA_DIR "/five_changes/scene_t2.json");
  const PlannerConfig cfg;
  const MissionResult r = run_mission(t1, t2, cfg, OracleNoise{}, 0);
  CHECK(r.targets.size() == 5);
  std::set<ViewId> seen;
  std::vector<Vec3> pos;
  for (const auto &v : r.views) {
    CHECK(seen.insert(v.id).second);
    pos.push_back(v.position);
  }
  CHECK(r.trajectory.length_m == doctest::Approx(path_length(pos)).epsilon(1e-12));
  CHECK(r.steps.size() == r.views.size());
  for (const auto &st : r.steps) {
    if (st.kind == "nbv") CHECK(st.target_id >= 0);
  }
  const MissionResult again = run_mission(t1, t2, cfg, OracleNoise{}, 0);
  CHECK(again.trajectory == r.trajectory);
  CHECK(again.targets == r.targets);
}
