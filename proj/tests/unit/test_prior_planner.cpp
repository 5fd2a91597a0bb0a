#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>

#include "fixtures.hpp"
#include "updraft/config.hpp"
#include "updraft/error.hpp"
#include "updraft/prior_planner.hpp"

using namespace updraft;

namespace {

struct Instance {
  std::vector<View> views;
  std::vector<Sample> samples;
  VisibilityTable table;
};

Instance make_instance(const std::vector<std::vector<int>> &by_sample, std::vector<double> q, int n_views) {
  Instance in;
  for (int v = 0; v < n_views; ++v) in.views.push_back(make_view(v, {10.0 * v, 120, 0}, RigSlot::Nadir, Camera{}));
  in.table.by_view.assign(static_cast<std::size_t>(n_views), {});
  in.table.by_sample = by_sample;
  for (std::size_t s = 0; s < by_sample.size(); ++s) {
    in.samples.push_back(fx::ground_sample(0, 0, q[s]));
    for (int v : by_sample[s]) in.table.by_view[static_cast<std::size_t>(v)].push_back(static_cast<int>(s));
  }
  return in;
}

Instance random_instance(fx::Rng &rng, int n_views, int n_samples, double density) {
  std::vector<std::vector<int>> by_sample(static_cast<std::size_t>(n_samples));
  std::vector<double> q;
  for (auto &obs : by_sample) {
    for (int v = 0; v < n_views; ++v)
      if (rng.coin(density)) obs.push_back(v);
    q.push_back(rng.uniform(0.001, 0.3));
  }
  return make_instance(by_sample, q, n_views);
}

bool covers(const Instance &in, unsigned mask) {
  for (const auto &obs : in.table.by_sample) {
    if (obs.empty()) continue;
    bool any = false;
    for (int v : obs) any |= (mask >> v) & 1u;
    if (!any) return false;
  }
  return true;
}

int optimum(const Instance &in) {
  const int n = static_cast<int>(in.views.size());
  int best = n;
  for (unsigned mask = 0; mask < (1u << n); ++mask)
    if (covers(in, mask)) best = std::min(best, std::popcount(mask));
  return best;
}

unsigned mask_of(const std::vector<View> &views) {
  unsigned m = 0;
  for (const auto &v : views) m |= 1u << v.id;
  return m;
}

double brute_open_tour(const std::vector<View> &views, std::size_t start) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < views.size(); ++i)
    if (i != start) rest.push_back(i);
  double best = 1e18;
  do {
    double len = 0.0;
    std::size_t cur = start;
    for (std::size_t i : rest) {
      len += distance(views[cur].position, views[i].position);
      cur = i;
    }
    best = std::min(best, len);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

double nearest_neighbour_length(const std::vector<View> &views, std::size_t start) {
  std::vector<char> used(views.size(), 0);
  used[start] = 1;
  std::size_t cur = start;
  double len = 0.0;
  for (std::size_t step = 1; step < views.size(); ++step) {
    std::size_t best = views.size();
    for (std::size_t j = 0; j < views.size(); ++j) {
      if (used[j]) continue;
      if (best == views.size() || distance(views[cur].position, views[j].position) <
                                      distance(views[cur].position, views[best].position))
        best = j;
    }
    len += distance(views[cur].position, views[best].position);
    used[best] = 1;
    cur = best;
  }
  return len;
}

std::vector<View> random_positions(fx::Rng &rng, int n) {
  std::vector<View> v;
  for (int i = 0; i < n; ++i)
    v.push_back(make_view(i, {rng.uniform(0, 200), 120, rng.uniform(0, 200)}, RigSlot::Nadir, Camera{}));
  return v;
}

}  // namespace

TEST_CASE("views that each see a private sample are all kept") {
  const Instance in = make_instance({{0}, {1}, {2}}, {0.1, 0.1, 0.1}, 3);
  const auto r = reduce_views(in.views, in.samples, in.table, ScoreParams{});
  CHECK(r.retained.size() == 3);
  CHECK(r.removed.empty());
  CHECK(r.reverted.size() == 3);
}

TEST_CASE("one of two identical views is removed") {
  const Instance in = make_instance({{0, 1}, {0, 1}}, {0.2, 0.1}, 2);
  const auto r = reduce_views(in.views, in.samples, in.table, ScoreParams{});
  REQUIRE(r.retained.size() == 1);
  CHECK(r.removed == std::vector<ViewId>{0});
  CHECK(r.retained[0].id == 1);
}

TEST_CASE("uncoverable samples do not constrain the reduction") {
  const Instance in = make_instance({{0, 1}, {}, {1}}, {0.1, 0.5, 0.1}, 2);
  const auto r = reduce_views(in.views, in.samples, in.table, ScoreParams{});
  CHECK(r.uncoverable == std::vector<int>{1});
  REQUIRE(r.retained.size() == 1);
  CHECK(r.retained[0].id == 1);
}

TEST_CASE("reduction keeps coverage, is inclusion-minimal and near the optimum") {
  int instances = 0;
  for (std::uint64_t seed = 1; instances < 200; ++seed) {
    fx::Rng rng(seed);
    const int nv = rng.integer(3, 9);
    const Instance in = random_instance(rng, nv, rng.integer(4, 12), rng.uniform(0.2, 0.5));
    ++instances;
    const auto r = reduce_views(in.views, in.samples, in.table, ScoreParams{});
    const unsigned kept = mask_of(r.retained);
    REQUIRE(covers(in, kept));
    for (const auto &v : r.retained) CHECK_FALSE(covers(in, kept & ~(1u << v.id)));
    CHECK(static_cast<int>(r.retained.size()) <= optimum(in) + 1);
    CHECK(r.retained.size() + r.removed.size() == in.views.size());
    for (ViewId id : r.reverted) CHECK(((kept >> id) & 1u) == 1u);
  }
}

TEST_CASE("removal order is invariant to scaling the priors") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    fx::Rng rng(seed);
    Instance in = random_instance(rng, 8, 12, 0.35);
    const auto base = reduce_views(in.views, in.samples, in.table, ScoreParams{});
    for (double c : {0.5, 2.0, 10.0}) {
      Instance scaled = in;
      for (auto &s : scaled.samples) s.q *= c;
      const auto r = reduce_views(scaled.views, scaled.samples, scaled.table, ScoreParams{});
      CHECK(r.removed == base.removed);
      CHECK(r.reverted == base.reverted);
    }
  }
}

TEST_CASE("tour of trivial inputs") {
  const std::vector<View> one{make_view(4, {1, 120, 1}, RigSlot::Nadir, Camera{})};
  const Trajectory t = tsp_tour(one, 4);
  CHECK(t.ordered_views == std::vector<ViewId>{4});
  CHECK(t.length_m == 0.0);
  CHECK_THROWS_AS(tsp_tour(std::vector<View>{}, 0), Error);
  CHECK_THROWS_AS(tsp_tour(one, 5), Error);
}

TEST_CASE("collinear views are toured monotonically from an end") {
  std::vector<View> views;
  for (int i : {3, 0, 4, 1, 2}) views.push_back(make_view(i, {10.0 * i, 120, 0}, RigSlot::Nadir, Camera{}));
  const Trajectory t = tsp_tour(views, 0);
  CHECK(t.ordered_views == std::vector<ViewId>{0, 1, 2, 3, 4});
  CHECK(t.length_m == doctest::Approx(40.0));
}

TEST_CASE("tour is within ten percent of the optimum on small instances") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    fx::Rng rng(seed);
    const auto views = random_positions(rng, 8);
    const Trajectory t = tsp_tour(views, 0);
    CHECK(t.length_m <= 1.1 * brute_open_tour(views, 0) + 1e-9);
  }
}

TEST_CASE("tour properties") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    fx::Rng rng(seed);
    const auto views = random_positions(rng, rng.integer(2, 40));
    const Trajectory t = tsp_tour(views, 0);
    CHECK(t.ordered_views.front() == 0);
    auto sorted = t.ordered_views;
    std::sort(sorted.begin(), sorted.end());
    std::vector<ViewId> expected(views.size());
    std::iota(expected.begin(), expected.end(), 0);
    CHECK(sorted == expected);
    std::vector<Vec3> pos;
    for (ViewId id : t.ordered_views) pos.push_back(views[static_cast<std::size_t>(id)].position);
    CHECK(t.length_m == doctest::Approx(path_length(pos)).epsilon(1e-12));
    CHECK(t.length_m <= nearest_neighbour_length(views, 0) + 1e-9);
    CHECK(tsp_tour(views, 0) == t);
  }
}

TEST_CASE("nearest view breaks ties by id") {
  const std::vector<View> views{make_view(7, {10, 120, 0}, RigSlot::Nadir, Camera{}),
                                make_view(3, {-10, 120, 0}, RigSlot::Nadir, Camera{}),
                                make_view(5, {30, 120, 0}, RigSlot::Nadir, Camera{})};
  CHECK(nearest_view(views, {0, 0}) == 3);
  CHECK(nearest_view(views, {29, 0}) == 5);
}

TEST_CASE("prior plan of an empty scene covers the ground") {
  const Scene s = fx::scene(120, 100);
  PlannerConfig cfg;
  const PriorPlan plan = plan_prior(s, cfg, 1);
  CHECK_FALSE(plan.views.empty());
  CHECK(plan.views.size() < plan.candidate_count);
  CHECK(plan.uncoverable.empty());
  CHECK(coverage_violations(plan, s) == 0);
  CHECK(plan.trajectory.ordered_views.size() == plan.views.size());
}

TEST_CASE("prior plan of the bundled scene is feasible and deterministic") {
  const Scene s = load_scene(UPDRAFT_DATA_DIR "/five_changes/scene_t1.json");
  PlannerConfig cfg;
  const PriorPlan a = plan_prior(s, cfg, 3);
  CHECK(coverage_violations(a, s) == 0);
  const PriorPlan b = plan_prior(s, cfg, 3);
  CHECK(a.trajectory == b.trajectory);
  CHECK(a.removal_order == b.removal_order);
  for (const auto &smp : a.samples) {
    for (ViewId id : smp.observers) {
      CHECK(std::any_of(a.views.begin(), a.views.end(), [&](const View &v) { return v.id == id; }));
    }
  }
}
