#include "updraft/prior_planner.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "updraft/error.hpp"

namespace updraft {

ReduceResult reduce_views(std::span<const View> candidates, std::span<const Sample> samples,
                          const VisibilityTable &table, const ScoreParams &params) {
  const std::size_t nv = candidates.size();
  const std::size_t ns = samples.size();
  ReduceResult out;

  std::vector<int> count(ns, 0);
  for (std::size_t i = 0; i < ns; ++i) {
    count[i] = static_cast<int>(table.by_sample[i].size());
    if (count[i] == 0) out.uncoverable.push_back(static_cast<int>(i));
  }

  std::vector<char> alive(nv, 1), locked(nv, 0);
  auto importance = [&](std::size_t v) {
    double g = 0.0;
    for (int s : table.by_view[v]) {
      g += f_sample_prior(samples[static_cast<std::size_t>(s)],
                          static_cast<std::size_t>(count[static_cast<std::size_t>(s)]), params);
    }
    return g;
  };
  std::vector<double> g(nv);
  for (std::size_t v = 0; v < nv; ++v) g[v] = importance(v);

  std::vector<char> touched(nv, 0);
  std::vector<std::size_t> dirty;
  for (;;) {
    std::size_t best = nv;
    for (std::size_t v = 0; v < nv; ++v) {
      if (!alive[v] || locked[v]) continue;
      if (best == nv || g[v] < g[best] || (g[v] == g[best] && candidates[v].id < candidates[best].id)) {
        best = v;
      }
    }
    if (best == nv) break;

    const auto &seen = table.by_view[best];
    const bool critical = std::any_of(seen.begin(), seen.end(),
                                      [&](int s) { return count[static_cast<std::size_t>(s)] == 1; });
    if (critical) {
      // Coverage only shrinks, so a view that is needed now is needed for good.
      locked[best] = 1;
      out.reverted.push_back(candidates[best].id);
      continue;
    }

    alive[best] = 0;
    out.removed.push_back(candidates[best].id);
    dirty.clear();
    for (int s : seen) {
      const auto si = static_cast<std::size_t>(s);
      --count[si];
      for (int w : table.by_sample[si]) {
        const auto wi = static_cast<std::size_t>(w);
        if (alive[wi] && !touched[wi]) {
          touched[wi] = 1;
          dirty.push_back(wi);
        }
      }
    }
    for (std::size_t w : dirty) {
      g[w] = importance(w);
      touched[w] = 0;
    }
  }

  for (std::size_t v = 0; v < nv; ++v) {
    if (alive[v]) out.retained.push_back(candidates[v]);
  }
  return out;
}

ReduceResult reduce_views(std::span<const View> candidates, std::span<const Sample> samples,
                          const Scene &scene, const ScoreParams &params) {
  return reduce_views(candidates, samples, build_visibility(candidates, samples, scene), params);
}

double path_length(std::span<const Vec3> positions) {
  double len = 0.0;
  for (std::size_t i = 1; i < positions.size(); ++i) len += distance(positions[i - 1], positions[i]);
  return len;
}

namespace {

double tour_cost(const std::vector<int> &order, const std::vector<std::vector<double>> &d) {
  double c = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    c += d[static_cast<std::size_t>(order[i - 1])][static_cast<std::size_t>(order[i])];
  }
  return c;
}

constexpr double kImprovement = 1e-9;

// Reverses order[i..j] when that shortens the open path; position 0 stays fixed.
bool two_opt_pass(std::vector<int> &order, const std::vector<std::vector<double>> &d) {
  const std::size_t n = order.size();
  bool improved = false;
  auto D = [&](std::size_t a, std::size_t b) {
    return d[static_cast<std::size_t>(order[a])][static_cast<std::size_t>(order[b])];
  };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double before = D(i - 1, i) + (j + 1 < n ? D(j, j + 1) : 0.0);
      const double after = D(i - 1, j) + (j + 1 < n ? D(i, j + 1) : 0.0);
      if (after < before - kImprovement) {
        std::reverse(order.begin() + static_cast<long>(i), order.begin() + static_cast<long>(j) + 1);
        improved = true;
      }
    }
  }
  return improved;
}

// Moves a segment of up to three stops (either orientation) to a cheaper slot.
bool segment_move_pass(std::vector<int> &order, const std::vector<std::vector<double>> &d) {
  const std::size_t n = order.size();
  for (std::size_t len = 1; len <= 3; ++len) {
    for (std::size_t i = 1; i + len <= n; ++i) {
      const double base = tour_cost(order, d);
      std::vector<int> seg(order.begin() + static_cast<long>(i),
                           order.begin() + static_cast<long>(i + len));
      std::vector<int> rest(order.begin(), order.begin() + static_cast<long>(i));
      rest.insert(rest.end(), order.begin() + static_cast<long>(i + len), order.end());
      for (std::size_t k = 1; k <= rest.size(); ++k) {
        for (int flip = 0; flip < 2; ++flip) {
          std::vector<int> cand(rest.begin(), rest.begin() + static_cast<long>(k));
          if (flip) {
            cand.insert(cand.end(), seg.rbegin(), seg.rend());
          } else {
            cand.insert(cand.end(), seg.begin(), seg.end());
          }
          cand.insert(cand.end(), rest.begin() + static_cast<long>(k), rest.end());
          if (tour_cost(cand, d) < base - kImprovement) {
            order = std::move(cand);
            return true;
          }
        }
      }
    }
  }
  return false;
}

}  // namespace

Trajectory tsp_tour(std::span<const View> views, ViewId start) {
  if (views.empty()) throw Error("tsp_tour needs at least one view");
  const std::size_t n = views.size();
  std::size_t s = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (views[i].id == start) {
      s = i;
      break;
    }
  }
  if (s == n) throw Error("tsp_tour start view not in the view set");

  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = distance(views[i].position, views[j].position);
  }

  std::vector<int> order{static_cast<int>(s)};
  std::vector<char> used(n, 0);
  used[s] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    const auto cur = static_cast<std::size_t>(order.back());
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (best == n || d[cur][j] < d[cur][best] ||
          (d[cur][j] == d[cur][best] && views[j].id < views[best].id)) {
        best = j;
      }
    }
    used[best] = 1;
    order.push_back(static_cast<int>(best));
  }

  // Segment moves are cubic per pass, so only small tours get them.
  const bool small = n <= 200;
  for (;;) {
    bool improved = two_opt_pass(order, d);
    if (!improved && small) improved = segment_move_pass(order, d);
    if (!improved) break;
  }

  Trajectory t;
  std::vector<Vec3> pos;
  for (int i : order) {
    t.ordered_views.push_back(views[static_cast<std::size_t>(i)].id);
    pos.push_back(views[static_cast<std::size_t>(i)].position);
  }
  t.length_m = path_length(pos);
  return t;
}

ViewId nearest_view(std::span<const View> views, const Vec2 &p) {
  if (views.empty()) throw Error("nearest_view on an empty view set");
  const View *best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto &v : views) {
    const double dd = distance(plan_of(v.position), p);
    if (dd < best_d || (dd == best_d && v.id < best->id)) {
      best = &v;
      best_d = dd;
    }
  }
  return best->id;
}

PriorPlan plan_prior(const Scene &scene_t1, const PlannerConfig &cfg, std::uint64_t seed) {
  cfg.validate();
  PriorPlan plan;
  plan.samples = sample_surface(scene_t1, cfg.sample_spacing_m, cfg.priors);
  const auto candidates = generate_candidates(scene_t1.bounds, cfg.prior_spec(), fan_out(seed).prior_views);
  plan.candidate_count = candidates.size();

  const VisibilityEngine engine(plan.samples, Occluders(scene_t1));
  const VisibilityTable table = build_visibility(candidates, engine);
  assign_observers(plan.samples, candidates, table);
  ReduceResult reduced = reduce_views(candidates, plan.samples, table, cfg.score_params());
  plan.views = std::move(reduced.retained);
  plan.uncoverable = std::move(reduced.uncoverable);
  plan.removal_order = std::move(reduced.removed);

  // Observer lists now describe the retained plan.
  std::unordered_map<ViewId, char> kept;
  for (const auto &v : plan.views) kept[v.id] = 1;
  for (auto &s : plan.samples) {
    std::erase_if(s.observers, [&](ViewId id) { return !kept.contains(id); });
  }

  if (!plan.views.empty()) {
    const ViewId start = nearest_view(plan.views, {scene_t1.bounds.min_x, scene_t1.bounds.min_z});
    plan.trajectory = tsp_tour(plan.views, start);
  }
  return plan;
}

int coverage_violations(const PriorPlan &plan, const Scene &scene) {
  const Occluders occ(scene);
  std::vector<char> skip(plan.samples.size(), 0);
  for (int i : plan.uncoverable) skip[static_cast<std::size_t>(i)] = 1;
  int bad = 0;
  for (std::size_t i = 0; i < plan.samples.size(); ++i) {
    if (skip[i]) continue;
    bool seen = false;
    for (const auto &v : plan.views) {
      if (visible(plan.samples[i], v, occ)) {
        seen = true;
        break;
      }
    }
    if (!seen) ++bad;
  }
  return bad;
}

}  // namespace updraft
