#include "updraft/change_oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "updraft/error.hpp"

namespace updraft {

DetectionWindow::DetectionWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw InvariantError("detection window capacity must be positive");
}

void DetectionWindow::push(const View &v) {
  views_.push_back(v);
  while (views_.size() > capacity_) views_.pop_front();
}

void OracleNoise::validate() const {
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) throw InvariantError("dropout_prob must lie in [0, 1]");
  if (!(jitter_sigma >= 0.0)) throw InvariantError("jitter_sigma must be non-negative");
}

namespace {

std::vector<Prism> occluder_set(const Scene &t2, const std::vector<Prism> &regions) {
  std::vector<Prism> all = t2.prisms;
  all.insert(all.end(), regions.begin(), regions.end());
  return all;
}

}  // namespace

ChangeOracle::ChangeOracle(const Scene &t1, const Scene &t2, double spacing, OracleNoise noise)
    : regions_(diff_scenes(t1, t2)), noise_(noise) {
  noise_.validate();
  if (!(spacing > 0.0)) throw Error("oracle spacing must be positive");
  for (const auto &r : regions_) {
    auto pts = sample_prism_surface(r.as_hull(), spacing, 1.0, r.label);
    points_.insert(points_.end(), pts.begin(), pts.end());
  }
  const auto occ = occluder_set(t2, regions_);
  occluders_ = Occluders(std::span<const Prism>(occ));
}

std::vector<Vec3> ChangeOracle::observe(const DetectionWindow &window) const {
  std::vector<Vec3> out;
  const auto &views = window.views();
  if (views.empty() || points_.empty()) return out;

  const std::uint64_t key = static_cast<std::uint64_t>(views.back().id);
  std::seed_seq seq{static_cast<std::uint32_t>(noise_.seed), static_cast<std::uint32_t>(noise_.seed >> 32),
                    static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (const auto &s : points_) {
    const bool seen = std::any_of(views.begin(), views.end(),
                                  [&](const View &v) { return visible(s, v, occluders_) == 1; });
    if (!seen) continue;
    // Draw both variates for every visible point so one point's fate does not
    // shift the random stream of the next.
    const double u = unit(rng);
    const Vec3 n{gauss(rng), gauss(rng), gauss(rng)};
    if (u < noise_.dropout_prob) continue;
    out.push_back(s.position + n * noise_.jitter_sigma);
  }
  return out;
}

std::vector<Vec3> observe(const View &view, const Scene &t1, const Scene &t2,
                          const DetectionWindow &window, const OracleNoise &noise, double spacing) {
  if (window.views().empty() || !(window.views().back() == view)) {
    throw Error("observe: the view must be the newest window entry");
  }
  return ChangeOracle(t1, t2, spacing, noise).observe(window);
}

std::vector<Sample> target_surface(const HullPrism &hull, double spacing) {
  return sample_prism_surface(hull, spacing, 1.0, SemanticLabel::Unclassified);
}

namespace {

std::vector<Vec2> plan_points(std::span<const Vec3> pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto &p : pts) out.push_back(plan_of(p));
  return out;
}

void dedupe(std::vector<Vec3> &cloud) {
  auto key = [](const Vec3 &a, const Vec3 &b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  };
  std::sort(cloud.begin(), cloud.end(), key);
  cloud.erase(std::unique(cloud.begin(), cloud.end()), cloud.end());
}

void rebuild(ChangeTarget &t, const MergeOptions &opts) {
  dedupe(t.cloud);
  t.hull = hull_prism_of(t.cloud);
  t.target_samples = target_surface(*t.hull, opts.spacing);
  ++t.version;
}

}  // namespace

ChangeTarget merge_target(const std::optional<ChangeTarget> &current, std::span<const Vec3> new_points,
                          const MergeOptions &opts) {
  ChangeTarget t = current.value_or(ChangeTarget{});
  std::vector<Vec3> fresh(t.pending.begin(), t.pending.end());
  fresh.insert(fresh.end(), new_points.begin(), new_points.end());
  if (fresh.empty()) return t;

  if (!has_planar_extent(plan_points(fresh))) {
    if (t.hull) {
      // Too thin to form its own hull; it can only extend the current one.
      t.pending.clear();
      t.cloud.insert(t.cloud.end(), fresh.begin(), fresh.end());
      rebuild(t, opts);
    } else {
      t.pending = std::move(fresh);
    }
    return t;
  }
  t.pending.clear();

  if (!t.hull) {
    t.cloud = std::move(fresh);
  } else {
    const double iou = iou_prism(*t.hull, hull_prism_of(fresh));
    if (opts.always_union || iou < opts.phi) {
      t.cloud.insert(t.cloud.end(), fresh.begin(), fresh.end());
    } else {
      t.cloud = std::move(fresh);
    }
  }
  rebuild(t, opts);
  return t;
}

std::vector<std::vector<Vec3>> split_targets(std::span<const Vec3> points, double gap, const Vec3 &from) {
  if (!(gap > 0.0)) throw Error("cluster gap must be positive");
  const std::size_t n = points.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const double g2 = gap * gap;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance_sq(points[i], points[j]) <= g2) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  std::vector<std::vector<Vec3>> clusters;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(slot[r])].push_back(points[i]);
  }

  std::vector<double> dist;
  for (const auto &c : clusters) {
    Vec3 m{};
    for (const auto &p : c) m = m + p;
    dist.push_back(distance(m * (1.0 / static_cast<double>(c.size())), from));
  }
  std::vector<std::size_t> order(clusters.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  std::vector<std::vector<Vec3>> sorted;
  for (std::size_t i : order) sorted.push_back(std::move(clusters[i]));
  return sorted;
}

TargetTracker::TargetTracker(MergeOptions opts, double gap) : opts_(opts), gap_(gap) {}

int TargetTracker::associate(const std::vector<Vec3> &cluster) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    const auto &t = targets_[i];
    double d = std::numeric_limits<double>::infinity();
    for (const auto &p : cluster) {
      if (t.hull) d = std::min(d, distance_to_polygon(t.hull->footprint, plan_of(p)));
      for (const auto &q : t.pending) d = std::min(d, distance(plan_of(p), plan_of(q)));
    }
    if (d <= gap_ && d < best_d) {
      best = static_cast<int>(i);
      best_d = d;
    }
  }
  return best;
}

bool TargetTracker::ingest(std::span<const Vec3> points, const Vec3 &drone) {
  bool changed = false;
  for (auto &cluster : split_targets(points, gap_, drone)) {
    const int idx = associate(cluster);
    if (idx < 0) {
      ChangeTarget t = merge_target(std::nullopt, cluster, opts_);
      t.id = static_cast<int>(targets_.size());
      changed = changed || t.hull.has_value();
      targets_.push_back(std::move(t));
      queue_.push_back(static_cast<int>(targets_.size()) - 1);
      continue;
    }

    auto &t = targets_[static_cast<std::size_t>(idx)];
    const int before = t.version;
    if (!t.explored) {
      t = merge_target(t, cluster, opts_);
    } else {
      // Finished targets only grow; a clear growth sends them back to the queue.
      const HullPrism old = *t.hull;
      MergeOptions grow = opts_;
      grow.always_union = true;
      t = merge_target(t, cluster, grow);
      if (t.version != before && iou_prism(old, *t.hull) < 0.95) {
        t.explored = false;
        t.unreachable = false;
        std::erase(finished_order_, idx);
        queue_.push_back(idx);
      }
    }
    changed = changed || t.version != before;
  }
  return changed;
}

ChangeTarget *TargetTracker::active(const Vec3 &drone) {
  if (active_ >= 0) return &targets_[static_cast<std::size_t>(active_)];
  int pick = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int idx : queue_) {
    const auto &t = targets_[static_cast<std::size_t>(idx)];
    if (!t.hull) continue;
    const double d = distance(polygon_centroid(t.hull->footprint), plan_of(drone));
    if (d < best) {
      best = d;
      pick = idx;
    }
  }
  if (pick < 0) return nullptr;
  std::erase(queue_, pick);
  active_ = pick;
  return &targets_[static_cast<std::size_t>(pick)];
}

void TargetTracker::finish_active(bool unreachable) {
  if (active_ < 0) return;
  auto &t = targets_[static_cast<std::size_t>(active_)];
  t.explored = true;
  t.unreachable = unreachable;
  if (unreachable) warnings_.push_back("target " + std::to_string(t.id) + " closed with unobservable samples");
  finished_order_.push_back(active_);
  active_ = -1;
}

std::vector<const ChangeTarget *> TargetTracker::finished() const {
  std::vector<const ChangeTarget *> out;
  for (int idx : finished_order_) out.push_back(&targets_[static_cast<std::size_t>(idx)]);
  return out;
}

}  // namespace updraft
