#include "updraft/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "updraft/error.hpp"

namespace updraft {

PointIndex::PointIndex(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  if (points_.empty()) return;
  Vec3 hi = points_[0];
  lo_ = points_[0];
  for (const auto &p : points_) {
    lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y), std::min(lo_.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const Vec3 ext = hi - lo_;
  const double volume = std::max(ext.x, 1e-9) * std::max(ext.y, 1e-9) * std::max(ext.z, 1e-9);
  // Aim for a few points per cell; flat clouds fall back to the largest extent.
  cell_ = std::cbrt(volume / static_cast<double>(points_.size()) * 2.0);
  const double widest = std::max({ext.x, ext.y, ext.z});
  cell_ = widest > 0.0 ? std::max(cell_, widest / 256.0) : 1.0;
  nx_ = static_cast<int>(ext.x / cell_) + 1;
  ny_ = static_cast<int>(ext.y / cell_) + 1;
  nz_ = static_cast<int>(ext.z / cell_) + 1;
  cells_.resize(static_cast<std::size_t>(nx_) * ny_ * nz_);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto &p = points_[i];
    const int ix = std::min(nx_ - 1, static_cast<int>((p.x - lo_.x) / cell_));
    const int iy = std::min(ny_ - 1, static_cast<int>((p.y - lo_.y) / cell_));
    const int iz = std::min(nz_ - 1, static_cast<int>((p.z - lo_.z) / cell_));
    cells_[(static_cast<std::size_t>(iz) * ny_ + iy) * nx_ + ix].push_back(static_cast<int>(i));
  }
}

double PointIndex::nearest_distance(const Vec3 &q) const {
  if (points_.empty()) throw Error("nearest neighbour query on an empty point set");
  // Start from the grid cell nearest the query; for a query outside the grid
  // the ring bound below still holds because cells only get farther inward.
  auto cell_of = [&](double v, double lo, int n) {
    return static_cast<int>(std::clamp(std::floor((v - lo) / cell_), 0.0, static_cast<double>(n - 1)));
  };
  const int cx = cell_of(q.x, lo_.x, nx_);
  const int cy = cell_of(q.y, lo_.y, ny_);
  const int cz = cell_of(q.z, lo_.z, nz_);
  double best2 = std::numeric_limits<double>::infinity();
  const int max_ring = std::max({nx_, ny_, nz_});
  for (int ring = 0; ring <= max_ring; ++ring) {
    // Every point in a cell at Chebyshev ring r is at least (r - 1) * cell away.
    if (ring > 0) {
      const double bound = (ring - 1) * cell_;
      if (bound * bound > best2) break;
    }
    for (int iz = cz - ring; iz <= cz + ring; ++iz) {
      if (iz < 0 || iz >= nz_) continue;
      for (int iy = cy - ring; iy <= cy + ring; ++iy) {
        if (iy < 0 || iy >= ny_) continue;
        for (int ix = cx - ring; ix <= cx + ring; ++ix) {
          if (ix < 0 || ix >= nx_) continue;
          if (std::max({std::abs(ix - cx), std::abs(iy - cy), std::abs(iz - cz)}) != ring) continue;
          for (int i : cells_[(static_cast<std::size_t>(iz) * ny_ + iy) * nx_ + ix]) {
            best2 = std::min(best2, distance_sq(points_[static_cast<std::size_t>(i)], q));
          }
        }
      }
    }
  }
  return std::sqrt(best2);
}

std::vector<double> nearest_distances(std::span<const Vec3> from, std::span<const Vec3> to) {
  if (from.empty() || to.empty()) throw Error("point set must not be empty");
  const PointIndex index(to);
  std::vector<double> d;
  d.reserve(from.size());
  for (const auto &p : from) d.push_back(index.nearest_distance(p));
  return d;
}

double error_percentile(std::span<const Vec3> recon, std::span<const Vec3> gt, double pct) {
  if (!(pct > 0.0 && pct <= 100.0)) throw Error("percentile must lie in (0, 100]");
  auto d = nearest_distances(recon, gt);
  std::sort(d.begin(), d.end());
  const auto n = static_cast<double>(d.size());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, d.size());
  return d[rank - 1];
}

double completeness(std::span<const Vec3> recon, std::span<const Vec3> gt, double d) {
  if (!(d > 0.0)) throw Error("completeness threshold must be positive");
  const auto dist = nearest_distances(gt, recon);
  const auto hit = std::count_if(dist.begin(), dist.end(), [&](double x) { return x < d; });
  return 100.0 * static_cast<double>(hit) / static_cast<double>(dist.size());
}

namespace {

std::vector<Vec3> dense_surface(const HullPrism &h, double spacing) {
  std::vector<Vec3> out;
  for (const auto &s : sample_prism_surface(h, spacing, 1.0, SemanticLabel::Unclassified)) out.push_back(s.position);
  return out;
}

}  // namespace

QualityReport evaluate_mission(const MissionResult &result, const Scene &t1, const Scene &t2,
                               const EvalOptions &opts) {
  QualityReport rep;
  rep.method = result.method;
  rep.n_views = static_cast<int>(result.views.size());
  rep.path_len_m = result.trajectory.length_m;
  rep.avg_nbv_time_s = average_nbv_time(result);

  const auto regions = diff_scenes(t1, t2);
  rep.gt_regions = static_cast<int>(regions.size());
  struct Pair {
    double iou;
    std::size_t t, g;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < result.targets.size(); ++t) {
    for (std::size_t g = 0; g < regions.size(); ++g) {
      const double iou = iou_prism(result.targets[t].hull, regions[g].as_hull());
      if (iou > 0.0) pairs.push_back({iou, t, g});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair &a, const Pair &b) { return a.iou > b.iou; });
  std::vector<int> match_of(result.targets.size(), -1);
  std::vector<double> iou_of(result.targets.size(), 0.0);
  std::vector<char> gt_used(regions.size(), 0);
  for (const auto &p : pairs) {
    if (match_of[p.t] >= 0 || gt_used[p.g]) continue;
    match_of[p.t] = static_cast<int>(p.g);
    iou_of[p.t] = p.iou;
    gt_used[p.g] = 1;
  }

  std::vector<Vec3> recon, gt;
  for (std::size_t t = 0; t < result.targets.size(); ++t) {
    rep.per_target_iou.push_back({result.targets[t].id, match_of[t], iou_of[t]});
    if (match_of[t] < 0) {
      ++rep.false_positives;
      continue;
    }
    auto r = dense_surface(result.targets[t].hull, opts.densify_spacing);
    recon.insert(recon.end(), r.begin(), r.end());
  }
  for (std::size_t g = 0; g < regions.size(); ++g) {
    if (!gt_used[g]) {
      ++rep.missed;
      continue;
    }
    auto s = dense_surface(regions[g].as_hull(), opts.densify_spacing);
    gt.insert(gt.end(), s.begin(), s.end());
  }

  if (!recon.empty() && !gt.empty()) {
    rep.error_p85 = error_percentile(recon, gt, 85.0);
    rep.error_p90 = error_percentile(recon, gt, 90.0);
    rep.error_p95 = error_percentile(recon, gt, 95.0);
    for (double d : opts.thresholds) rep.completeness_at[d] = completeness(recon, gt, d);
  }
  return rep;
}

}  // namespace updraft
