#include "updraft/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace updraft {

Occluders::Occluders(std::span<const Prism> prisms) {
  hulls_.reserve(prisms.size());
  boxes_.reserve(prisms.size());
  for (const auto &p : prisms) {
    hulls_.push_back(p.as_hull());
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto &v : p.footprint) {
      b.min_x = std::min(b.min_x, v.x);
      b.min_z = std::min(b.min_z, v.y);
      b.max_x = std::max(b.max_x, v.x);
      b.max_z = std::max(b.max_z, v.y);
    }
    boxes_.push_back(b);
  }
}

bool Occluders::blocked(const Vec3 &eye, const Vec3 &target) const {
  const double len = distance(eye, target);
  if (len <= kSelfContactTolerance) return false;
  const double lo_x = std::min(eye.x, target.x), hi_x = std::max(eye.x, target.x);
  const double lo_z = std::min(eye.z, target.z), hi_z = std::max(eye.z, target.z);
  const double lo_y = std::min(eye.y, target.y);
  for (std::size_t i = 0; i < hulls_.size(); ++i) {
    const Box &b = boxes_[i];
    const HullPrism &h = hulls_[i];
    if (b.max_x < lo_x || b.min_x > hi_x || b.max_z < lo_z || b.min_z > hi_z) continue;
    if (h.top_height < lo_y) continue;
    double t0 = 0.0, t1 = 0.0;
    if (!clip_segment_to_prism(eye, target, h.footprint, h.base_height, h.top_height, t0, t1)) {
      continue;
    }
    // Ignore tangential grazes and the final contact with the sample's own face.
    if ((t1 - t0) * len > kSelfContactTolerance && t0 * len < len - kSelfContactTolerance) {
      return true;
    }
  }
  return false;
}

int visible(const Vec3 &position, const Vec3 &normal, const View &view,
            const Occluders &occluders) {
  if (dot(normal, view.position - position) <= 0.0) return 0;
  if (!in_frustum(frustum_of(view), position)) return 0;
  return occluders.blocked(view.position, position) ? 0 : 1;
}

int visible(const Sample &sample, const View &view, const Occluders &occluders) {
  return visible(sample.position, sample.normal, view, occluders);
}

int visible(const Sample &sample, const View &view, const Scene &scene) {
  return visible(sample, view, Occluders(scene));
}

VisibilityEngine::VisibilityEngine(std::span<const Sample> samples, Occluders occluders,
                                   double cell)
    : occluders_(std::move(occluders)), cell_(cell) {
  positions_.reserve(samples.size());
  normals_.reserve(samples.size());
  double max_x = 0.0, max_z = 0.0;
  if (!samples.empty()) {
    min_x_ = max_x = samples[0].position.x;
    min_z_ = max_z = samples[0].position.z;
    min_y_ = samples[0].position.y;
  }
  for (const auto &s : samples) {
    positions_.push_back(s.position);
    normals_.push_back(s.normal);
    min_x_ = std::min(min_x_, s.position.x);
    min_z_ = std::min(min_z_, s.position.z);
    min_y_ = std::min(min_y_, s.position.y);
    max_x = std::max(max_x, s.position.x);
    max_z = std::max(max_z, s.position.z);
  }
  nx_ = static_cast<int>(std::floor((max_x - min_x_) / cell_)) + 1;
  nz_ = static_cast<int>(std::floor((max_z - min_z_) / cell_)) + 1;
  buckets_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(nz_));
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const int ix = static_cast<int>((positions_[i].x - min_x_) / cell_);
    const int iz = static_cast<int>((positions_[i].z - min_z_) / cell_);
    buckets_[static_cast<std::size_t>(iz) * nx_ + ix].push_back(static_cast<int>(i));
  }
}

std::vector<int> VisibilityEngine::visible_from(const View &view) const {
  std::vector<int> out;
  if (positions_.empty()) return out;
  const Frustum f = frustum_of(view);

  // Plan bounding box of the frustum between the apex and the lowest sample plane.
  const double lo_y = min_y_;
  const double th = f.tan_horizontal;
  const double tv = f.tan_vertical;
  double bx0 = f.apex.x - f.far, bx1 = f.apex.x + f.far;
  double bz0 = f.apex.z - f.far, bz1 = f.apex.z + f.far;
  bool all_down = true;
  double cx0 = f.apex.x, cx1 = f.apex.x, cz0 = f.apex.z, cz1 = f.apex.z;
  for (int sh : {-1, 1}) {
    for (int sv : {-1, 1}) {
      const Vec3 c = f.direction + f.horizontal_axis * (sh * th) + f.vertical_axis * (sv * tv);
      if (c.y >= -1e-9) {
        all_down = false;
        continue;
      }
      const double t = (lo_y - f.apex.y) / c.y;
      const Vec3 g = f.apex + c * t;
      cx0 = std::min(cx0, g.x);
      cx1 = std::max(cx1, g.x);
      cz0 = std::min(cz0, g.z);
      cz1 = std::max(cz1, g.z);
    }
  }
  if (all_down) {
    bx0 = std::max(bx0, cx0);
    bx1 = std::min(bx1, cx1);
    bz0 = std::max(bz0, cz0);
    bz1 = std::min(bz1, cz1);
  }

  const int ix0 = std::max(0, static_cast<int>(std::floor((bx0 - min_x_) / cell_)));
  const int ix1 = std::min(nx_ - 1, static_cast<int>(std::floor((bx1 - min_x_) / cell_)));
  const int iz0 = std::max(0, static_cast<int>(std::floor((bz0 - min_z_) / cell_)));
  const int iz1 = std::min(nz_ - 1, static_cast<int>(std::floor((bz1 - min_z_) / cell_)));
  for (int iz = iz0; iz <= iz1; ++iz) {
    for (int ix = ix0; ix <= ix1; ++ix) {
      for (int i : buckets_[static_cast<std::size_t>(iz) * nx_ + ix]) {
        const Vec3 &p = positions_[static_cast<std::size_t>(i)];
        if (dot(normals_[static_cast<std::size_t>(i)], view.position - p) <= 0.0) continue;
        if (!in_frustum(f, p)) continue;
        if (occluders_.blocked(view.position, p)) continue;
        out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

VisibilityTable build_visibility(std::span<const View> views, const VisibilityEngine &engine) {
  VisibilityTable t;
  t.by_view.resize(views.size());
  t.by_sample.resize(engine.sample_count());
  for (std::size_t v = 0; v < views.size(); ++v) {
    t.by_view[v] = engine.visible_from(views[v]);
    for (int s : t.by_view[v]) t.by_sample[static_cast<std::size_t>(s)].push_back(static_cast<int>(v));
  }
  return t;
}

VisibilityTable build_visibility(std::span<const View> views, std::span<const Sample> samples,
                                 const Scene &scene) {
  return build_visibility(views, VisibilityEngine(samples, Occluders(scene)));
}

}  // namespace updraft
