#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "updraft/geometry.hpp"
#include "updraft/scene.hpp"
#include "updraft/views.hpp"
#include "updraft/visibility.hpp"

namespace fx {

using namespace updraft;

inline Prism box(const std::string &id, double x0, double z0, double x1, double z1, double base, double top,
                 SemanticLabel label = SemanticLabel::BuildingLow) {
  return {id, {{x0, z0}, {x1, z0}, {x1, z1}, {x0, z1}}, base, top, label};
}

inline Scene scene(double w, double d, std::vector<Prism> prisms = {}) {
  Scene s{{0.0, 0.0, w, d}, std::move(prisms)};
  validate_scene(s, 120.0);
  return s;
}

inline Sample ground_sample(double x, double z, double q = 0.5) {
  return {{x, 0.0, z}, {0.0, 1.0, 0.0}, q, SemanticLabel::Terrain, {}};
}

struct Rng {
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  std::mt19937_64 gen;
};

/// Random convex polygon: hull of points scattered on a disk.
inline Polygon random_convex(Rng &rng, double cx, double cz, double r, int n = 8) {
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) {
    const double a = rng.uniform(0.0, 2.0 * kPi);
    const double rr = r * std::sqrt(rng.uniform(0.1, 1.0));
    pts.push_back({cx + rr * std::cos(a), cz + rr * std::sin(a)});
  }
  return convex_hull_2d(pts);
}

/// Even-odd ray casting, independent of the convex-only library test.
inline bool point_in_polygon(const Polygon &poly, const Vec2 &p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 &a = poly[i], &b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

/// Random view on the safe-height plane above the square [0, w]^2.
inline View random_view(Rng &rng, ViewId id, double w, double h = 120.0) {
  const RigSlot slot = kRigSlots[static_cast<std::size_t>(rng.integer(0, 4))];
  return make_view(id, {rng.uniform(-20.0, w + 20.0), h, rng.uniform(-20.0, w + 20.0)}, slot, Camera{});
}

/// Random scene of a few non-overlapping-ish boxes.
inline Scene random_scene(Rng &rng, double w, int boxes) {
  std::vector<Prism> ps;
  for (int i = 0; i < boxes; ++i) {
    const double x = rng.uniform(0.0, w - 20.0), z = rng.uniform(0.0, w - 20.0);
    const double sx = rng.uniform(5.0, 20.0), sz = rng.uniform(5.0, 20.0);
    ps.push_back(box("b" + std::to_string(i), x, z, x + sx, z + sz, 0.0, rng.uniform(5.0, 50.0)));
  }
  return scene(w, w, ps);
}

}  // namespace fx
