#include "updraft/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "updraft/error.hpp"

namespace updraft {

double signed_area(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(poly[i], poly[(i + 1) % n]);
  }
  return 0.5 * twice;
}

double polygon_area(std::span<const Vec2> poly) { return std::abs(signed_area(poly)); }

Vec2 polygon_centroid(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  const double a = signed_area(poly);
  if (n == 0) return {};
  if (std::abs(a) < 1e-12) {
    Vec2 c;
    for (const auto &p : poly) c = c + p;
    return c * (1.0 / static_cast<double>(n));
  }
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &p = poly[i];
    const Vec2 &q = poly[(i + 1) % n];
    const double w = cross(p, q);
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

bool is_convex_ccw(std::span<const Vec2> poly, double tol) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  if (signed_area(poly) <= tol) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &a = poly[i];
    const Vec2 &b = poly[(i + 1) % n];
    const Vec2 &c = poly[(i + 2) % n];
    if (cross(b - a, c - b) < -tol) return false;
  }
  // A CCW polygon with all left turns may still wind more than once.
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = poly[(i + 1) % n] - poly[i];
    const Vec2 e1 = poly[(i + 2) % n] - poly[(i + 1) % n];
    turning += std::atan2(cross(e0, e1), dot(e0, e1));
  }
  return std::abs(turning - 2.0 * kPi) < 1e-6;
}

namespace {

// Signed distance of p to the left of the directed edge a->b (positive = inside for CCW).
double edge_side(const Vec2 &a, const Vec2 &b, const Vec2 &p) {
  const Vec2 e = b - a;
  const double len = norm(e);
  if (len == 0.0) return std::numeric_limits<double>::infinity();
  return cross(e, p - a) / len;
}

}  // namespace

bool contains(std::span<const Vec2> poly, const Vec2 &p, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (edge_side(poly[i], poly[(i + 1) % n], p) < -tol) return false;
  }
  return n >= 3;
}

bool strictly_contains(std::span<const Vec2> poly, const Vec2 &p, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (edge_side(poly[i], poly[(i + 1) % n], p) <= tol) return false;
  }
  return n >= 3;
}

double distance_to_polygon(std::span<const Vec2> poly, const Vec2 &p) {
  if (contains(poly, p, 0.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &a = poly[i];
    const Vec2 &b = poly[(i + 1) % n];
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, distance(p, a + ab * t));
  }
  return best;
}

Polygon convex_hull_2d(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2 &a, const Vec2 &b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw Error("degenerate hull");

  Polygon hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto &p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2 &p = pts[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 3 || polygon_area(hull) <= 1e-12) throw Error("degenerate hull");
  return hull;
}

bool has_planar_extent(std::span<const Vec2> points) {
  if (points.size() < 3) return false;
  try {
    return polygon_area(convex_hull_2d(points)) > 1e-9;
  } catch (const Error &) {
    return false;
  }
}

Polygon clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip) {
  Polygon output(subject.begin(), subject.end());
  const std::size_t n = clip.size();
  for (std::size_t i = 0; i < n && !output.empty(); ++i) {
    const Vec2 &a = clip[i];
    const Vec2 &b = clip[(i + 1) % n];
    const Vec2 e = b - a;
    Polygon input;
    input.swap(output);
    const std::size_t m = input.size();
    for (std::size_t j = 0; j < m; ++j) {
      const Vec2 &cur = input[j];
      const Vec2 &prev = input[(j + m - 1) % m];
      const double dc = cross(e, cur - a);
      const double dp = cross(e, prev - a);
      if (dc >= 0.0) {
        if (dp < 0.0) output.push_back(prev + (cur - prev) * (dp / (dp - dc)));
        output.push_back(cur);
      } else if (dp >= 0.0) {
        output.push_back(prev + (cur - prev) * (dp / (dp - dc)));
      }
    }
  }
  return output;
}

Polygon dilate_convex(std::span<const Vec2> poly, double radius, int segments) {
  if (radius <= 0.0) return Polygon(poly.begin(), poly.end());
  std::vector<Vec2> cloud;
  cloud.reserve(poly.size() * static_cast<std::size_t>(segments));
  for (const auto &v : poly) {
    for (int k = 0; k < segments; ++k) {
      const double theta = 2.0 * kPi * k / segments;
      cloud.push_back(v + Vec2{std::cos(theta), std::sin(theta)} * radius);
    }
  }
  return convex_hull_2d(cloud);
}

HullPrism hull_prism_of(std::span<const Vec3> points) {
  std::vector<Vec2> plan;
  plan.reserve(points.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto &p : points) {
    plan.push_back(plan_of(p));
    lo = std::min(lo, p.y);
    hi = std::max(hi, p.y);
  }
  HullPrism out;
  out.footprint = convex_hull_2d(plan);
  out.base_height = lo;
  out.top_height = hi;
  return out;
}

double prism_volume(const HullPrism &p) {
  return polygon_area(p.footprint) * std::max(0.0, p.top_height - p.base_height);
}

double iou_prism(const HullPrism &a, const HullPrism &b) {
  const double area_a = polygon_area(a.footprint);
  const double area_b = polygon_area(b.footprint);
  const Polygon inter = clip_convex(a.footprint, b.footprint);
  const double area_i = inter.size() >= 3 ? polygon_area(inter) : 0.0;

  const double ha = std::max(0.0, a.top_height - a.base_height);
  const double hb = std::max(0.0, b.top_height - b.base_height);
  const double overlap =
      std::max(0.0, std::min(a.top_height, b.top_height) - std::max(a.base_height, b.base_height));

  const double vol_i = area_i * overlap;
  const double vol_u = area_a * ha + area_b * hb - vol_i;
  if (vol_u > 1e-12) return std::clamp(vol_i / vol_u, 0.0, 1.0);

  // Both flat (or empty): compare footprints when they sit at the same height.
  if (ha == 0.0 && hb == 0.0 && std::abs(a.top_height - b.top_height) <= 1e-9) {
    const double area_u = area_a + area_b - area_i;
    return area_u > 1e-12 ? std::clamp(area_i / area_u, 0.0, 1.0) : 0.0;
  }
  return 0.0;
}

std::vector<Vec2> poisson_disk(std::span<const Vec2> region, double radius, std::uint64_t seed) {
  std::vector<Vec2> out;
  if (region.size() < 3 || radius <= 0.0) return out;

  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (const auto &p : region) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }

  const double cell = radius / std::sqrt(2.0);
  const int nx = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / cell)) + 1);
  const int ny = std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) / cell)) + 1);
  std::vector<int> grid(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), -1);
  const double r2 = radius * radius;

  auto cell_of = [&](const Vec2 &p) {
    const int ix = std::clamp(static_cast<int>((p.x - lo.x) / cell), 0, nx - 1);
    const int iy = std::clamp(static_cast<int>((p.y - lo.y) / cell), 0, ny - 1);
    return std::pair{ix, iy};
  };
  auto free_at = [&](const Vec2 &p) {
    const auto [ix, iy] = cell_of(p);
    for (int y = std::max(0, iy - 2); y <= std::min(ny - 1, iy + 2); ++y) {
      for (int x = std::max(0, ix - 2); x <= std::min(nx - 1, ix + 2); ++x) {
        const int idx = grid[static_cast<std::size_t>(y) * nx + x];
        if (idx >= 0) {
          const Vec2 d = out[static_cast<std::size_t>(idx)] - p;
          if (dot(d, d) < r2) return false;
        }
      }
    }
    return true;
  };
  auto insert = [&](const Vec2 &p) {
    const auto [ix, iy] = cell_of(p);
    grid[static_cast<std::size_t>(iy) * nx + ix] = static_cast<int>(out.size());
    out.push_back(p);
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kAttempts = 30;

  insert(polygon_centroid(region));
  std::vector<std::size_t> active{0};
  while (!active.empty()) {
    const std::size_t pick = static_cast<std::size_t>(unit(rng) * static_cast<double>(active.size())) %
                             active.size();
    const Vec2 center = out[active[pick]];
    bool found = false;
    for (int k = 0; k < kAttempts; ++k) {
      const double rr = radius * std::sqrt(1.0 + 3.0 * unit(rng));  // uniform in the annulus [r, 2r]
      const double theta = 2.0 * kPi * unit(rng);
      const Vec2 cand = center + Vec2{std::cos(theta), std::sin(theta)} * rr;
      if (!contains(region, cand, 0.0) || !free_at(cand)) continue;
      active.push_back(out.size());
      insert(cand);
      found = true;
      break;
    }
    if (!found) {
      active[pick] = active.back();
      active.pop_back();
    }
  }

  // Fill pass: any lattice point still farther than `radius` from every sample is added.
  const double step = radius / 8.0;
  for (double y = lo.y; y <= hi.y + 1e-12; y += step) {
    for (double x = lo.x; x <= hi.x + 1e-12; x += step) {
      const Vec2 p{x, y};
      if (contains(region, p, 0.0) && free_at(p)) insert(p);
    }
  }
  return out;
}

bool clip_segment_to_prism(const Vec3 &a, const Vec3 &b, std::span<const Vec2> footprint,
                           double base_height, double top_height, double &t_enter,
                           double &t_exit) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Vec3 d = b - a;

  // Each constraint is f(t) = f0 + t * df >= 0.
  auto clip = [&](double f0, double df) {
    if (df == 0.0) return f0 >= 0.0;
    const double t = -f0 / df;
    if (df > 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    return t0 <= t1;
  };

  if (!clip(a.y - base_height, d.y)) return false;
  if (!clip(top_height - a.y, -d.y)) return false;
  const Vec2 pa = plan_of(a);
  const Vec2 pd{d.x, d.z};
  const std::size_t n = footprint.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &v = footprint[i];
    const Vec2 e = footprint[(i + 1) % n] - v;
    if (!clip(cross(e, pa - v), cross(e, pd))) return false;
  }
  t_enter = t0;
  t_exit = t1;
  return true;
}

}  // namespace updraft
