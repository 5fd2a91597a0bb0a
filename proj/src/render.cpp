#include "updraft/render.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "updraft/io.hpp"

namespace updraft {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;
constexpr double kLegend = 170.0;

struct Frame {
  double min_x, min_z, scale;
  double x(double wx) const { return kMargin + (wx - min_x) * scale; }
  // Plan z grows downward on screen, matching a map with north at the bottom.
  double y(double wz) const { return kMargin + (wz - min_z) * scale; }
};

std::string points_attr(const Polygon &poly, const Frame &f) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (i) s << ' ';
    s << f.x(poly[i].x) << ',' << f.y(poly[i].y);
  }
  return s.str();
}

}  // namespace

std::string render_svg(const MissionResult &result, const Scene &t1, const Scene &t2) {
  const Rect &b = t2.bounds;
  double min_x = b.min_x, max_x = b.max_x, min_z = b.min_z, max_z = b.max_z;
  for (const auto &v : result.views) {
    min_x = std::min(min_x, v.position.x);
    max_x = std::max(max_x, v.position.x);
    min_z = std::min(min_z, v.position.z);
    max_z = std::max(max_z, v.position.z);
  }
  const double span = std::max({max_x - min_x, max_z - min_z, 1e-6});
  const Frame f{min_x, min_z, (kCanvas - 2 * kMargin) / span};
  const double width = kCanvas + kLegend;
  const double height = 2 * kMargin + (max_z - min_z) * f.scale;

  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  s << "  <defs>\n    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
       "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#1f5fbf\"/></marker>\n  </defs>\n";
  s << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  s << "  <polygon points=\"" << points_attr(b.polygon(), f) << "\" fill=\"#f4f1e8\" stroke=\"#999\"/>\n";

  s << "  <g id=\"scene\">\n";
  for (const auto &p : t2.prisms) {
    s << "    <polygon points=\"" << points_attr(p.footprint, f) << "\" fill=\"#bdbdbd\" stroke=\"#777\"/>\n";
  }
  s << "  </g>\n  <g id=\"changes\">\n";
  for (const auto &r : diff_scenes(t1, t2)) {
    s << "    <polygon points=\"" << points_attr(r.footprint, f)
      << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6,3\"/>\n";
  }
  s << "  </g>\n  <g id=\"targets\">\n";
  for (const auto &t : result.targets) {
    s << "    <polygon class=\"target\" points=\"" << points_attr(t.hull.footprint, f)
      << "\" fill=\"#2ca02c\" fill-opacity=\"0.45\" stroke=\"#1b7a1b\"/>\n";
  }
  s << "  </g>\n  <g id=\"trajectory\" stroke=\"#1f5fbf\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 1; i < result.views.size(); ++i) {
    const auto &a = result.views[i - 1].position;
    const auto &c = result.views[i].position;
    if (a.x == c.x && a.z == c.z) continue;
    s << "    <line x1=\"" << f.x(a.x) << "\" y1=\"" << f.y(a.z) << "\" x2=\"" << f.x(c.x) << "\" y2=\"" << f.y(c.z)
      << "\" marker-end=\"url(#arrow)\"/>\n";
  }
  s << "  </g>\n";
  if (!result.views.empty()) {
    const auto &p0 = result.views.front().position;
    s << "  <circle cx=\"" << f.x(p0.x) << "\" cy=\"" << f.y(p0.z) << "\" r=\"5\" fill=\"#1f5fbf\"/>\n";
  }

  const double lx = kCanvas + 10.0;
  s << "  <g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  auto entry = [&](double y, const std::string &swatch, const std::string &text) {
    s << "    " << swatch << "\n    <text x=\"" << lx + 26 << "\" y=\"" << y + 11 << "\">" << text << "</text>\n";
  };
  entry(kMargin, "<rect x=\"" + std::to_string(lx) + "\" y=\"" + std::to_string(kMargin) +
                     "\" width=\"18\" height=\"12\" fill=\"#bdbdbd\" stroke=\"#777\"/>",
        "scene");
  entry(kMargin + 22, "<rect x=\"" + std::to_string(lx) + "\" y=\"" + std::to_string(kMargin + 22) +
                          "\" width=\"18\" height=\"12\" fill=\"none\" stroke=\"#d62728\" stroke-dasharray=\"4,2\"/>",
        "true change");
  entry(kMargin + 44, "<rect x=\"" + std::to_string(lx) + "\" y=\"" + std::to_string(kMargin + 44) +
                          "\" width=\"18\" height=\"12\" fill=\"#2ca02c\" fill-opacity=\"0.45\"/>",
        "detected hull");
  entry(kMargin + 66, "<line x1=\"" + std::to_string(lx) + "\" y1=\"" + std::to_string(kMargin + 72) + "\" x2=\"" +
                          std::to_string(lx + 18) + "\" y2=\"" + std::to_string(kMargin + 72) +
                          "\" stroke=\"#1f5fbf\" stroke-width=\"1.5\"/>",
        "path (" + result.method + ")");
  s << "    <text x=\"" << lx << "\" y=\"" << kMargin + 108 << "\">" << result.views.size() << " views</text>\n";
  s << "    <text x=\"" << lx << "\" y=\"" << kMargin + 126 << "\">" << std::setprecision(1)
    << result.trajectory.length_m << " m</text>\n";
  s << "  </g>\n</svg>\n";
  return s.str();
}

void render_svg(const MissionResult &result, const Scene &t1, const Scene &t2, const std::filesystem::path &out) {
  write_text(out, render_svg(result, t1, t2));
}

}  // namespace updraft
