#include "updraft/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "updraft/error.hpp"

namespace updraft {

using nlohmann::json;

namespace {

constexpr std::array kLabelNames{
    std::pair{SemanticLabel::Terrain, "Terrain"},
    std::pair{SemanticLabel::Vegetation, "Vegetation"},
    std::pair{SemanticLabel::Water, "Water"},
    std::pair{SemanticLabel::Bridge, "Bridge"},
    std::pair{SemanticLabel::Vehicle, "Vehicle"},
    std::pair{SemanticLabel::Boat, "Boat"},
    std::pair{SemanticLabel::BuildingLow, "BuildingLow"},
    std::pair{SemanticLabel::BuildingHigh, "BuildingHigh"},
    std::pair{SemanticLabel::Grassland, "Grassland"},
    std::pair{SemanticLabel::ArableLand, "ArableLand"},
    std::pair{SemanticLabel::River, "River"},
    std::pair{SemanticLabel::Excavation, "Excavation"},
    std::pair{SemanticLabel::BareSurface, "BareSurface"},
    std::pair{SemanticLabel::Unclassified, "Unclassified"},
};

bool is_building(SemanticLabel l) {
  return l == SemanticLabel::BuildingLow || l == SemanticLabel::BuildingHigh;
}

}  // namespace

std::string_view to_string(SemanticLabel label) {
  for (const auto &[l, name] : kLabelNames) {
    if (l == label) return name;
  }
  return "Unknown";
}

std::optional<SemanticLabel> label_from_string(std::string_view name) {
  if (name == "Building") return SemanticLabel::BuildingLow;
  for (const auto &[l, n] : kLabelNames) {
    if (name == n) return l;
  }
  return std::nullopt;
}

// Change rates per land-cover class, mapped onto the urban labels:
// Road -> Terrain/Vehicle, Woodland -> Vegetation, Lake -> Water/Boat,
// Structure -> Bridge, low/high building split at 40 m.
PriorTable PriorTable::urban() {
  PriorTable t;
  t.table_ = {
      {SemanticLabel::Terrain, 0.017833558},     {SemanticLabel::Vehicle, 0.017833558},
      {SemanticLabel::BuildingLow, 0.075458861}, {SemanticLabel::BuildingHigh, 0.018068121},
      {SemanticLabel::Vegetation, 0.041211502},  {SemanticLabel::Water, 0.002392529},
      {SemanticLabel::Boat, 0.002392529},        {SemanticLabel::Bridge, 0.059790134},
  };
  return t;
}

PriorTable PriorTable::extended() {
  PriorTable t = urban();
  t.table_.insert({
      {SemanticLabel::ArableLand, 0.0},
      {SemanticLabel::Grassland, 0.262180652},
      {SemanticLabel::River, 2.37656e-05},
      {SemanticLabel::Excavation, 0.278449149},
      {SemanticLabel::BareSurface, 0.496139114},
      {SemanticLabel::Unclassified, 0.0},
  });
  return t;
}

double PriorTable::probability(SemanticLabel label) const {
  const auto it = table_.find(label);
  if (it == table_.end()) {
    throw Error("no prior probability for label " + std::string(to_string(label)));
  }
  return it->second;
}

void PriorTable::set(SemanticLabel label, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvariantError("prior probability for " + std::string(to_string(label)) +
                         " must lie in [0, 1]");
  }
  table_[label] = p;
}

PriorTable PriorTable::scaled(double c) const {
  PriorTable t;
  for (const auto &[label, p] : table_) t.table_[label] = p * c;
  return t;
}

double prior_probability(SemanticLabel label, const PriorTable &table) {
  return table.probability(label);
}

void validate_scene(Scene &scene, double safe_height) {
  const Rect &b = scene.bounds;
  if (!(b.max_x > b.min_x && b.max_z > b.min_z)) {
    throw InvariantError("scene bounds are empty");
  }
  for (std::size_t i = 0; i < scene.prisms.size(); ++i) {
    Prism &p = scene.prisms[i];
    const std::string who =
        "prism " + std::to_string(i) + (p.id.empty() ? "" : " (" + p.id + ")");
    if (p.footprint.size() < 3) throw InvariantError(who + ": footprint needs >= 3 vertices");
    if (signed_area(p.footprint) < 0.0) std::reverse(p.footprint.begin(), p.footprint.end());
    if (polygon_area(p.footprint) <= 1e-9) {
      throw InvariantError(who + ": footprint vertices are collinear");
    }
    if (!is_convex_ccw(p.footprint)) throw InvariantError(who + ": footprint not convex");
    if (!(p.base_height >= 0.0)) throw InvariantError(who + ": base height must be >= 0");
    if (!(p.top_height > p.base_height)) {
      throw InvariantError(who + ": top height must exceed base height");
    }
    if (p.top_height > safe_height) {
      throw InvariantError(who + ": top height exceeds the safe-height plane");
    }
    for (const auto &v : p.footprint) {
      if (v.x < b.min_x - 1e-9 || v.x > b.max_x + 1e-9 || v.y < b.min_z - 1e-9 ||
          v.y > b.max_z + 1e-9) {
        throw InvariantError(who + ": footprint leaves the scene bounds");
      }
    }
    if (is_building(p.label)) {
      p.label = p.top_height > kHighBuildingThreshold ? SemanticLabel::BuildingHigh
                                                      : SemanticLabel::BuildingLow;
    }
  }
}

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number_at(const json &obj, const char *key, const std::string &where) {
  if (!obj.contains(key)) throw ParseError(where + "." + key + ": missing");
  const json &v = obj.at(key);
  if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

Vec2 point_at(const json &v, const std::string &where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(where + ": expected [x, z]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

Scene parse_scene(std::string_view json_text, double safe_height) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error &e) {
    throw ParseError("scene: malformed JSON at " + line_col(json_text, e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("scene: top level must be an object");

  Scene scene;
  if (!doc.contains("bounds")) throw ParseError("bounds: missing");
  const json &b = doc.at("bounds");
  if (!b.is_array() || b.size() != 2) throw ParseError("bounds: expected [[min_x, min_z], [max_x, max_z]]");
  const Vec2 lo = point_at(b[0], "bounds[0]");
  const Vec2 hi = point_at(b[1], "bounds[1]");
  scene.bounds = {lo.x, lo.y, hi.x, hi.y};

  if (doc.contains("prisms")) {
    const json &ps = doc.at("prisms");
    if (!ps.is_array()) throw ParseError("prisms: expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string where = "prisms[" + std::to_string(i) + "]";
      const json &pj = ps[i];
      if (!pj.is_object()) throw ParseError(where + ": expected an object");
      Prism p;
      if (pj.contains("id")) {
        if (!pj.at("id").is_string()) throw ParseError(where + ".id: expected a string");
        p.id = pj.at("id").get<std::string>();
      }
      if (!pj.contains("footprint") || !pj.at("footprint").is_array()) {
        throw ParseError(where + ".footprint: expected an array of [x, z]");
      }
      const json &fp = pj.at("footprint");
      for (std::size_t k = 0; k < fp.size(); ++k) {
        p.footprint.push_back(point_at(fp[k], where + ".footprint[" + std::to_string(k) + "]"));
      }
      p.base_height = pj.contains("base") ? number_at(pj, "base", where) : 0.0;
      p.top_height = number_at(pj, "top", where);
      if (!pj.contains("label") || !pj.at("label").is_string()) {
        throw ParseError(where + ".label: expected a string");
      }
      const auto label = label_from_string(pj.at("label").get<std::string>());
      if (!label) throw ParseError(where + ".label: unknown label '" + pj.at("label").get<std::string>() + "'");
      p.label = *label;
      scene.prisms.push_back(std::move(p));
    }
  }
  validate_scene(scene, safe_height);
  return scene;
}

Scene load_scene(const std::filesystem::path &path, double safe_height) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scene(buf.str(), safe_height);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const InvariantError &e) {
    throw InvariantError(path.string() + ": " + e.what());
  }
}

std::string scene_to_json(const Scene &scene) {
  json doc;
  doc["bounds"] = {{scene.bounds.min_x, scene.bounds.min_z}, {scene.bounds.max_x, scene.bounds.max_z}};
  doc["prisms"] = json::array();
  for (const auto &p : scene.prisms) {
    json pj;
    if (!p.id.empty()) pj["id"] = p.id;
    pj["footprint"] = json::array();
    for (const auto &v : p.footprint) pj["footprint"].push_back({v.x, v.y});
    pj["base"] = p.base_height;
    pj["top"] = p.top_height;
    pj["label"] = std::string(to_string(p.label));
    doc["prisms"].push_back(std::move(pj));
  }
  return doc.dump(2);
}

void save_scene(const Scene &scene, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << scene_to_json(scene) << '\n';
}

namespace {

// Points covering a convex polygon: boundary at <= spacing plus an aligned interior grid.
std::vector<Vec2> sample_polygon(std::span<const Vec2> poly, double spacing) {
  std::vector<Vec2> pts;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &a = poly[i];
    const Vec2 &b = poly[(i + 1) % n];
    const int segs = std::max(1, static_cast<int>(std::ceil(distance(a, b) / spacing - 1e-9)));
    for (int k = 0; k < segs; ++k) pts.push_back(a + (b - a) * (static_cast<double>(k) / segs));
  }
  double min_x = poly[0].x, max_x = poly[0].x, min_y = poly[0].y, max_y = poly[0].y;
  for (const auto &p : poly) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  for (double y = min_y + spacing; y < max_y; y += spacing) {
    for (double x = min_x + spacing; x < max_x; x += spacing) {
      if (strictly_contains(poly, {x, y}, 1e-6)) pts.push_back({x, y});
    }
  }
  return pts;
}

}  // namespace

std::vector<Sample> sample_prism_surface(const HullPrism &prism, double spacing, double q,
                                         SemanticLabel label) {
  std::vector<Sample> out;
  const auto &fp = prism.footprint;
  for (const auto &p : sample_polygon(fp, spacing)) {
    out.push_back({{p.x, prism.top_height, p.y}, {0.0, 1.0, 0.0}, q, label, {}});
  }
  const double height = prism.top_height - prism.base_height;
  if (height <= 0.0) return out;
  const int rows = std::max(1, static_cast<int>(std::ceil(height / spacing - 1e-9)));
  const std::size_t n = fp.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &a = fp[i];
    const Vec2 &b = fp[(i + 1) % n];
    const Vec2 e = b - a;
    const double len = norm(e);
    if (len <= 1e-12) continue;
    const Vec3 normal{e.y / len, 0.0, -e.x / len};
    const int cols = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-9)));
    for (int r = 0; r <= rows; ++r) {
      const double y = prism.base_height + height * r / rows;
      for (int c = 0; c <= cols; ++c) {
        const Vec2 p = a + e * (static_cast<double>(c) / cols);
        out.push_back({{p.x, y, p.y}, normal, q, label, {}});
      }
    }
  }
  return out;
}

std::vector<Sample> sample_surface(const Scene &scene, double spacing, const PriorTable &priors) {
  std::vector<Sample> out;
  if (!(spacing > 0.0)) throw Error("sample spacing must be positive");

  const Rect &b = scene.bounds;
  const int nx = static_cast<int>(std::ceil(b.width() / spacing - 1e-9)) + 1;
  const int nz = static_cast<int>(std::ceil(b.depth() / spacing - 1e-9)) + 1;
  const double q_ground = priors.probability(SemanticLabel::Terrain);
  for (int iz = 0; iz < nz; ++iz) {
    const double z = nz > 1 ? b.min_z + b.depth() * iz / (nz - 1) : b.min_z;
    for (int ix = 0; ix < nx; ++ix) {
      const double x = nx > 1 ? b.min_x + b.width() * ix / (nx - 1) : b.min_x;
      const Vec2 p{x, z};
      const bool covered = std::any_of(scene.prisms.begin(), scene.prisms.end(), [&](const Prism &pr) {
        return pr.base_height <= 1e-9 && strictly_contains(pr.footprint, p, 1e-6);
      });
      if (!covered) out.push_back({{x, 0.0, z}, {0.0, 1.0, 0.0}, q_ground, SemanticLabel::Terrain, {}});
    }
  }
  for (const auto &pr : scene.prisms) {
    auto faces = sample_prism_surface(pr.as_hull(), spacing, priors.probability(pr.label), pr.label);
    out.insert(out.end(), std::make_move_iterator(faces.begin()), std::make_move_iterator(faces.end()));
  }
  return out;
}

namespace {

bool same_geometry(const Prism &a, const Prism &b) {
  constexpr double tol = 1e-6;
  if (a.footprint.size() != b.footprint.size()) return false;
  if (std::abs(a.base_height - b.base_height) > tol || std::abs(a.top_height - b.top_height) > tol) {
    return false;
  }
  const std::size_t n = a.footprint.size();
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool all = true;
    for (std::size_t i = 0; i < n && all; ++i) {
      all = distance(a.footprint[i], b.footprint[(i + shift) % n]) <= tol;
    }
    if (all) return true;
  }
  return false;
}

bool related(const Prism &a, const Prism &b) {
  if (!a.id.empty() && a.id == b.id) return true;
  const Polygon inter = clip_convex(a.footprint, b.footprint);
  return inter.size() >= 3 && polygon_area(inter) > 1e-9;
}

}  // namespace

std::vector<Prism> diff_scenes(const Scene &t1, const Scene &t2) {
  if (!(t1.bounds == t2.bounds)) throw Error("scene bounds differ between epochs");

  std::vector<bool> matched2(t2.prisms.size(), false);
  std::vector<const Prism *> changed;
  std::vector<int> epoch;  // 1 or 2, parallel to `changed`
  for (const auto &p : t1.prisms) {
    bool found = false;
    for (std::size_t j = 0; j < t2.prisms.size() && !found; ++j) {
      if (!matched2[j] && same_geometry(p, t2.prisms[j])) {
        matched2[j] = true;
        found = true;
      }
    }
    if (!found) {
      changed.push_back(&p);
      epoch.push_back(1);
    }
  }
  for (std::size_t j = 0; j < t2.prisms.size(); ++j) {
    if (!matched2[j]) {
      changed.push_back(&t2.prisms[j]);
      epoch.push_back(2);
    }
  }

  // Union-find over cross-epoch relations: one region per modified object.
  std::vector<std::size_t> parent(changed.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < changed.size(); ++i) {
    for (std::size_t j = i + 1; j < changed.size(); ++j) {
      if (epoch[i] != epoch[j] && related(*changed[i], *changed[j])) {
        parent[find(j)] = find(i);
      }
    }
  }

  std::vector<Prism> regions;
  std::vector<bool> done(changed.size(), false);
  for (std::size_t i = 0; i < changed.size(); ++i) {
    const std::size_t root = find(i);
    if (done[root]) continue;
    done[root] = true;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < changed.size(); ++j) {
      if (find(j) == root) members.push_back(j);
    }
    if (members.size() == 1) {
      regions.push_back(*changed[members[0]]);
      continue;
    }
    Prism region;
    std::vector<Vec2> corners;
    region.base_height = changed[members[0]]->base_height;
    region.top_height = changed[members[0]]->top_height;
    for (std::size_t m : members) {
      const Prism &p = *changed[m];
      corners.insert(corners.end(), p.footprint.begin(), p.footprint.end());
      region.base_height = std::min(region.base_height, p.base_height);
      region.top_height = std::max(region.top_height, p.top_height);
      if (epoch[m] == 2 || region.id.empty()) {
        region.label = p.label;
        region.id = p.id;
      }
    }
    region.footprint = convex_hull_2d(corners);
    regions.push_back(std::move(region));
  }
  return regions;
}

}  // namespace updraft
