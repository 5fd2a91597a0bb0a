#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "updraft/geometry.hpp"
#include "updraft/vec.hpp"

namespace updraft {

using ViewId = int;

/// Semantic classes. The first eight are the default urban label set; the
/// remainder are extra land-cover classes a scene can opt into.
enum class SemanticLabel {
  Terrain,
  Vegetation,
  Water,
  Bridge,
  Vehicle,
  Boat,
  BuildingLow,
  BuildingHigh,
  Grassland,
  ArableLand,
  River,
  Excavation,
  BareSurface,
  Unclassified,
};

std::string_view to_string(SemanticLabel label);

/// Accepts every enumerator name plus the generic "Building", which maps to
/// BuildingLow until the height split is applied.
std::optional<SemanticLabel> label_from_string(std::string_view name);

/// Buildings taller than this are BuildingHigh.
inline constexpr double kHighBuildingThreshold = 40.0;

/// Per-label prior change probability.
class PriorTable {
 public:
  /// Default table covering the eight urban labels.
  static PriorTable urban();
  /// Default table plus every extra land-cover class.
  static PriorTable extended();

  /// Throws updraft::Error for a label with no entry.
  double probability(SemanticLabel label) const;
  bool contains(SemanticLabel label) const { return table_.contains(label); }
  /// Throws InvariantError if p is outside [0, 1].
  void set(SemanticLabel label, double p);
  const std::map<SemanticLabel, double> &entries() const { return table_; }

  /// Multiplies every entry by c (used by scaling experiments; may exceed 1).
  PriorTable scaled(double c) const;

  bool operator==(const PriorTable &) const = default;

 private:
  std::map<SemanticLabel, double> table_;
};

double prior_probability(SemanticLabel label, const PriorTable &table = PriorTable::urban());

struct Rect {
  double min_x = 0.0;
  double min_z = 0.0;
  double max_x = 0.0;
  double max_z = 0.0;

  double width() const { return max_x - min_x; }
  double depth() const { return max_z - min_z; }
  Polygon polygon() const {
    return {{min_x, min_z}, {max_x, min_z}, {max_x, max_z}, {min_x, max_z}};
  }
  bool operator==(const Rect &) const = default;
};

/// Convex CCW footprint (plan x, z) extruded between base and top heights.
struct Prism {
  std::string id;
  Polygon footprint;
  double base_height = 0.0;
  double top_height = 0.0;
  SemanticLabel label = SemanticLabel::BuildingLow;

  HullPrism as_hull() const { return {footprint, base_height, top_height}; }
  bool operator==(const Prism &) const = default;
};

/// Labelled 2.5D scene. The ground is the bounds rectangle at height 0 (Terrain).
struct Scene {
  Rect bounds;
  std::vector<Prism> prisms;

  bool operator==(const Scene &) const = default;
};

/// Validates every invariant and applies the building height split in place.
/// Throws InvariantError naming the offending prism.
void validate_scene(Scene &scene, double safe_height);

Scene parse_scene(std::string_view json_text, double safe_height = 120.0);
/// Throws ParseError (with field path) or InvariantError.
Scene load_scene(const std::filesystem::path &path, double safe_height = 120.0);
std::string scene_to_json(const Scene &scene);
void save_scene(const Scene &scene, const std::filesystem::path &path);

struct Sample {
  Vec3 position;
  Vec3 normal;
  double q = 0.0;
  SemanticLabel label = SemanticLabel::Terrain;
  std::vector<ViewId> observers;
};

/// Discretises ground, prism tops and prism walls on a grid no coarser than
/// `spacing`. Ground samples inside ground-standing prisms are omitted.
/// Deterministic: output order depends only on the scene and spacing.
std::vector<Sample> sample_surface(const Scene &scene, double spacing,
                                   const PriorTable &priors = PriorTable::urban());

/// Top and side surfaces of a prism-like volume, all carrying the same q.
std::vector<Sample> sample_prism_surface(const HullPrism &prism, double spacing, double q,
                                         SemanticLabel label);

/// Ground-truth change regions between two epochs. Prisms equal in both
/// epochs are unchanged; a prism that only moved or was resized becomes one
/// region spanning both versions.
std::vector<Prism> diff_scenes(const Scene &t1, const Scene &t2);

}  // namespace updraft
