#pragma once

#include <filesystem>
#include <string>

#include "updraft/realtime_planner.hpp"
#include "updraft/scene.hpp"

namespace updraft {

/// Top-down SVG: second-epoch footprints in gray, ground-truth changes
/// outlined, the flight path with arrowheads, detected hulls filled, legend.
std::string render_svg(const MissionResult &result, const Scene &t1, const Scene &t2);
void render_svg(const MissionResult &result, const Scene &t1, const Scene &t2, const std::filesystem::path &out);

}  // namespace updraft
