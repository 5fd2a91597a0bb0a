#pragma once

#include <cstdint>

#include "updraft/change_oracle.hpp"
#include "updraft/config.hpp"
#include "updraft/realtime_planner.hpp"
#include "updraft/scene.hpp"

namespace updraft {

/// Grid-sweep exploration: the bounds are cut into ceil(1 / grid_frac) cells
/// per axis, visited boustrophedon at the safe height with the four tilted
/// rig views per cell. Detection runs through the same oracle and tracker as
/// the planner but nothing reacts to it.
MissionResult baseline_rd(const Scene &t1, const Scene &t2, double grid_frac, const PlannerConfig &cfg,
                          const OracleNoise &noise, std::uint64_t seed);

}  // namespace updraft
