#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "updraft/change_oracle.hpp"
#include "updraft/config.hpp"
#include "updraft/metrics.hpp"
#include "updraft/prior_planner.hpp"
#include "updraft/realtime_planner.hpp"

namespace updraft {

std::string read_text(const std::filesystem::path &path);
/// Writes through a temporary file and renames it into place.
void write_text(const std::filesystem::path &path, std::string_view text);

/// Fields absent from the text keep their defaults; unknown fields are rejected.
PlannerConfig parse_config(std::string_view json_text);
PlannerConfig load_config(const std::filesystem::path &path);
std::string config_to_json(const PlannerConfig &cfg);

std::string plan_to_json(const PriorPlan &plan);

/// Step wall times are machine-dependent and only written with `timing`.
std::string results_to_json(const MissionResult &r, bool timing = false);
MissionResult parse_results(std::string_view json_text);

std::string report_to_json(const QualityReport &r);
QualityReport parse_report(std::string_view json_text);

/// Aligned plain-text table, one row per report.
std::string report_table(std::span<const QualityReport> reports);

}  // namespace updraft
