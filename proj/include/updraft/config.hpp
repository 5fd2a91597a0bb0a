#pragma once

#include <cstdint>
#include <optional>

#include "updraft/changeability.hpp"
#include "updraft/scene.hpp"
#include "updraft/views.hpp"

namespace updraft {

/// Sample set scored by the real-time gain.
enum class GainSamples {
  PriorAndTarget,  ///< every prior sample plus the target surface
  TargetOnly,      ///< the target surface alone
};

/// Every tunable of the planners. Angles are kept in degrees, as written in
/// config files, and converted to radians where geometry uses them.
struct PlannerConfig {
  double h = 120.0;  ///< safe flight height
  double omega = 3.0;
  double gamma = 2.0;
  double beta_prior = 3.0;
  double phi = 0.3;  ///< merge IoU threshold
  int K = 10;
  double prior_radius_m = 15.0;
  double realtime_radius_m = 5.0;
  double alpha_deg = 25.0;
  double beta_deg = 30.0;
  /// Extra pad distance; unset means "the Poisson radius of the stage".
  std::optional<double> d_pad;
  double sample_spacing_m = 10.0;
  double target_spacing_m = 5.0;
  double cluster_gap_m = 25.0;
  double tau = 0.05;
  std::uint64_t seed = 0;

  int window = 8;
  double regen_iou = 0.95;
  int max_nbv_per_target = 60;
  bool merge_always_union = false;
  GainScope gain_scope = GainScope::AllSamples;
  GainSamples gain_samples = GainSamples::PriorAndTarget;
  double camera_horizontal_half_fov_deg = 35.0;
  double camera_vertical_half_fov_deg = 25.0;
  double camera_far_m = 360.0;
  PriorTable priors = PriorTable::urban();

  /// Throws InvariantError on the first out-of-range field.
  void validate() const;

  double alpha() const { return deg_to_rad(alpha_deg); }
  double beta() const { return deg_to_rad(beta_deg); }
  Camera camera() const;
  ScoreParams score_params() const { return {omega, gamma, beta_prior, gain_scope}; }
  /// Candidate-generation settings for the prior (offline) stage.
  CandidateSpec prior_spec() const;
  /// Candidate-generation settings for real-time target exploration.
  CandidateSpec realtime_spec() const;

  bool operator==(const PlannerConfig &) const = default;
};

/// Independent per-component seeds fanned out from one mission seed.
struct SeedFan {
  std::uint64_t prior_views;
  std::uint64_t oracle;
  std::uint64_t realtime_views;
};
SeedFan fan_out(std::uint64_t seed);

}  // namespace updraft
