#include "updraft/config.hpp"

#include <random>

#include "updraft/error.hpp"

namespace updraft {

namespace {

void require(bool ok, const char *what) {
  if (!ok) throw InvariantError(std::string("config: ") + what);
}

}  // namespace

void PlannerConfig::validate() const {
  require(h > 0.0, "h must be positive");
  score_params().validate();
  require(phi > 0.0 && phi < 1.0, "phi must lie in (0, 1)");
  require(K >= 1, "K must be at least 1");
  require(prior_radius_m > 0.0, "prior_radius_m must be positive");
  require(realtime_radius_m > 0.0, "realtime_radius_m must be positive");
  require(alpha_deg >= 0.0 && beta_deg < 90.0 && beta_deg >= alpha_deg,
          "alpha and beta must satisfy 0 <= alpha <= beta < 90 degrees");
  require(!d_pad || *d_pad >= 0.0, "d_pad must be non-negative");
  require(sample_spacing_m > 0.0, "sample_spacing_m must be positive");
  require(target_spacing_m > 0.0, "target_spacing_m must be positive");
  require(cluster_gap_m > 0.0, "cluster_gap_m must be positive");
  require(tau > 0.0, "tau must be positive");
  require(window >= 1, "window must be at least 1");
  require(regen_iou > 0.0 && regen_iou <= 1.0, "regen_iou must lie in (0, 1]");
  require(max_nbv_per_target >= 1, "max_nbv_per_target must be at least 1");
  require(camera_horizontal_half_fov_deg > 0.0 && camera_horizontal_half_fov_deg < 90.0 &&
              camera_vertical_half_fov_deg > 0.0 && camera_vertical_half_fov_deg < 90.0,
          "camera half angles must lie in (0, 90) degrees");
  require(camera_far_m > 0.0, "camera far must be positive");
}

Camera PlannerConfig::camera() const {
  return {deg_to_rad(camera_horizontal_half_fov_deg), deg_to_rad(camera_vertical_half_fov_deg), camera_far_m};
}

CandidateSpec PlannerConfig::prior_spec() const {
  CandidateSpec s;
  s.safe_height = h;
  s.radius = prior_radius_m;
  s.pad = padding(h, alpha(), beta(), d_pad.value_or(prior_radius_m));
  s.camera = camera();
  return s;
}

CandidateSpec PlannerConfig::realtime_spec() const {
  CandidateSpec s;
  s.safe_height = h;
  s.radius = realtime_radius_m;
  s.pad = padding(h, alpha(), beta(), d_pad.value_or(realtime_radius_m));
  s.camera = camera();
  return s;
}

SeedFan fan_out(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  SeedFan f{};
  f.prior_views = rng();
  f.oracle = rng();
  f.realtime_views = rng();
  return f;
}

}  // namespace updraft
