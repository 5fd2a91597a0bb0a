#include "updraft/changeability.hpp"

#include <algorithm>

#include "updraft/error.hpp"

namespace updraft {

void ScoreParams::validate() const {
  if (!(omega > 0.0)) throw InvariantError("omega must be positive");
  if (!(gamma > 0.0)) throw InvariantError("gamma must be positive");
  if (!(beta_prior > 0.0)) throw InvariantError("beta_prior must be positive");
}

double f_sample_view(const Sample &s, const View &v, int vis, const ScoreParams &params) {
  if (vis == 0) return 0.0;
  if (v.status == ViewStatus::Visited) return -params.gamma * vis;
  return params.omega * s.q * vis;
}

int coverage(const Sample &s, std::span<const View> views, const Occluders &occluders) {
  int n = 0;
  for (const auto &v : views) n += visible(s, v, occluders);
  return n;
}

int coverage(const Sample &s, std::span<const View> views, const Scene &scene) {
  return coverage(s, views, Occluders(scene));
}

double f_sample_prior(const Sample &s, std::size_t n_observers, const ScoreParams &params) {
  if (n_observers == 0) return 0.0;
  return params.beta_prior * s.q / static_cast<double>(n_observers);
}

double f_sample_prior(const Sample &s, std::span<const View> observers, const ScoreParams &params) {
  return f_sample_prior(s, observers.size(), params);
}

void assign_observers(std::span<Sample> samples, std::span<const View> views,
                      const VisibilityTable &table) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto &obs = samples[i].observers;
    obs.clear();
    for (int v : table.by_sample[i]) obs.push_back(views[static_cast<std::size_t>(v)].id);
  }
}

double g_view_prior(const View &v, std::span<const Sample> samples, const Scene &scene,
                    const ScoreParams &params) {
  const Occluders occ(scene);
  double g = 0.0;
  for (const auto &s : samples) {
    if (!visible(s, v, occ)) continue;
    g += f_sample_prior(s, s.observers.size(), params);
  }
  return g;
}

double g_view_realtime(const View &candidate, std::span<const View> visited,
                       std::span<const Sample> samples, const Occluders &occluders,
                       const ScoreParams &params) {
  double g = 0.0;
  for (const auto &s : samples) {
    const int vis = visible(s, candidate, occluders);
    if (vis == 0 && params.scope == GainScope::VisibleToCandidate) continue;
    double term = f_sample_view(s, candidate, vis, params);
    for (const auto &v : visited) term += f_sample_view(s, v, visible(s, v, occluders), params);
    g += term;
  }
  return g;
}

double g_view_realtime(const View &candidate, std::span<const View> visited,
                       std::span<const Sample> samples, const Scene &scene,
                       const ScoreParams &params) {
  return g_view_realtime(candidate, visited, samples, Occluders(scene), params);
}

double realtime_gain(std::span<const int> visible, std::span<const double> q,
                     std::span<const int> seen, long total_seen, const ScoreParams &params) {
  double g = 0.0;
  long seen_by_candidate = 0;
  for (int i : visible) {
    const auto k = static_cast<std::size_t>(i);
    g += params.omega * q[k];
    seen_by_candidate += seen[k];
  }
  const long penalised = params.scope == GainScope::AllSamples ? total_seen : seen_by_candidate;
  return g - params.gamma * static_cast<double>(penalised);
}

}  // namespace updraft
