#pragma once

#include <span>
#include <vector>

#include "updraft/scene.hpp"
#include "updraft/views.hpp"
#include "updraft/visibility.hpp"

namespace updraft {

/// Which samples enter a real-time gain sum.
enum class GainScope {
  /// Every sample. The visited-view penalty is then the same for every
  /// candidate, so candidates rank by the prior-weighted samples they see.
  AllSamples,
  /// Only samples the candidate sees, so re-observing already covered
  /// samples costs the candidate. Ranks differently from AllSamples.
  VisibleToCandidate,
};

struct ScoreParams {
  double omega = 3.0;       ///< weight of unvisited observations
  double gamma = 2.0;       ///< penalty per visited observation
  double beta_prior = 3.0;  ///< weight of the prior probability in the offline score
  GainScope scope = GainScope::AllSamples;

  /// Throws InvariantError unless every weight is positive.
  void validate() const;
  bool operator==(const ScoreParams &) const = default;
};

/// Score of one sample under one view: omega * q * vis for an unvisited view,
/// -gamma * vis for a visited one.
double f_sample_view(const Sample &s, const View &v, int vis, const ScoreParams &params);

/// Number of views that see the sample.
int coverage(const Sample &s, std::span<const View> views, const Scene &scene);
int coverage(const Sample &s, std::span<const View> views, const Occluders &occluders);

/// beta * q / n_observers, 0 without observers.
double f_sample_prior(const Sample &s, std::size_t n_observers, const ScoreParams &params);
double f_sample_prior(const Sample &s, std::span<const View> observers, const ScoreParams &params);

/// Fills each sample's observer list with the ids of the views that see it.
void assign_observers(std::span<Sample> samples, std::span<const View> views,
                      const VisibilityTable &table);

/// Importance of an unvisited view: sum of f_sample_prior over the samples it
/// sees, with observer counts taken from each sample's observer list.
double g_view_prior(const View &v, std::span<const Sample> samples, const Scene &scene,
                    const ScoreParams &params);

/// Gain of visiting `candidate` after the ordered visited views.
double g_view_realtime(const View &candidate, std::span<const View> visited,
                       std::span<const Sample> samples, const Scene &scene,
                       const ScoreParams &params);
double g_view_realtime(const View &candidate, std::span<const View> visited,
                       std::span<const Sample> samples, const Occluders &occluders,
                       const ScoreParams &params);

/// Same value as g_view_realtime from precomputed visibility: the candidate
/// sees `visible` (indices into q and seen), seen[i] counts visited observers
/// of sample i, and total_seen is the sum of seen over every sample.
double realtime_gain(std::span<const int> visible, std::span<const double> q,
                     std::span<const int> seen, long total_seen, const ScoreParams &params);

}  // namespace updraft
