#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netrank/graph.hpp"
#include "netrank/rng.hpp"

namespace netrank {

/// One parameter value pushed back into its valid range by the plug-in
/// pipeline, recorded so downstream reports can flag the adjustment.
struct ClampEvent {
  std::string parameter;
  double raw_value = 0.0;
  double clamped_value = 0.0;
};

/**
 * Result of a profile-matching re-ranking.  `order` is a permutation of the
 * node indices; `achieved_profile` is the minority profile realized along it
 * (equal to minority_profile(labels, order)); `target_profile` is the curve
 * the greedy chased; `clamp_events` lists parameter clamps (plug-in paths
 * only, empty otherwise).
 */
struct CorrectedRanking {
  std::vector<int> order;
  RepresentationProfile achieved_profile;
  RepresentationProfile target_profile;
  std::vector<ClampEvent> clamp_events;
};

/**
 * Greedy profile-matching ranking on explicit scores.  At each position K the
 * candidate group is
 *   argmin_{g in {0,1}} | (count_{K-1} + g) / K  -  target_K |
 * where count is the running number of minority picks and g = 1 means "pick
 * the best remaining minority node"; ties break toward the minority while one
 * remains, an exhausted group forces the other, and within a group nodes are
 * taken by nonincreasing score with uniform tie-breaks from rng.  Requires
 * labels in {1, 2}, scores of matching length, and a target of length n with
 * values in [0, 1].
 */
CorrectedRanking corrected_ranking(const std::vector<std::uint8_t>& labels,
                                   const std::vector<int>& scores,
                                   const RepresentationProfile& target,
                                   RngStream& rng);

/// Profile-matching ranking of an undirected network by degree.
CorrectedRanking corrected_ranking(const LabeledNetwork& net,
                                   const RepresentationProfile& target,
                                   RngStream& rng);

/// Profile-matching ranking of a directed network by in-degree.
CorrectedRanking corrected_ranking(const DirectedNetwork& net,
                                   const RepresentationProfile& target,
                                   RngStream& rng);

/**
 * Full plug-in correction from two replicates: estimate (kappa, q, mu1, mu2)
 * by the method of moments on the averaged block densities, clamp q to
 * [1e-6, 1-1e-6] and the deletion rates to [0, 1-1e-6] (recording every
 * clamp), evaluate the limiting profile at K/n for K = 1..n, and run the
 * greedy ranking on the degrees of the first replicate alone.  Estimation
 * errors propagate.
 */
CorrectedRanking plugin_corrected_ranking(const LabeledNetwork& y,
                                          const LabeledNetwork& y_star,
                                          RngStream& rng);

/**
 * Plug-in correction for a directed network: the cross-arc estimators give
 * q = p12_hat and mu_g = sqrt(n)(p_gg_hat - q) after clamping each density to
 * [1e-6, 1-1e-6]; the target profile is the same limiting curve and the
 * ranking is by in-degree.
 */
CorrectedRanking plugin_corrected_ranking(const DirectedNetwork& y, RngStream& rng);

/// Greedy ranking toward the constant target n1 / n (proportional
/// representation): |minority count - K n1/n| < 1 while both groups remain.
CorrectedRanking proportional_ranking(const LabeledNetwork& net, RngStream& rng);
CorrectedRanking proportional_ranking(const DirectedNetwork& net, RngStream& rng);

}  // namespace netrank
