#include "netrank/correction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "netrank/asymptotics.hpp"
#include "netrank/errors.hpp"
#include "netrank/estimation.hpp"

namespace netrank {

namespace {

double clamp_logged(double raw, double lo, double hi, const char* name,
                    std::vector<ClampEvent>& events) {
  const double clamped = std::clamp(raw, lo, hi);
  if (clamped != raw) events.push_back({name, raw, clamped});
  return clamped;
}

constexpr double kEps = 1e-6;

RepresentationProfile constant_profile(std::size_t n, double value) {
  return {std::vector<double>(n, value)};
}

RepresentationProfile limit_profile(std::size_t n, double kappa, double q,
                                    double mu1, double mu2) {
  RepresentationProfile target;
  target.values.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    target.values.push_back(
        rho_star_sbm(static_cast<double>(k) / static_cast<double>(n), kappa, q, mu1, mu2));
  }
  return target;
}

double minority_share(const std::vector<std::uint8_t>& labels) {
  std::size_t n1 = 0;
  for (std::uint8_t label : labels) n1 += label == 1;
  return static_cast<double>(n1) / static_cast<double>(labels.size());
}

}  // namespace

CorrectedRanking corrected_ranking(const std::vector<std::uint8_t>& labels,
                                   const std::vector<int>& scores,
                                   const RepresentationProfile& target,
                                   RngStream& rng) {
  const std::size_t n = labels.size();
  if (scores.size() != n) {
    throw DimensionError("scores and labels must have equal length");
  }
  if (target.size() != n) {
    throw DimensionError("target profile must have one value per node");
  }
  for (std::uint8_t label : labels) {
    if (label != 1 && label != 2) throw DomainError("labels must be 1 or 2");
  }
  for (double value : target.values) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw DomainError("target profile values must lie in [0, 1]");
    }
  }

  // Per-group pick order: restrict the jointly shuffled score ranking to each
  // group, giving nonincreasing scores with uniform within-group tie-breaks.
  const std::vector<int> by_score = top_k_ranking(scores, rng);
  std::vector<int> queue1, queue2;
  for (int node : by_score) {
    (labels[static_cast<std::size_t>(node)] == 1 ? queue1 : queue2).push_back(node);
  }

  CorrectedRanking result;
  result.order.reserve(n);
  std::size_t next1 = 0, next2 = 0;
  long long minority_count = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const bool minority_left = next1 < queue1.size();
    const bool majority_left = next2 < queue2.size();
    bool pick_minority;
    if (minority_left && majority_left) {
      const double target_k = target.values[k - 1];
      const double with = std::abs((minority_count + 1.0) / k - target_k);
      const double without = std::abs(static_cast<double>(minority_count) / k - target_k);
      pick_minority = with <= without;
    } else {
      pick_minority = minority_left;
    }
    if (pick_minority) {
      result.order.push_back(queue1[next1++]);
      ++minority_count;
    } else {
      result.order.push_back(queue2[next2++]);
    }
  }
  result.achieved_profile = minority_profile(labels, result.order);
  result.target_profile = target;
  return result;
}

CorrectedRanking corrected_ranking(const LabeledNetwork& net,
                                   const RepresentationProfile& target,
                                   RngStream& rng) {
  return corrected_ranking(net.labels, degrees(net), target, rng);
}

CorrectedRanking corrected_ranking(const DirectedNetwork& net,
                                   const RepresentationProfile& target,
                                   RngStream& rng) {
  return corrected_ranking(net.labels, in_degrees(net), target, rng);
}

CorrectedRanking plugin_corrected_ranking(const LabeledNetwork& y,
                                          const LabeledNetwork& y_star,
                                          RngStream& rng) {
  const MomentStats stats = moment_stats(y, y_star, DensityMode::averaged);
  const UndirectedEstimates est = estimate_undirected(stats);
  std::vector<ClampEvent> events;
  clamp_logged(est.beta_b_hat, 0.0, 1.0 - kEps, "beta_b_hat", events);
  clamp_logged(est.beta1_hat, 0.0, 1.0 - kEps, "beta1_hat", events);
  clamp_logged(est.beta2_hat, 0.0, 1.0 - kEps, "beta2_hat", events);
  const double q = clamp_logged(est.q_hat, kEps, 1.0 - kEps, "q_hat", events);
  CorrectedRanking result = corrected_ranking(
      y.labels, degrees(y),
      limit_profile(y.n(), est.kappa_hat, q, est.mu1_hat, est.mu2_hat), rng);
  result.clamp_events = std::move(events);
  return result;
}

CorrectedRanking plugin_corrected_ranking(const DirectedNetwork& y, RngStream& rng) {
  const DirectedStats stats = moment_stats_directed(y);
  const DirectedEstimates est = estimate_directed(stats);
  std::vector<ClampEvent> events;
  const double q = clamp_logged(est.p12_hat, kEps, 1.0 - kEps, "p12_hat", events);
  const double p11 = clamp_logged(est.p11_hat, kEps, 1.0 - kEps, "p11_hat", events);
  const double p22 = clamp_logged(est.p22_hat, kEps, 1.0 - kEps, "p22_hat", events);
  const double root_n = std::sqrt(static_cast<double>(stats.n));
  const double kappa = static_cast<double>(stats.n1) / stats.n;
  CorrectedRanking result = corrected_ranking(
      y.labels, in_degrees(y),
      limit_profile(static_cast<std::size_t>(stats.n), kappa, q,
                    root_n * (p11 - q), root_n * (p22 - q)),
      rng);
  result.clamp_events = std::move(events);
  return result;
}

CorrectedRanking proportional_ranking(const LabeledNetwork& net, RngStream& rng) {
  return corrected_ranking(net.labels, degrees(net),
                           constant_profile(net.n(), minority_share(net.labels)), rng);
}

CorrectedRanking proportional_ranking(const DirectedNetwork& net, RngStream& rng) {
  return corrected_ranking(net.labels, in_degrees(net),
                           constant_profile(net.labels.size(), minority_share(net.labels)),
                           rng);
}

}  // namespace netrank
