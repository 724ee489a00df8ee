#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "netrank/asymptotics.hpp"
#include "netrank/correction.hpp"
#include "netrank/errors.hpp"
#include "netrank/estimation.hpp"
#include "netrank/graph.hpp"
#include "netrank/models.hpp"
#include "netrank/rng.hpp"

using namespace netrank;

namespace {

std::vector<std::uint8_t> block_labels(int n1, int n2) {
  std::vector<std::uint8_t> labels;
  for (int i = 0; i < n1; ++i) labels.push_back(1);
  for (int i = 0; i < n2; ++i) labels.push_back(2);
  return labels;
}

RepresentationProfile constant_target(std::size_t n, double value) {
  return {std::vector<double>(n, value)};
}

bool is_permutation_of_all(const std::vector<int>& order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (int node : order) {
    if (node < 0 || static_cast<std::size_t>(node) >= n || seen[node]) return false;
    seen[node] = true;
  }
  return true;
}

bool group_scores_nonincreasing(const std::vector<int>& order,
                                const std::vector<std::uint8_t>& labels,
                                const std::vector<int>& scores) {
  int last1 = -1, last2 = -1;  // previous score per group
  bool first1 = true, first2 = true;
  for (int node : order) {
    int& last = labels[node] == 1 ? last1 : last2;
    bool& first = labels[node] == 1 ? first1 : first2;
    if (!first && scores[node] > last) return false;
    last = scores[node];
    first = false;
  }
  return true;
}

}  // namespace

TEST_CASE("extreme targets order one group before the other") {
  const auto labels = block_labels(3, 4);
  const std::vector<int> scores = {5, 1, 9, 7, 3, 8, 2};
  RngStream rng(1);
  const CorrectedRanking all_minority =
      corrected_ranking(labels, scores, constant_target(7, 1.0), rng);
  const std::vector<int> expected_first = {2, 0, 1};   // minority by score desc
  const std::vector<int> expected_then = {5, 3, 4, 6}; // majority by score desc
  for (int k = 0; k < 3; ++k) CHECK(all_minority.order[k] == expected_first[k]);
  for (int k = 0; k < 4; ++k) CHECK(all_minority.order[3 + k] == expected_then[k]);
  CHECK(all_minority.achieved_profile.at_k(3) == 1.0);
  CHECK(all_minority.clamp_events.empty());

  RngStream rng2(1);
  const CorrectedRanking all_majority =
      corrected_ranking(labels, scores, constant_target(7, 0.0), rng2);
  for (int k = 0; k < 4; ++k) CHECK(all_majority.order[k] == expected_then[k]);
  for (int k = 0; k < 3; ++k) CHECK(all_majority.order[4 + k] == expected_first[k]);
  CHECK(all_majority.achieved_profile.at_k(4) == 0.0);
}

TEST_CASE("the unconstrained profile as target reproduces the unconstrained group pattern") {
  for (int trial = 0; trial < 50; ++trial) {
    RngStream rng(derive_stream_seed(0xf00d, "self-target", 0, trial));
    const int n1 = 8 + static_cast<int>(rng.next_below(8));
    const int n = 30;
    const auto labels = block_labels(n1, n - n1);
    const LabeledNetwork net = sample_sbm(n, {n1 / double(n), 0.3, 1.0, -0.5}, labels, rng);
    const std::vector<int> deg = degrees(net);
    const std::vector<int> unconstrained = top_k_ranking(deg, rng);
    const RepresentationProfile target = minority_profile(labels, unconstrained);

    const CorrectedRanking corrected = corrected_ranking(labels, deg, target, rng);
    REQUIRE(corrected.achieved_profile.size() == target.size());
    for (std::size_t k = 0; k < target.size(); ++k) {
      CHECK(corrected.achieved_profile.values[k] == target.values[k]);
    }
  }
}

TEST_CASE("constant targets keep the minority count within one of proportionality") {
  // Exhaustive over label patterns for small n, arbitrary fixed scores.
  for (int n = 2; n <= 10; ++n) {
    std::vector<int> scores(n);
    for (int i = 0; i < n; ++i) scores[i] = (i * 7 + 3) % 5;  // includes ties
    for (int pattern = 0; pattern < (1 << n); ++pattern) {
      std::vector<std::uint8_t> labels(n);
      int n1 = 0;
      for (int i = 0; i < n; ++i) {
        labels[i] = (pattern >> i) & 1 ? 1 : 2;
        n1 += labels[i] == 1;
      }
      for (int tenth = 1; tenth <= 9; ++tenth) {
        const double rho = tenth / 10.0;
        RngStream rng(pattern * 10 + tenth);
        const CorrectedRanking result =
            corrected_ranking(labels, scores, constant_target(n, rho), rng);
        REQUIRE(is_permutation_of_all(result.order, n));
        REQUIRE(group_scores_nonincreasing(result.order, labels, scores));
        int count = 0, seen1 = 0, seen2 = 0;
        for (int k = 1; k <= n; ++k) {
          const int node = result.order[k - 1];
          count += labels[node] == 1;
          seen1 += labels[node] == 1;
          seen2 += labels[node] == 2;
          const bool both_remain = seen1 < n1 && seen2 < n - n1;
          if (both_remain) {
            CHECK(std::abs(count - rho * k) < 1.0);
          }
        }
      }
    }
  }
}

TEST_CASE("ranking output is a degree-monotone permutation on sampled networks") {
  RngStream rng(2718);
  const auto labels = block_labels(60, 140);
  const LabeledNetwork net = sample_sbm(200, {0.3, 0.25, 1.0, 0.0}, labels, rng);
  const RhoStarCurve curve = rho_star_curve({0.3, 0.25, 1.0, 0.0});
  RepresentationProfile target;
  for (int k = 1; k <= 200; ++k) {
    target.values.push_back(rho_star_sbm(k / 200.0, 0.3, 0.25, 1.0, 0.0));
  }
  const CorrectedRanking result = corrected_ranking(net, target, rng);
  CHECK(is_permutation_of_all(result.order, 200));
  CHECK(group_scores_nonincreasing(result.order, labels, degrees(net)));
  CHECK(result.target_profile.values == target.values);
  // Sanity on the library curve used above: same endpoint as the target.
  CHECK(curve.values.back() == doctest::Approx(target.values.back()).epsilon(1e-12));
}

TEST_CASE("validation rejects malformed ranking inputs") {
  const auto labels = block_labels(2, 2);
  const std::vector<int> scores = {1, 2, 3, 4};
  RngStream rng(3);
  CHECK_THROWS_AS(
      (void)corrected_ranking(labels, {1, 2, 3}, constant_target(4, 0.5), rng),
      DimensionError);
  CHECK_THROWS_AS(
      (void)corrected_ranking(labels, scores, constant_target(3, 0.5), rng),
      DimensionError);
  CHECK_THROWS_AS(
      (void)corrected_ranking(labels, scores, constant_target(4, 1.5), rng),
      DomainError);
  const std::vector<std::uint8_t> bad_labels = {1, 2, 3, 2};
  CHECK_THROWS_AS(
      (void)corrected_ranking(bad_labels, scores, constant_target(4, 0.5), rng),
      DomainError);
}

TEST_CASE("proportional ranking alternates groups for balanced labels") {
  const auto labels = block_labels(3, 3);
  LabeledNetwork net(6, labels);
  // Distinct degrees: node i gets i edges to the lowest-indexed other nodes.
  for (int i = 1; i < 6; ++i) {
    for (int j = 0; j < i; ++j) net.add_edge(i, j);
  }
  RngStream rng(7);
  const CorrectedRanking result = proportional_ranking(net, rng);
  for (std::size_t k = 0; k < 6; ++k) {
    const std::uint8_t expected_group = k % 2 == 0 ? 1 : 2;
    CHECK(labels[result.order[k]] == expected_group);
  }
  // Within one of proportionality at every prefix.
  for (int k = 1; k <= 6; ++k) {
    CHECK(std::abs(result.achieved_profile.at_k(k) * k - 0.5 * k) < 1.0);
  }
}

TEST_CASE("equal degrees yield a random permutation following the target pattern") {
  const auto labels = block_labels(5, 5);
  const LabeledNetwork net(10, labels);  // empty graph: all degrees zero
  RngStream rng_a(100), rng_b(200);
  const CorrectedRanking a =
      corrected_ranking(net, constant_target(10, 0.5), rng_a);
  const CorrectedRanking b =
      corrected_ranking(net, constant_target(10, 0.5), rng_b);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(labels[a.order[k]] == labels[b.order[k]]);  // same group pattern
  }
  CHECK(a.order != b.order);  // different within-group shuffles
  CHECK(is_permutation_of_all(a.order, 10));
}

TEST_CASE("plug-in correction on error-free replicates stays close to the raw ranking") {
  RngStream rng(515151);
  const auto labels = block_labels(120, 180);
  const LabeledNetwork truth = sample_sbm(300, {0.4, 0.3, 0.0, 0.0}, labels, rng);
  RngStream rank_rng(1), plug_rng(2);
  const std::vector<int> uncorrected = top_k_ranking(degrees(truth), rank_rng);
  const CorrectedRanking corrected = plugin_corrected_ranking(truth, truth, plug_rng);
  CHECK(corrected.clamp_events.empty());
  CHECK(spearman(corrected.order, uncorrected) >= 0.95);
  for (double value : corrected.target_profile.values) {
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);
  }
}

TEST_CASE("plug-in correction logs clamps when the density estimate escapes (0, 1)") {
  // Complete graph in both replicates except a few cross edges dropped from
  // the second: the corrected cross density exceeds one and must be clamped.
  const int n = 8;
  const auto labels = block_labels(4, 4);
  LabeledNetwork y(n, labels), y_star(n, labels);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      y.add_edge(i, j);
      y_star.add_edge(i, j);
    }
  }
  y_star.adj.clear(0, 4);
  y_star.adj.clear(4, 0);
  y_star.adj.clear(1, 5);
  y_star.adj.clear(5, 1);
  RngStream rng(9);
  const CorrectedRanking result = plugin_corrected_ranking(y, y_star, rng);
  REQUIRE_FALSE(result.clamp_events.empty());
  bool q_clamped = false;
  for (const ClampEvent& event : result.clamp_events) {
    if (event.parameter == "q_hat") {
      q_clamped = true;
      CHECK(event.raw_value > 1.0);
      CHECK(event.clamped_value == 1.0 - 1e-6);
    }
  }
  CHECK(q_clamped);
  CHECK(is_permutation_of_all(result.order, n));
}

TEST_CASE("directed plug-in correction maps cross and within densities to the limit curve") {
  const int n = 120, n1 = 48;
  const auto labels = block_labels(n1, n - n1);
  RngStream rng(777);
  const LabeledNetwork truth = sample_block_bernoulli(n, 0.45, 0.25, 0.35, labels, rng);
  const DirectedNetwork noisy = apply_errors_directed(truth, {0.1, 0.2, 0.3, 0.1}, rng);

  RngStream correct_rng(5);
  const CorrectedRanking result = plugin_corrected_ranking(noisy, correct_rng);
  CHECK(is_permutation_of_all(result.order, n));
  CHECK(group_scores_nonincreasing(result.order, labels, in_degrees(noisy)));

  // The target curve must equal the limiting profile at the mapped
  // (clamped) parameter estimates.
  const DirectedEstimates est = estimate_directed(moment_stats_directed(noisy));
  const double clamp_lo = 1e-6, clamp_hi = 1.0 - 1e-6;
  const double q = std::clamp(est.p12_hat, clamp_lo, clamp_hi);
  const double p11 = std::clamp(est.p11_hat, clamp_lo, clamp_hi);
  const double p22 = std::clamp(est.p22_hat, clamp_lo, clamp_hi);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (int k = 1; k <= n; k += 17) {
    const double expected = rho_star_sbm(k / static_cast<double>(n), n1 / static_cast<double>(n),
                                         q, root_n * (p11 - q), root_n * (p22 - q));
    CHECK(result.target_profile.at_k(k) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("directed proportional ranking matches the constant share target") {
  const auto labels = block_labels(4, 8);
  DirectedNetwork net(12, labels);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < i; ++j) net.add_arc(i, j);
  }
  RngStream rng(12);
  const CorrectedRanking result = proportional_ranking(net, rng);
  CHECK(is_permutation_of_all(result.order, 12));
  for (double value : result.target_profile.values) {
    CHECK(value == doctest::Approx(4.0 / 12.0).epsilon(1e-12));
  }
  int count = 0, seen1 = 0, seen2 = 0;
  for (int k = 1; k <= 12; ++k) {
    const int node = result.order[k - 1];
    count += labels[node] == 1;
    seen1 += labels[node] == 1;
    seen2 += labels[node] == 2;
    if (seen1 < 4 && seen2 < 8) {
      CHECK(std::abs(count - k / 3.0) < 1.0);
    }
  }
}
