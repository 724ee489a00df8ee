#pragma once

#include "netrank/graph.hpp"

namespace netrank {

/**
 * Block moment statistics of a pair of undirected replicates: per-block edge
 * densities u1 and half-discrepancies u2 = mean |Y - Y*| / 2, for the
 * within-minority (suffix 1), within-majority (suffix 2), and between
 * (suffix b) blocks.
 */
struct MomentStats {
  int n = 0;
  int n1 = 0;
  int n2 = 0;
  double N1 = 0.0;  // n1 (n1 - 1) / 2 within-minority pairs
  double N2 = 0.0;  // n2 (n2 - 1) / 2 within-majority pairs
  double Nb = 0.0;  // n1 n2 between pairs
  double u1_1 = 0.0;
  double u2_1 = 0.0;
  double u1_2 = 0.0;
  double u2_2 = 0.0;
  double u1_b = 0.0;
  double u2_b = 0.0;
};

/**
 * Which replicate(s) the block densities u1 are computed from.  `averaged`
 * uses the mean of both replicates, which preserves the expectation, lowers
 * the variance, and makes downstream estimates replicate-symmetric;
 * `replicate_y` uses the first replicate alone, the form whose sampling
 * covariance the plug-in test matrices assume.
 */
enum class DensityMode { averaged, replicate_y };

/// Raw (unclamped) method-of-moments estimates from two noisy replicates.
struct UndirectedEstimates {
  double kappa_hat = 0.0;
  double q_hat = 0.0;
  double mu1_hat = 0.0;
  double mu2_hat = 0.0;
  double beta_b_hat = 0.0;
  double beta1_hat = 0.0;
  double beta2_hat = 0.0;
  double gamma1_hat = 0.0;
  double gamma2_hat = 0.0;
};

/**
 * Exact block averages over the three unordered-pair blocks.  Requires both
 * replicates to share size and labels and both groups to have at least two
 * nodes.
 */
MomentStats moment_stats(const LabeledNetwork& y, const LabeledNetwork& y_star,
                         DensityMode mode = DensityMode::averaged);

/**
 * Method-of-moments estimates:
 *   beta_x = u2_x / u1_x            (per-block deletion rates)
 *   gamma_g = sqrt(n) (beta_b - beta_g)
 *   q = u1_b / (1 - beta_b)
 *   mu_g = sqrt(n) (u1_g / (1 - beta_g) - q)
 * Values are reported raw; consumers needing feasible parameters clamp.
 * Throws DegenerateStatisticsError when a block density is zero or an
 * estimated rate reaches one.
 */
UndirectedEstimates estimate_undirected(const MomentStats& stats);

/// Directed moment statistics: ordered-pair densities and asymmetry rates.
struct DirectedStats {
  int n = 0;
  int n1 = 0;
  int n2 = 0;
  double u11_d = 0.0;  // arcs within group 1 over ordered pairs
  double u11_a = 0.0;  // one-directional rate over unordered group-1 pairs
  double u22_d = 0.0;
  double u22_a = 0.0;
  double u12_d = 0.0;  // arcs minority -> majority over cross pairs
  double u21_d = 0.0;  // arcs majority -> minority over cross pairs
  double u12_a = 0.0;  // one-directional rate over unordered cross pairs
};

/// Closed-form directed method-of-moments estimates with their statistics.
struct DirectedEstimates {
  DirectedStats stats;
  double beta11_hat = 0.0;
  double beta22_hat = 0.0;
  double beta12_hat = 0.0;
  double beta21_hat = 0.0;
  double p11_hat = 0.0;
  double p22_hat = 0.0;
  double p12_hat = 0.0;
};

/// Exact ordered-block averages; both groups need at least two nodes.
DirectedStats moment_stats_directed(const DirectedNetwork& y);

/**
 * Directed method-of-moments closed forms:
 *   beta_gg = u_gg_a / (2 u_gg_d),  p_gg = 2 u_gg_d^2 / (2 u_gg_d - u_gg_a)
 *   beta_12 = (u21_d - u12_d + u12_a) / (2 u21_d)
 *   beta_21 = (u12_d - u21_d + u12_a) / (2 u12_d)
 *   p_12 = 2 u12_d u21_d / (u12_d + u21_d - u12_a)
 * Throws DegenerateStatisticsError naming the vanishing denominator.
 */
DirectedEstimates estimate_directed(const DirectedStats& stats);

}  // namespace netrank
