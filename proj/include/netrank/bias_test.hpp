#pragma once

#include <array>
#include <optional>
#include <span>

#include "netrank/estimation.hpp"
#include "netrank/graph.hpp"
#include "netrank/numerics.hpp"

namespace netrank {

/**
 * Per-pair covariance of (edge indicator, half replicate disagreement) in one
 * block with edge density x and half-disagreement rate y:
 *
 *   [[ x(1-x),     (1/2-x)y ],
 *    [ (1/2-x)y,  (1/2-y)y  ]]
 *
 * Pairs are independent within a block, so scaling this by n^2 / (pair count)
 * gives the exact covariance of the block's scaled moment pair.
 */
SmallMatrix sigma_u(double x, double y);

/**
 * 3x6 Jacobian of the deletion-rate map
 *   h(u,v,w,x,y,z) = (z/y, v/u - z/y, x/w - z/y)
 * at xi = (u1_1, u2_1, u1_2, u2_2, u1_b, u2_b); components are the between
 * rate and each within rate minus the between rate.  Rows 2-3 carry the raw
 * sign of h; theta_beta_hat flips them to match gamma_hat = sqrt(n)(beta_b -
 * beta_g).  Throws DimensionError unless xi has six entries and
 * DegenerateStatisticsError when u1_1, u1_2, or u1_b is zero.
 */
SmallMatrix jacobian_h(std::span<const double> xi);

/**
 * 4x6 Jacobian of the density-and-rate map
 *   g = (u^2/(u-v) - y^2/(y-z), w^2/(w-x) - y^2/(y-z), v/u - z/y, x/w - z/y),
 * whose first two components are the noise-corrected within densities minus
 * the corrected between density.  Rows 3-4 equal rows 2-3 of jacobian_h;
 * theta_mu_hat flips them for the gamma_hat sign convention.  Throws
 * DimensionError for a wrong-sized xi and DegenerateStatisticsError when a
 * block density is zero or equals its disagreement moment.
 */
SmallMatrix jacobian_g(std::span<const double> xi);

/**
 * Plug-in precision matrix for v(beta) = (n(beta_b - beta), sqrt(n) gamma_1,
 * sqrt(n) gamma_2): invert D Omega D' where D is jacobian_h at the observed
 * moments with rows 2-3 negated and Omega is the block-diagonal covariance
 * of the scaled moment vector built from sigma_u.  Throws
 * SingularMatrixError when the sample is too degenerate to invert and
 * DegenerateStatisticsError when a block has no pairs.
 */
SmallMatrix theta_beta_hat(const MomentStats& stats);

/**
 * Plug-in precision matrix for sqrt(n)(mu_1, mu_2, gamma_1, gamma_2), built
 * like theta_beta_hat with jacobian_g (rows 3-4 negated) in place of
 * jacobian_h.
 */
SmallMatrix theta_mu_hat(const MomentStats& stats);

/**
 * Quadratic form v(beta)' theta v(beta) with
 * v(beta) = (n(beta_b_hat - beta), sqrt(n) gamma1_hat, sqrt(n) gamma2_hat).
 */
double q_beta(const MomentStats& stats, const UndirectedEstimates& est,
              const SmallMatrix& theta, double beta);

struct QBetaMinimum {
  double argmin = 0.0;
  double value = 0.0;
};

/**
 * Exact minimizer of the convex quadratic beta -> q_beta over [0, beta_bar]:
 * the unconstrained stationary point
 *   beta_b_hat + (theta01 s1 + theta02 s2) / (n theta00),  s_g = sqrt(n) gamma_g_hat,
 * clamped to the interval.  Requires symmetric theta; throws
 * DegenerateStatisticsError when theta00 <= 0 (no convex minimum) and
 * DomainError when beta_bar is outside (0, 1).
 */
QBetaMinimum minimize_q_beta(const MomentStats& stats,
                             const UndirectedEstimates& est,
                             const SmallMatrix& theta, double beta_bar);

/**
 * Outcome of the replicate-based bias test.  `identical_replicates` means
 * Y = Y* entrywise, where the test cannot reject by construction;
 * `inconclusive` means the plug-in precision matrices were numerically
 * singular or not positive definite, so the chi-square calibration is
 * meaningless and no decision is reported.
 */
struct TestReport {
  enum class Outcome { accept, reject, identical_replicates, inconclusive };

  Outcome outcome = Outcome::inconclusive;
  bool y_equal = false;
  bool reject = false;
  double alpha = 0.0;
  double beta_bar = 0.0;
  double threshold3 = 0.0;  // chi-square quantile at 1 - alpha, 3 dof
  double threshold4 = 0.0;  // chi-square quantile at 1 - alpha, 4 dof
  std::optional<double> q_beta_min;
  std::optional<double> argmin_beta;
  std::optional<double> q_mu;
};

const char* outcome_name(TestReport::Outcome outcome);

/**
 * Intersection-union test for systematic bias from two observed replicates.
 * Rejects when both the rate statistic min_{beta in [0, beta_bar]} q_beta
 * exceeds the chi-square(3) critical value and the location statistic
 *   q_mu = v' theta_mu v,  v = sqrt(n)(mu1_hat, mu2_hat, gamma1_hat, gamma2_hat),
 * exceeds the chi-square(4) critical value; any parameter on the composite
 * null (equal deletion rates, or a noise-free/blockless regime) keeps the
 * asymptotic rejection rate at most alpha.  Block densities are taken from
 * the first replicate alone, the form whose covariance the plug-in matrices
 * assume.  Estimation errors (degenerate blocks) propagate.
 */
TestReport bias_test(const LabeledNetwork& y, const LabeledNetwork& y_star,
                     double alpha, double beta_bar = 0.1);

/**
 * Plug-in covariance of sqrt(n1 n2) (u12_d, u21_d, u12_a) evaluated at the
 * directed estimates:
 *
 *   [[ x(1-x),        xy/p12 - xy,  x beta21 - xs ],
 *    [ xy/p12 - xy,   y(1-y),       y beta12 - ys ],
 *    [ x beta21 - xs, y beta12 - ys, s(1-s)        ]]
 *
 * with x = u12_d, y = u21_d, s = u12_a.  Exact for independent cross pairs.
 * Throws DegenerateStatisticsError when p12_hat is zero.
 */
SmallMatrix sigma33_hat(const DirectedEstimates& d);

/**
 * Gradient of the rate-gap map beta12 - beta21 = (y-x+z)/(2y) - (x-y+z)/(2x)
 * with respect to (x, y, z) = (u12_d, u21_d, u12_a):
 *   1/2 (-y/x^2 + z/x^2 - 1/y,  1/x - z/y^2 + x/y^2,  1/y - 1/x).
 * Throws DegenerateStatisticsError when either cross density is zero.
 */
std::array<double, 3> rate_gap_gradient(double x, double y, double z);

enum class DirectedAlternative { beta12_less, two_sided };

struct DirectedTestReport {
  double z = 0.0;
  double p_value = 1.0;
  double sigma_d_hat = 0.0;
  DirectedAlternative alternative = DirectedAlternative::beta12_less;
  double alpha = 0.0;
  bool reject = false;
};

/**
 * One-sided (default) or two-sided Z-test of equal cross deletion rates in a
 * directed network, using Z = sqrt(n1 n2)(beta12_hat - beta21_hat) / sigma_d
 * with sigma_d^2 the delta-method variance rate_gap_gradient' sigma33_hat
 * rate_gap_gradient.  Under `beta12_less` the p-value is Phi(z) (small when
 * arcs toward the minority are deleted more often); under `two_sided` it is
 * 2(1 - Phi(|z|)).  An exactly mirror-symmetric network makes both the gap
 * and its variance estimate vanish, which reports z = 0 with the null-median
 * p-value; any other nonpositive variance estimate throws
 * DegenerateStatisticsError.  Estimation errors propagate.
 */
DirectedTestReport directed_bias_test(
    const DirectedNetwork& y, double alpha,
    DirectedAlternative alternative = DirectedAlternative::beta12_less);

}  // namespace netrank
