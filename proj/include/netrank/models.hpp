#pragma once

#include <cstdint>
#include <vector>

#include "netrank/graph.hpp"
#include "netrank/rng.hpp"

namespace netrank {

/**
 * Two-group stochastic block model in the sqrt(n)-scaled parameterization:
 * within-group edge rates q + mu_g/sqrt(n), between-group rate q.
 *
 * Feasibility of the resulting cells depends on n, so it is checked at
 * sample time rather than at construction.
 */
struct SbmParams {
  double kappa;  // minority assignment probability, in (0, 1)
  double q;      // between-group rate, in (0, 1)
  double mu1;    // sqrt(n)-scaled within-minority signal
  double mu2;    // sqrt(n)-scaled within-majority signal
};

/**
 * Labelled graphon omega_n(u, v) = q + theta(u, v)/sqrt(n) with latent
 * positions uniform on [0, kappa) for minority nodes and [kappa, 1) for
 * majority nodes (half-open by convention, a measure-zero choice fixed for
 * determinism).
 *
 * Built-in theta families:
 *   block_constant — coefficients {t11, t12, t22}: theta is t11 on the
 *     minority block, t22 on the majority block, t12 between; reproduces the
 *     SBM when {mu1, 0, mu2} is used.
 *   linear   — coefficients {a}: theta(u, v) = a (u + v).
 *   bilinear — coefficients {a}: theta(u, v) = a u v.
 */
struct GraphonSpec {
  enum class Family { block_constant, linear, bilinear };

  Family family;
  double q;
  double kappa;
  std::vector<double> coefficients;

  /// theta(u, v) for the configured family.
  double theta(double u, double v) const;
  /// Edge probability omega_n(u, v) at size n.
  double omega(double u, double v, int n) const;
};

/**
 * Undirected observation channel: each true edge is deleted independently
 * with a rate that depends on the endpoint groups,
 * beta_11 = beta - gamma1/sqrt(n), beta_22 = beta - gamma2/sqrt(n),
 * beta_12 = beta.  No false positives.
 */
struct ErrorRatesUndirected {
  double beta;    // between-group deletion rate
  double gamma1;  // sqrt(n)-scaled within-minority offset
  double gamma2;  // sqrt(n)-scaled within-majority offset
};

/// Directed channel: arc i->j of a true edge survives with 1 - beta_{c_i c_j}.
struct ErrorRatesDirected {
  double beta11;
  double beta12;
  double beta21;
  double beta22;
};

/**
 * Group labels, i.i.d. minority-with-probability-kappa by default.  With
 * fixed_minority_count the minority size is exactly floor(kappa * n) and the
 * positions are a uniform random subset.
 */
std::vector<std::uint8_t> sample_labels(int n, double kappa, RngStream& rng,
                                        bool fixed_minority_count = false);

/**
 * SBM draw at size n.  Edges are sampled independently in row-major (i < j)
 * order.  Throws InfeasibleParameterError when a block cell leaves [0, 1].
 */
LabeledNetwork sample_sbm(int n, const SbmParams& params,
                          const std::vector<std::uint8_t>& labels,
                          RngStream& rng);

/**
 * Block-Bernoulli draw with explicit cell rates (p11, p12, p22), used by the
 * samplers above and by experiments that work with unscaled rates.
 */
LabeledNetwork sample_block_bernoulli(int n, double p11, double p12, double p22,
                                      const std::vector<std::uint8_t>& labels,
                                      RngStream& rng);

/**
 * Labelled-graphon draw at size n: latent positions first (node order), then
 * edges in row-major order.  Every evaluated omega value is range-checked;
 * out-of-range values raise InfeasibleParameterError.  When latents_out is
 * non-null the sampled positions are copied there.
 */
LabeledNetwork sample_graphon(int n, const GraphonSpec& spec,
                              const std::vector<std::uint8_t>& labels,
                              RngStream& rng,
                              std::vector<double>* latents_out = nullptr);

/**
 * One or two conditionally independent noisy replicates of an undirected
 * truth network.  replicates must be 1 or 2; each replicate consumes one
 * Bernoulli draw per true edge, replicate-major.
 */
std::vector<LabeledNetwork> apply_errors_undirected(
    const LabeledNetwork& truth, const ErrorRatesUndirected& rates,
    int replicates, RngStream& rng);

/**
 * Directed observation of an undirected truth: both arc directions of every
 * true edge survive independently, each with its own group-pair rate.
 */
DirectedNetwork apply_errors_directed(const LabeledNetwork& truth,
                                      const ErrorRatesDirected& rates,
                                      RngStream& rng);

}  // namespace netrank
