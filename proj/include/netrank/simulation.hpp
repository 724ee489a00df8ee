#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netrank/models.hpp"

namespace netrank {

/// Base parameter a scenario sweeps over; mu and gamma sweeps set both
/// group values to the swept value.
enum class SweepParameter { none, beta, mu, gamma, q };

/// Rule tying mu to the resolved point instead of a fixed value.
enum class MuRule {
  fixed,
  // mu1 = mu2 = 1 / (2 (1 - beta)): deletion at rate beta shrinks the
  // observed location signal to mu (1 - beta), so this keeps it at 1/2
  // across a beta sweep.
  compensate_deletion,
};

/// Rule tying gamma to the resolved point instead of a fixed value.
enum class GammaRule {
  fixed,
  // gamma1 = gamma2 = sqrt(n) / 5: holds the within-group deletion rate at
  // beta - 1/5 for every n.
  root_n_over_five,
};

/**
 * Declarative Monte Carlo scenario: a two-group SBM observed through the
 * group-dependent deletion channel, evaluated over a grid of sizes and
 * optionally a sweep over one base parameter.
 */
struct ScenarioSpec {
  std::string name;
  double kappa = 0.25;
  double q = 0.25;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double beta = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  std::vector<int> n_grid;
  int replicate_count = 400;
  double alpha = 0.1;     // nominal level for detection runs
  double beta_bar = 0.1;  // balanced-deletion tolerance for detection runs
  SweepParameter sweep = SweepParameter::none;
  std::vector<double> sweep_grid;  // nonempty iff sweep != none
  // Fix the minority size at floor(kappa n) instead of sampling labels iid.
  bool fixed_minority_count = false;
  MuRule mu_rule = MuRule::fixed;
  GammaRule gamma_rule = GammaRule::fixed;
};

/// One fully resolved grid point of a scenario.
struct ScenarioPoint {
  int n = 0;
  int minority_count = -1;  // >= 0 fixes the minority size; -1 keeps iid
  SbmParams model{0.25, 0.25, 0.0, 0.0};
  ErrorRatesUndirected rates{0.0, 0.0, 0.0};
  double sweep_value = 0.0;
  std::string label;  // reporting coordinate, e.g. "n=100,beta=0.15"
};

/**
 * Expands n_grid x sweep_grid in declaration order (sizes outer, sweep
 * inner) and resolves the coupling rules.  Each point is checked for
 * feasibility before any sampling: block cells and all three deletion rates
 * must lie in [0, 1].  The first offending point raises
 * InfeasibleParameterError naming its label; structural problems (empty
 * grids, sweep/sweep_grid mismatch, bad base parameters) raise DomainError.
 */
std::vector<ScenarioPoint> scenario_points(const ScenarioSpec& spec);

/// One aggregated metric at one grid point.
struct ResultRow {
  std::string scenario;
  std::string point;
  std::string method;
  std::string metric;
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(reps)
  int reps = 0;     // replicates aggregated into this row
  std::uint64_t seed = 0;  // master seed of the run
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
};

/**
 * Canonical detection scenarios 'A'..'D': kappa = 1/4 with the minority
 * count fixed at floor(n/4), n in {20, 50, 100}, level 0.1, tolerance
 * beta_bar = 0.1, 400 replicates.
 *   A: q = 0.2, gamma = 0, sweep beta over {0, 0.05, ..., 0.3}, mu
 *      compensated at 1 / (2 (1 - beta));
 *   B: q = 0.25, beta = 0.2, gamma = 0, sweep mu over {0, 0.25, ..., 1.5};
 *   C: q = 0.25, mu = 0, beta = 0.25, sweep gamma over {0, 0.2, ..., 1};
 *   D: mu = 0.1, beta = 0.2, gamma = 0.5, sweep q over {0.1, ..., 0.5}.
 */
ScenarioSpec detection_scenario(char which);

/**
 * Canonical ranking-correction scenarios 'A'..'C': kappa = 0.4, q = 0.5,
 * iid labels, n in {50, 100, 200, 300, 500}, 100 replicates.
 *   A: mu = -2, beta = 0.3, gamma = sqrt(n)/5 (within-group deletion 0.1);
 *   B: mu = -2, no observation errors;
 *   C: mu = 0, beta = 0.3, gamma = sqrt(n)/5.
 */
ScenarioSpec correction_scenario(char which);

/// Profile-estimator study: kappa = 0.4, q = 0.05, iid labels,
/// n in {200, 1000}, sweep mu over {1, 2}, 200 replicates.
ScenarioSpec rho_estimation_scenario();

/// Top-fraction grid K/n at which run_rho_estimation evaluates estimators.
std::vector<double> default_rho_z_grid();

/**
 * Empirical rejection rate of the two-replicate bias test at every scenario
 * point.  Replicate r of point p uses the stream seeded by
 * derive_stream_seed(master_seed, spec.name, p, r); aggregation order is
 * fixed by replicate index, so results are bitwise reproducible.
 * Replicates where estimation degenerates (a block with no edges at small
 * n) count as non-rejections and are tallied in a separate
 * "degenerate-rate" row.
 */
ExperimentResult run_detection_power(const ScenarioSpec& spec,
                                     std::uint64_t master_seed);

/**
 * Ranking-quality comparison at every scenario point.  Per replicate, draws
 * a construct network and two noisy replicates, then compares three
 * rankings of the first noisy replicate against the construct-degree
 * ranking: "uncorrected" (degree order), "proportional" (constant-share
 * correction), and "plug-in" (estimated-profile correction).  Emits mean
 * Spearman correlation per method plus per-group rank-bias quartiles
 * (construct rank minus method rank; positive means ranked too high).
 * Replicates where plug-in estimation degenerates are skipped for all
 * methods and tallied in a "degenerate-rate" row.
 */
ExperimentResult run_correction_experiment(const ScenarioSpec& spec,
                                           std::uint64_t master_seed);

/**
 * RMSE of two estimators of the expected top-K minority share, against a
 * ground truth estimated from `truth_draws` independent construct draws per
 * point (streams labelled "<name>:truth").  "empirical" reads the share off
 * the realized degree ranking; "plug-in" evaluates the asymptotic profile
 * at moment estimates fitted to the realized construct network.  Evaluated
 * at K = max(1, floor(n z)) for each z in z_grid; also emits the oracle
 * mean share ("rho-mean") and the paired difference of squared errors
 * ("mse-diff", plug-in minus empirical), whose sign measures which
 * estimator wins.
 */
ExperimentResult run_rho_estimation(const ScenarioSpec& spec,
                                    std::uint64_t master_seed,
                                    const std::vector<double>& z_grid =
                                        default_rho_z_grid(),
                                    int truth_draws = 2000);

/// Signal regimes for the ranking phase checks, all at kappa = q = 1/4 with
/// within-group rate lifts delta_g = p_g - q:
///   vanishing          — delta1 = delta2 = n^(-3/4), below the 1/sqrt(n)
///                        resolution of degree ranking;
///   majority_dominant  — delta2 = 5 sqrt(log n / n), delta1 = n^(-3/4);
///   minority_dominant  — delta1 = 5 sqrt(log n / n), delta2 = n^(-3/4).
enum class PhaseKind { vanishing, majority_dominant, minority_dominant };

/**
 * Mean minority share among the top floor(n z) construct-degree ranks for
 * z in {0.1, 0.25}, under the requested signal regime.  The three regimes
 * drive the share toward kappa, 0 (for z <= 1 - kappa), and 1 (for
 * z <= kappa) respectively as n grows.
 */
ExperimentResult run_phase_check(PhaseKind kind, int n, int reps,
                                 std::uint64_t master_seed);

}  // namespace netrank
