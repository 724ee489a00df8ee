#pragma once

#include <functional>
#include <vector>

#include "netrank/models.hpp"

namespace netrank {

/// Asymptotic minority representation profile sampled on a z grid.
struct RhoStarCurve {
  std::vector<double> grid;    // z values in (0, 1]
  std::vector<double> values;  // rho*(z), each in [0, 1]
};

/**
 * Limiting minority representation among the top-floor(nz) degree ranks of a
 * two-group SBM with within-group rates q + mu_g/sqrt(n).
 *
 * The standardized group degree means are kappa*mu1/sqrt(q(1-q)) and
 * (1-kappa)*mu2/sqrt(q(1-q)); the ranking threshold c* is the (1-z) quantile
 * of the two-component Gaussian location mixture, and the result is
 * (kappa/z) * (1 - Phi(c* - mean1)), clamped to [0, 1].
 *
 * At z = 1 the quantile target collapses below the bracket and the bracket
 * lower edge is used, which returns kappa to within Phi(-10) ~ 1e-23.
 */
double rho_star_sbm(double z, double kappa, double q, double mu1, double mu2);

/**
 * Graphon counterpart: mu_fn is the standardized mean-degree function on
 * [0, 1], minority latents uniform on (0, kappa), majority on (kappa, 1).
 * Group CDFs F_g(x) = (1/len_g) Int_{I_g} Phi(x - mu(u)) du are computed
 * with 64-node Gauss-Legendre quadrature per interval.
 */
double rho_star_graphon(double z, double kappa,
                        const std::function<double(double)>& mu_fn);

/**
 * Standardized mean function mu(u) = (Theta(u) - theta_bar) / sqrt(q(1-q))
 * of a graphon spec, where Theta(u) = Int_0^1 theta(u, v) dv and theta_bar
 * is its average.  Integrals are split at kappa so block-constant families
 * are handled exactly.
 */
std::function<double(double)> graphon_mean_function(const GraphonSpec& spec);

/// Default curve grid z in {0.01, 0.02, ..., 1.00}.
std::vector<double> default_z_grid();

/// Pointwise rho*(z) over a grid for an SBM parameterization.
RhoStarCurve rho_star_curve(const SbmParams& params,
                            const std::vector<double>& grid = default_z_grid());

/// Pointwise rho*(z) over a grid for a graphon spec.
RhoStarCurve rho_star_curve(const GraphonSpec& spec,
                            const std::vector<double>& grid = default_z_grid());

}  // namespace netrank
