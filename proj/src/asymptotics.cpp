#include "netrank/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "netrank/errors.hpp"
#include "netrank/numerics.hpp"

namespace netrank {

namespace {

constexpr int kQuadratureNodes = 64;
constexpr double kBracketPad = 10.0;  // Phi mass beyond 10 sigma < 1e-23

void check_z_kappa(double z, double kappa) {
  if (!(z > 0.0 && z <= 1.0)) throw DomainError("z must lie in (0, 1]");
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw DomainError("kappa must lie in (0, 1)");
  }
}

// Quantile of a monotone CDF with the z = 1 (and symmetric) edge handled by
// returning the clamped bracket edge instead of failing the bracket test.
double mixture_quantile(const std::function<double(double)>& cdf,
                        double target, double lo, double hi) {
  if (target <= cdf(lo)) return lo;
  if (target >= cdf(hi)) return hi;
  return invert_monotone_cdf(cdf, target, lo, hi);
}

}  // namespace

double rho_star_sbm(double z, double kappa, double q, double mu1, double mu2) {
  check_z_kappa(z, kappa);
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0, 1)");
  const double scale = std::sqrt(q * (1.0 - q));
  const double mean1 = kappa * mu1 / scale;
  const double mean2 = (1.0 - kappa) * mu2 / scale;
  const auto cdf = [&](double x) {
    return kappa * std_normal_cdf(x - mean1) +
           (1.0 - kappa) * std_normal_cdf(x - mean2);
  };
  const double lo = std::min(mean1, mean2) - kBracketPad;
  const double hi = std::max(mean1, mean2) + kBracketPad;
  const double c_star = mixture_quantile(cdf, 1.0 - z, lo, hi);
  const double rho = (kappa / z) * (1.0 - std_normal_cdf(c_star - mean1));
  return std::clamp(rho, 0.0, 1.0);
}

double rho_star_graphon(double z, double kappa,
                        const std::function<double(double)>& mu_fn) {
  check_z_kappa(z, kappa);
  if (!mu_fn) throw DomainError("mu_fn must be callable");

  // The quadrature re-evaluates mu at the same nodes on every bisection
  // step; memoize so an expensive mean function is only integrated once
  // per node.
  std::map<double, double> cache;
  const auto mu = [&](double u) {
    const auto it = cache.find(u);
    if (it != cache.end()) return it->second;
    const double value = mu_fn(u);
    cache.emplace(u, value);
    return value;
  };

  const auto group_cdf = [&](double x, double a, double b) {
    const double integral = gauss_legendre_integrate(
        [&](double u) { return std_normal_cdf(x - mu(u)); }, a, b,
        kQuadratureNodes);
    return integral / (b - a);
  };
  const auto cdf = [&](double x) {
    return kappa * group_cdf(x, 0.0, kappa) +
           (1.0 - kappa) * group_cdf(x, kappa, 1.0);
  };

  // Bracket the quantile using the observed range of mu on a scan grid.
  double mu_min = 0.0;
  double mu_max = 0.0;
  bool first = true;
  constexpr int kScan = 256;
  for (int i = 0; i <= kScan; ++i) {
    const double u = static_cast<double>(i) / kScan;
    const double value = mu(u);
    if (first || value < mu_min) mu_min = value;
    if (first || value > mu_max) mu_max = value;
    first = false;
  }
  const double lo = mu_min - kBracketPad;
  const double hi = mu_max + kBracketPad;

  const double c_star = mixture_quantile(cdf, 1.0 - z, lo, hi);
  const double rho = (kappa / z) * (1.0 - group_cdf(c_star, 0.0, kappa));
  return std::clamp(rho, 0.0, 1.0);
}

std::function<double(double)> graphon_mean_function(const GraphonSpec& spec) {
  if (!(spec.q > 0.0 && spec.q < 1.0)) {
    throw DomainError("graphon q must lie in (0, 1)");
  }
  if (!(spec.kappa > 0.0 && spec.kappa < 1.0)) {
    throw DomainError("graphon kappa must lie in (0, 1)");
  }
  // Integrals are split at kappa: theta is smooth on each piece for every
  // built-in family (block-constant included), so 64-node quadrature is
  // effectively exact.
  const auto row_mean = [spec](double u) {
    const auto slice = [&](double v) { return spec.theta(u, v); };
    return gauss_legendre_integrate(slice, 0.0, spec.kappa, kQuadratureNodes) +
           gauss_legendre_integrate(slice, spec.kappa, 1.0, kQuadratureNodes);
  };
  const double theta_bar =
      gauss_legendre_integrate(row_mean, 0.0, spec.kappa, kQuadratureNodes) +
      gauss_legendre_integrate(row_mean, spec.kappa, 1.0, kQuadratureNodes);
  const double scale = std::sqrt(spec.q * (1.0 - spec.q));
  return [row_mean, theta_bar, scale](double u) {
    return (row_mean(u) - theta_bar) / scale;
  };
}

std::vector<double> default_z_grid() {
  std::vector<double> grid(100);
  for (int i = 0; i < 100; ++i) {
    grid[static_cast<std::size_t>(i)] = (i + 1) / 100.0;
  }
  return grid;
}

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("curve grid must be non-empty");
  for (double z : grid) {
    if (!(z > 0.0 && z <= 1.0)) {
      throw DomainError("curve grid values must lie in (0, 1]");
    }
  }
}

}  // namespace

RhoStarCurve rho_star_curve(const SbmParams& params,
                            const std::vector<double>& grid) {
  check_grid(grid);
  RhoStarCurve curve;
  curve.grid = grid;
  curve.values.reserve(grid.size());
  for (double z : grid) {
    curve.values.push_back(
        rho_star_sbm(z, params.kappa, params.q, params.mu1, params.mu2));
  }
  return curve;
}

RhoStarCurve rho_star_curve(const GraphonSpec& spec,
                            const std::vector<double>& grid) {
  check_grid(grid);
  const auto mu_fn = graphon_mean_function(spec);
  RhoStarCurve curve;
  curve.grid = grid;
  curve.values.reserve(grid.size());
  for (double z : grid) {
    curve.values.push_back(rho_star_graphon(z, spec.kappa, mu_fn));
  }
  return curve;
}

}  // namespace netrank
