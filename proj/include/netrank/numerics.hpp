#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>

namespace netrank {

/**
 * Dense real matrix with at most 6 rows and 6 columns, stored row-major.
 *
 * Every covariance/Jacobian object in the statistical layer fits in 6x6
 * (the largest is the blockdiagonal moment covariance), so a fixed-capacity
 * value type avoids allocation and keeps the linear algebra trivial.
 */
class SmallMatrix {
 public:
  static constexpr int kMaxDim = 6;

  SmallMatrix() : rows_(0), cols_(0), a_{} {}
  SmallMatrix(int rows, int cols);

  static SmallMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& at(int r, int c);
  double at(int r, int c) const;

  double& operator()(int r, int c) { return at(r, c); }
  double operator()(int r, int c) const { return at(r, c); }

  SmallMatrix transpose() const;

  /// Largest absolute entry (0 for an empty matrix).
  double max_abs() const;

 private:
  int rows_, cols_;
  std::array<double, kMaxDim * kMaxDim> a_;
};

/// Matrix product; throws DimensionError on shape mismatch.
SmallMatrix multiply(const SmallMatrix& a, const SmallMatrix& b);

/**
 * Inverse via Gaussian elimination with partial pivoting.
 *
 * Throws SingularMatrixError when a pivot's magnitude falls below
 * 1e-12 times the largest absolute entry of the input.
 */
SmallMatrix invert_matrix(const SmallMatrix& m);

/// v' * theta * v; throws DimensionError unless theta is square with v's size.
double quadratic_form(std::span<const double> v, const SmallMatrix& theta);

/**
 * True when every leading principal minor of a symmetric matrix is positive,
 * i.e. the matrix is positive definite.  Used to validate plug-in precision
 * matrices before trusting a chi-square calibration.
 */
bool is_positive_definite(const SmallMatrix& m);

/**
 * Two-component Gaussian location mixture with unit component variances:
 * weight1 * N(mean1, 1) + (1 - weight1) * N(mean2, 1).
 */
struct GaussianMixture2 {
  double weight1;
  double mean1;
  double mean2;
};

/**
 * Standard normal cdf.
 *
 * Computed through the regularized incomplete gamma function
 * (Phi(x) = 1 - Q(1/2, x^2/2)/2 for x >= 0, symmetric otherwise), evaluated
 * by series/continued-fraction iteration to relative accuracy ~1e-15;
 * absolute error is below 1e-12 everywhere.  Saturates to 0/1 in the far
 * tails instead of raising.
 */
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/**
 * Standard normal quantile: x with |std_normal_cdf(x) - p| <= 1e-10.
 * Throws DomainError for p outside (0, 1).
 */
double std_normal_quantile(double p);

/**
 * Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
 * Series expansion for x < a + 1, Lentz continued fraction otherwise.
 */
double regularized_gamma_p(double a, double x);

/**
 * Chi-square quantile: q with P(dof/2, q/2) = p to within 1e-9.
 * Supported for dof in 1..10; throws DomainError otherwise.
 */
double chi_square_quantile(double p, int dof);

/// Mixture cdf weight1*Phi(x - mean1) + (1 - weight1)*Phi(x - mean2).
double mixture_cdf(const GaussianMixture2& m, double x);

/**
 * Bisection inverse of a nondecreasing function: x in [lo, hi] with
 * f(x) = p, refined to interval width <= 1e-12.  Throws BracketError when
 * p lies outside [f(lo), f(hi)].
 */
double invert_monotone_cdf(const std::function<double(double)>& f, double p,
                           double lo, double hi);

/**
 * Gauss-Legendre estimate of the integral of f over [a, b] with the given
 * node count (>= 2).  Nodes/weights are computed once per count and cached.
 */
double gauss_legendre_integrate(const std::function<double(double)>& f,
                                double a, double b, int nodes);

}  // namespace netrank
