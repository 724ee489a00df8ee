#include "netrank/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "netrank/errors.hpp"

namespace netrank {

namespace {

void check_dims(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows > SmallMatrix::kMaxDim ||
      cols > SmallMatrix::kMaxDim) {
    throw DimensionError("SmallMatrix dimensions must be in 1..6, got " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

SmallMatrix::SmallMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_{} {
  check_dims(rows, cols);
}

SmallMatrix SmallMatrix::identity(int n) {
  SmallMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

double& SmallMatrix::at(int r, int c) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
    throw DimensionError("SmallMatrix index out of range");
  }
  return a_[static_cast<std::size_t>(r) * kMaxDim + c];
}

double SmallMatrix::at(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
    throw DimensionError("SmallMatrix index out of range");
  }
  return a_[static_cast<std::size_t>(r) * kMaxDim + c];
}

SmallMatrix SmallMatrix::transpose() const {
  SmallMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

double SmallMatrix::max_abs() const {
  double m = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m = std::max(m, std::fabs(at(r, c)));
  return m;
}

SmallMatrix multiply(const SmallMatrix& a, const SmallMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matrix product shape mismatch");
  }
  SmallMatrix out(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < b.cols(); ++c) {
      double s = 0.0;
      for (int k = 0; k < a.cols(); ++k) s += a.at(r, k) * b.at(k, c);
      out.at(r, c) = s;
    }
  }
  return out;
}

SmallMatrix invert_matrix(const SmallMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("only square matrices can be inverted");
  }
  const int n = m.rows();
  // Pivot tolerance is relative to the largest entry of the input so that
  // uniformly scaled matrices are treated identically.
  const double tol = 1e-12 * std::max(m.max_abs(), 1e-300);

  // Gauss-Jordan on [A | I] with partial pivoting.
  double aug[SmallMatrix::kMaxDim][2 * SmallMatrix::kMaxDim] = {};
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug[r][c] = m.at(r, c);
    aug[r][n + r] = 1.0;
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(aug[r][col]) > std::fabs(aug[pivot][col])) pivot = r;
    }
    if (std::fabs(aug[pivot][col]) < tol) {
      throw SingularMatrixError("matrix is singular to working precision");
    }
    if (pivot != col) {
      for (int c = 0; c < 2 * n; ++c) std::swap(aug[pivot][c], aug[col][c]);
    }
    const double inv_p = 1.0 / aug[col][col];
    for (int c = 0; c < 2 * n; ++c) aug[col][c] *= inv_p;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = aug[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 2 * n; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  SmallMatrix inv(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv.at(r, c) = aug[r][n + c];
  return inv;
}

double quadratic_form(std::span<const double> v, const SmallMatrix& theta) {
  const int n = static_cast<int>(v.size());
  if (theta.rows() != n || theta.cols() != n) {
    throw DimensionError("quadratic form dimension mismatch");
  }
  double s = 0.0;
  for (int r = 0; r < n; ++r) {
    double row = 0.0;
    for (int c = 0; c < n; ++c) row += theta.at(r, c) * v[c];
    s += v[r] * row;
  }
  return s;
}

bool is_positive_definite(const SmallMatrix& m) {
  if (m.rows() != m.cols()) return false;
  const int n = m.rows();
  // Sylvester's criterion: every leading principal minor must be positive.
  // Each minor's determinant comes from elimination with partial pivoting.
  for (int k = 1; k <= n; ++k) {
    double a[SmallMatrix::kMaxDim][SmallMatrix::kMaxDim];
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) a[r][c] = m.at(r, c);
    double det = 1.0;
    for (int col = 0; col < k; ++col) {
      int pivot = col;
      for (int r = col + 1; r < k; ++r) {
        if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
      }
      if (a[pivot][col] == 0.0) return false;
      if (pivot != col) {
        for (int c = 0; c < k; ++c) std::swap(a[pivot][c], a[col][c]);
        det = -det;
      }
      det *= a[col][col];
      for (int r = col + 1; r < k; ++r) {
        const double f = a[r][col] / a[col][col];
        for (int c = col; c < k; ++c) a[r][c] -= f * a[col][c];
      }
    }
    if (!(det > 0.0)) return false;
  }
  return true;
}

namespace {

// ln Gamma via the Lanczos approximation (absolute error < 2e-10 on a > 0,
// far below the iteration tolerances that consume it).
double gammln(double a) {
  static const double cof[6] = {76.18009172947146,     -86.50532032941677,
                                24.01409824083091,     -1.231739572450155,
                                0.1208650973866179e-2, -0.5395239384953e-5};
  double x = a;
  double y = a;
  double tmp = x + 5.5;
  tmp -= (x + 0.5) * std::log(tmp);
  double ser = 1.000000000190015;
  for (int j = 0; j < 6; ++j) ser += cof[j] / ++y;
  return -tmp + std::log(2.5066282746310005 * ser / x);
}

constexpr int kGammaItmax = 500;
constexpr double kGammaEps = 1e-16;
constexpr double kGammaFpmin = 1e-300;

// Series expansion of P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x, double gln) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kGammaItmax; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - gln);
}

// Lentz continued fraction for Q(a, x); converges quickly for x > a + 1.
double gamma_q_contfrac(double a, double x, double gln) {
  double b = x + 1.0 - a;
  double c = 1.0 / kGammaFpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaItmax; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kGammaFpmin) d = kGammaFpmin;
    c = b + an / c;
    if (std::fabs(c) < kGammaFpmin) c = kGammaFpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

// (P(a,x), Q(a,x)) with each tail computed by the method that is accurate
// for it, so neither suffers cancellation.
std::pair<double, double> gamma_pq(double a, double x, double gln) {
  if (x <= 0.0) return {0.0, 1.0};
  if (x < a + 1.0) {
    const double p = gamma_p_series(a, x, gln);
    return {p, 1.0 - p};
  }
  const double q = gamma_q_contfrac(a, x, gln);
  return {1.0 - q, q};
}

// ln Gamma(1/2) = ln sqrt(pi); the normal cdf path uses a = 1/2 only.
constexpr double kLnGammaHalf = 0.5723649429247000870717137;

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || !std::isfinite(x)) {
    throw DomainError("regularized_gamma_p requires a > 0 and x >= 0");
  }
  return gamma_pq(a, x, gammln(a)).first;
}

double std_normal_cdf(double x) {
  if (std::isnan(x)) throw DomainError("std_normal_cdf: x is NaN");
  if (x == 0.0) return 0.5;
  // Phi(x) = (1 + erf(x/sqrt 2))/2 with erf(u) = P(1/2, u^2); for negative x
  // the complementary tail Q gives the left tail without cancellation.
  const auto [p, q] = gamma_pq(0.5, 0.5 * x * x, kLnGammaHalf);
  return x > 0.0 ? 0.5 * (1.0 + p) : 0.5 * q;
}

double std_normal_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("std_normal_quantile requires p in (0,1)");
  }
  // Plain bisection: the cdf is cheap, and 70 halvings of [-40, 40] leave an
  // interval ~7e-21 wide, far inside the 1e-10 cdf-residual contract.
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 70; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std_normal_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double chi_square_quantile(double p, int dof) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("chi_square_quantile requires p in (0,1)");
  }
  if (dof < 1 || dof > 10) {
    throw DomainError("chi_square_quantile supports dof in 1..10");
  }
  const double a = 0.5 * dof;
  const double gln = gammln(a);
  const auto cdf = [&](double x) { return gamma_pq(a, 0.5 * x, gln).first; };

  // Bracket the quantile, then run Newton safeguarded by bisection.
  double lo = 0.0;
  double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 10.0;
  while (cdf(hi) < p) hi *= 2.0;
  double x = std::min(static_cast<double>(dof), hi);
  for (int it = 0; it < 200; ++it) {
    const double f = cdf(x) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (std::fabs(f) <= 1e-12 || hi - lo <= 1e-14 * std::max(1.0, x)) break;
    // Chi-square density at x, guarded against the dof=1 singularity at 0.
    const double dens =
        0.5 * std::exp((a - 1.0) * std::log(0.5 * x) - 0.5 * x - gln);
    double next = x - f / std::max(dens, 1e-300);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double mixture_cdf(const GaussianMixture2& m, double x) {
  if (!(m.weight1 > 0.0) || !(m.weight1 < 1.0) || !std::isfinite(m.mean1) ||
      !std::isfinite(m.mean2)) {
    throw DomainError("mixture_cdf requires weight1 in (0,1), finite means");
  }
  return m.weight1 * std_normal_cdf(x - m.mean1) +
         (1.0 - m.weight1) * std_normal_cdf(x - m.mean2);
}

double invert_monotone_cdf(const std::function<double(double)>& f, double p,
                           double lo, double hi) {
  if (!(lo < hi)) throw DomainError("invert_monotone_cdf requires lo < hi");
  if (f(lo) > p || f(hi) < p) {
    throw BracketError("target value outside [f(lo), f(hi)]");
  }
  // 200 iterations cap the loop; the width test exits long before on any
  // bracket of sane magnitude.
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

struct GaussLegendreTable {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;  // matching weights
};

// Newton iteration on the Legendre polynomial roots; standard construction.
GaussLegendreTable build_gauss_legendre(int n) {
  GaussLegendreTable t;
  t.nodes.resize(n);
  t.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    t.nodes[i] = -z;
    t.nodes[n - 1 - i] = z;
    t.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    t.weights[n - 1 - i] = t.weights[i];
  }
  return t;
}

const GaussLegendreTable& gauss_legendre_table(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendreTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace

double gauss_legendre_integrate(const std::function<double(double)>& f,
                                double a, double b, int nodes) {
  if (!(a < b)) throw DomainError("gauss_legendre_integrate requires a < b");
  if (nodes < 2) throw DomainError("gauss_legendre_integrate needs >= 2 nodes");
  const GaussLegendreTable& t = gauss_legendre_table(nodes);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < nodes; ++i) {
    s += t.weights[i] * f(mid + half * t.nodes[i]);
  }
  return s * half;
}

}  // namespace netrank
