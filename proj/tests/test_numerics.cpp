#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "netrank/errors.hpp"
#include "netrank/numerics.hpp"
#include "netrank/rng.hpp"

using namespace netrank;

namespace {

// ---- test-local oracles, independent of the library implementations ----

// Adaptive Simpson quadrature with recursive error control.
double simpson_rule(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_rule(a, m, fa, flm, fm);
  const double right = simpson_rule(m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-13) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson_rule(a, b, fa, fm, fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

double normal_density(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
}

// Normal cdf by quadrature of the density from 0.
double normal_cdf_oracle(double x) {
  if (x == 0.0) return 0.5;
  const double tail = adaptive_simpson(normal_density, 0.0, std::fabs(x));
  return x > 0.0 ? 0.5 + tail : 0.5 - tail;
}

// Chi-square cdf by quadrature.  The substitution y = t^2 turns the density
// integral into a smooth integrand even for dof = 1, where the density
// diverges at the origin: integral of f(y) dy = integral of 2 t f(t^2) dt.
double chi2_cdf_oracle(int dof, double x) {
  // Gamma(dof/2) for dof = 1..6, as exact closed forms.
  static const double gamma_half_dof[7] = {0.0,
                                           1.7724538509055160273,  // sqrt(pi)
                                           1.0,
                                           0.88622692545275801365,  // sqrt(pi)/2
                                           1.0,
                                           1.3293403881791370205,  // 3 sqrt(pi)/4
                                           2.0};
  const double a = 0.5 * dof;
  const double norm = std::pow(2.0, a) * gamma_half_dof[dof];
  // 2 t (t^2)^(a-1) simplifies to 2 t^(dof-1), finite at t = 0 for all dof.
  const auto integrand = [&](double t) {
    return 2.0 * std::pow(t, dof - 1) * std::exp(-0.5 * t * t) / norm;
  };
  return adaptive_simpson(integrand, 0.0, std::sqrt(x));
}

double chi2_quantile_oracle(int dof, double p) {
  double lo = 0.0, hi = 200.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_cdf_oracle(dof, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("std_normal_cdf basics and symmetry") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  for (double x = -8.0; x <= 8.0; x += 0.17) {
    CHECK(std::fabs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-12);
  }
  // Nondecreasing on a sampled grid.
  double prev = 0.0;
  for (double x = -10.0; x <= 10.0; x += 0.05) {
    const double c = std_normal_cdf(x);
    CHECK(c >= prev);
    prev = c;
  }
  // Tail saturation.
  CHECK(std_normal_cdf(-60.0) == 0.0);
  CHECK(std_normal_cdf(60.0) == 1.0);
}

TEST_CASE("std_normal_cdf against quadrature oracle") {
  CHECK(std::fabs(std_normal_cdf(1.959964) - 0.975) <= 1e-6);
  for (double x : {-3.7, -2.0, -1.0, -0.31, 0.42, 1.0, 1.959964, 2.8, 4.4}) {
    CHECK(std::fabs(std_normal_cdf(x) - normal_cdf_oracle(x)) <= 1e-11);
  }
}

TEST_CASE("std_normal_cdf against libm erfc") {
  // Independent cross-check: glibc's erfc is accurate to ~1 ulp.
  for (double x = -36.0; x <= 36.0; x += 0.251) {
    const double ref = 0.5 * std::erfc(-x / std::sqrt(2.0));
    CHECK(std::fabs(std_normal_cdf(x) - ref) <= 1e-13);
  }
}

TEST_CASE("std_normal_quantile") {
  CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::fabs(std_normal_quantile(0.975) - 1.959964) <= 1e-6);
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    CHECK(std::fabs(std_normal_quantile(std_normal_cdf(x)) - x) <= 1e-8);
  }
  for (double p = 0.001; p < 1.0; p += 0.0493) {
    CHECK(std::fabs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-10);
  }
  CHECK_THROWS_AS(std_normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(1.0), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(-0.2), DomainError);
}

TEST_CASE("chi_square_quantile closed forms and frozen oracle values") {
  // dof 2 is Exponential(1/2): quantile(p) = -2 ln(1-p).
  CHECK(std::fabs(chi_square_quantile(0.9, 2) - 4.605170185988091) <= 1e-6);
  CHECK(std::fabs(chi_square_quantile(0.9, 3) - 6.2514) <= 1e-3);
  CHECK(std::fabs(chi_square_quantile(0.9, 4) - 7.7794) <= 1e-3);
  CHECK_THROWS_AS(chi_square_quantile(0.5, 0), DomainError);
  CHECK_THROWS_AS(chi_square_quantile(0.5, 11), DomainError);
  CHECK_THROWS_AS(chi_square_quantile(0.0, 3), DomainError);
  CHECK_THROWS_AS(chi_square_quantile(1.0, 3), DomainError);
}

TEST_CASE("chi_square_quantile against density-integration oracle") {
  for (int dof = 1; dof <= 6; ++dof) {
    for (double p : {0.5, 0.9, 0.95, 0.99}) {
      const double q = chi_square_quantile(p, dof);
      CHECK(std::fabs(q - chi2_quantile_oracle(dof, p)) <= 1e-6);
      // Definitional residual: P(dof/2, q/2) = p.
      CHECK(std::fabs(regularized_gamma_p(0.5 * dof, 0.5 * q) - p) <= 1e-9);
    }
  }
}

TEST_CASE("chi_square_quantile monotone in p and dof") {
  for (int dof = 1; dof <= 10; ++dof) {
    double prev = 0.0;
    for (double p = 0.05; p < 1.0; p += 0.05) {
      const double q = chi_square_quantile(p, dof);
      CHECK(q > prev);
      prev = q;
    }
  }
  for (double p : {0.1, 0.5, 0.9, 0.99}) {
    double prev = 0.0;
    for (int dof = 1; dof <= 10; ++dof) {
      const double q = chi_square_quantile(p, dof);
      CHECK(q > prev);
      prev = q;
    }
  }
}

TEST_CASE("mixture_cdf") {
  GaussianMixture2 collapsed{0.4, 0.0, 0.0};
  CHECK(mixture_cdf(collapsed, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  GaussianMixture2 m{0.4, 0.4, 0.6};
  CHECK(mixture_cdf(m, -40.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(mixture_cdf(m, 40.0) == doctest::Approx(1.0).epsilon(1e-14));
  const double expect =
      0.4 * std_normal_cdf(0.1) + 0.6 * std_normal_cdf(-0.1);
  CHECK(mixture_cdf(m, 0.5) == doctest::Approx(expect).epsilon(1e-15));
  CHECK_THROWS_AS(mixture_cdf(GaussianMixture2{0.0, 0.0, 0.0}, 0.1),
                  DomainError);
  CHECK_THROWS_AS(mixture_cdf(GaussianMixture2{1.0, 0.0, 0.0}, 0.1),
                  DomainError);
}

TEST_CASE("invert_monotone_cdf") {
  const auto ident = [](double x) { return x; };
  CHECK(std::fabs(invert_monotone_cdf(ident, 0.3, 0.0, 1.0) - 0.3) <= 1e-12);
  CHECK(std::fabs(invert_monotone_cdf(std_normal_cdf, 0.5, -10.0, 10.0)) <=
        1e-10);
  CHECK_THROWS_AS(invert_monotone_cdf(ident, 2.0, 0.0, 1.0), BracketError);
  CHECK_THROWS_AS(invert_monotone_cdf(ident, -1.0, 0.0, 1.0), BracketError);
}

TEST_CASE("invert_monotone_cdf matches dense grid search on a mixture") {
  // Mixture from the kappa=0.4, q=0.15, mu1=mu2=1 parameterization:
  // means kappa*mu/sqrt(q(1-q)) and (1-kappa)*mu/sqrt(q(1-q)).
  const double s = std::sqrt(0.15 * 0.85);
  GaussianMixture2 m{0.4, 0.4 / s, 0.6 / s};
  const auto f = [&](double x) { return mixture_cdf(m, x); };
  const double lo = m.mean1 - 10.0, hi = m.mean2 + 10.0;
  for (double z : {0.1, 0.3, 0.5, 0.9}) {
    const double p = 1.0 - z;
    const double x = invert_monotone_cdf(f, p, lo, hi);
    // Two-stage grid search oracle: coarse pass, then 1e-7 steps.
    double best = lo, best_err = 1e9;
    for (double g = lo; g <= hi; g += 1e-3) {
      const double e = std::fabs(f(g) - p);
      if (e < best_err) {
        best_err = e;
        best = g;
      }
    }
    double fine_best = best;
    best_err = 1e9;
    for (double g = best - 2e-3; g <= best + 2e-3; g += 1e-7) {
      const double e = std::fabs(f(g) - p);
      if (e < best_err) {
        best_err = e;
        fine_best = g;
      }
    }
    CHECK(std::fabs(x - fine_best) <= 1e-6);
  }
}

TEST_CASE("invert_monotone_cdf round-trips random mixtures") {
  RngStream rng(20240811);
  for (int i = 0; i < 100; ++i) {
    GaussianMixture2 m{0.05 + 0.9 * rng.next_uniform(),
                       -3.0 + 6.0 * rng.next_uniform(),
                       -3.0 + 6.0 * rng.next_uniform()};
    const double p = 0.02 + 0.96 * rng.next_uniform();
    const auto f = [&](double x) { return mixture_cdf(m, x); };
    const double lo = std::min(m.mean1, m.mean2) - 10.0;
    const double hi = std::max(m.mean1, m.mean2) + 10.0;
    const double x = invert_monotone_cdf(f, p, lo, hi);
    CHECK(std::fabs(f(x) - p) <= 1e-8);
  }
}

TEST_CASE("gauss_legendre_integrate") {
  const auto linear = [](double x) { return x; };
  const auto cubic = [](double x) { return x * x * x; };
  CHECK(std::fabs(gauss_legendre_integrate(linear, 0.0, 1.0, 8) - 0.5) <=
        1e-15);
  CHECK(std::fabs(gauss_legendre_integrate(cubic, 0.0, 1.0, 8) - 0.25) <=
        1e-15);
  const auto shifted_cdf = [](double u) { return std_normal_cdf(1.0 - u); };
  const double oracle = adaptive_simpson(shifted_cdf, 0.0, 1.0);
  CHECK(std::fabs(gauss_legendre_integrate(shifted_cdf, 0.0, 1.0, 64) -
                  oracle) <= 1e-10);
  CHECK_THROWS_AS(gauss_legendre_integrate(linear, 1.0, 0.0, 8), DomainError);
  CHECK_THROWS_AS(gauss_legendre_integrate(linear, 0.0, 1.0, 1), DomainError);
}

TEST_CASE("invert_matrix basics") {
  const SmallMatrix id3 = SmallMatrix::identity(3);
  const SmallMatrix inv_id = invert_matrix(id3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(inv_id.at(r, c) == doctest::Approx(r == c ? 1.0 : 0.0));

  SmallMatrix d(2, 2);
  d.at(0, 0) = 2.0;
  d.at(1, 1) = 4.0;
  const SmallMatrix dinv = invert_matrix(d);
  CHECK(dinv.at(0, 0) == doctest::Approx(0.5));
  CHECK(dinv.at(1, 1) == doctest::Approx(0.25));
  CHECK(dinv.at(0, 1) == doctest::Approx(0.0));

  SmallMatrix zero(3, 3);
  CHECK_THROWS_AS(invert_matrix(zero), SingularMatrixError);
  SmallMatrix rank1(2, 2);
  rank1.at(0, 0) = rank1.at(0, 1) = rank1.at(1, 0) = rank1.at(1, 1) = 1.0;
  CHECK_THROWS_AS(invert_matrix(rank1), SingularMatrixError);
  SmallMatrix rect(2, 3);
  CHECK_THROWS_AS(invert_matrix(rect), DimensionError);
}

TEST_CASE("invert_matrix residual on 100 random well-conditioned matrices") {
  RngStream rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));  // 2..6
    SmallMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) m.at(r, c) = 2.0 * rng.next_uniform() - 1.0;
      m.at(r, r) += 2.0 * n;  // diagonal dominance keeps conditioning mild
    }
    const SmallMatrix inv = invert_matrix(m);
    const SmallMatrix prod = multiply(m, inv);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        CHECK(std::fabs(prod.at(r, c) - (r == c ? 1.0 : 0.0)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("quadratic_form") {
  const SmallMatrix id2 = SmallMatrix::identity(2);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(quadratic_form(zero, id2) == 0.0);
  const std::vector<double> v34{3.0, 4.0};
  CHECK(quadratic_form(v34, id2) == doctest::Approx(25.0));

  RngStream rng(5);
  SmallMatrix sym(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = r; c < 3; ++c)
      sym.at(r, c) = sym.at(c, r) = 2.0 * rng.next_uniform() - 1.0;
  const std::vector<double> v{1.3, -0.2, 0.7};
  double brute = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) brute += v[r] * sym.at(r, c) * v[c];
  CHECK(quadratic_form(v, sym) == doctest::Approx(brute).epsilon(1e-14));

  const std::vector<double> wrong{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(quadratic_form(wrong, id2), DimensionError);
}

TEST_CASE("is_positive_definite") {
  CHECK(is_positive_definite(SmallMatrix::identity(4)));
  SmallMatrix indef(2, 2);
  indef.at(0, 0) = indef.at(1, 1) = 1.0;
  indef.at(0, 1) = indef.at(1, 0) = 2.0;
  CHECK_FALSE(is_positive_definite(indef));
  SmallMatrix zero(2, 2);
  CHECK_FALSE(is_positive_definite(zero));
}

TEST_CASE("SmallMatrix shape validation") {
  CHECK_THROWS_AS(SmallMatrix(0, 2), DimensionError);
  CHECK_THROWS_AS(SmallMatrix(7, 2), DimensionError);
  SmallMatrix m(2, 2);
  CHECK_THROWS_AS(m.at(2, 0), DimensionError);
  CHECK_THROWS_AS(multiply(SmallMatrix(2, 3), SmallMatrix(2, 3)),
                  DimensionError);
}
