#pragma once

// Special functions and quadrature used by the fitting and testing code.

#include <functional>
#include <limits>

namespace rare::num {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Regularized lower/upper incomplete gamma P(a,x), Q(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a,b), continued fraction (modified Lentz).
double beta_inc(double a, double b, double x);

// Inverse of beta_inc in x, by bisection to `tol` in x.
double beta_quantile(double p, double a, double b, double tol = 1e-10);

double normal_cdf(double z);
double normal_sf(double z);
double normal_pdf(double z);
double normal_quantile(double p);

// Upper tail of chi-squared with `df` degrees of freedom.
double chisq_sf(double x, double df);
double chisq_quantile(double p, double df);

// Upper tail of the F(d1, d2) distribution.
double f_sf(double f, double d1, double d2);

// Adaptive Gauss-Kronrod (7/15) on a finite interval.
struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-12, double rel_tol = 1e-10,
                           int max_depth = 40);

// Bisection for a monotone increasing function g on [lo, hi] with
// g(lo) <= target <= g(hi).
double bisect_increasing(const std::function<double(double)>& g, double target, double lo,
                         double hi, double x_tol, int max_iter = 200);

} // namespace rare::num
