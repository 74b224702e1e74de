#pragma once

// Scalar distribution functions used across the library: regularized
// incomplete gamma, chi-square CDF/quantile, standard normal CDF/quantile.
// All routines target ~1e-14 relative accuracy in double precision.

namespace munic {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// CDF of Gamma(shape, rate) at x.
double gamma_cdf(double x, double shape, double rate);

// Inverse of gamma_p in x for fixed shape a: gamma_p(a, result) = u.
double gamma_p_inverse(double a, double u);

double chi2_cdf(double x, double dof);
double chi2_sf(double x, double dof);        // upper tail
double chi2_quantile(double u, double dof);  // lower-tail quantile

double normal_cdf(double x);
double normal_quantile(double u);

// Upper tail of the Kolmogorov distribution: P{sup |B(t)| > x} for the
// Brownian-bridge sup, used to turn KS statistics into p-values.
double kolmogorov_sf(double x);

}  // namespace munic
