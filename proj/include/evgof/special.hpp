#pragma once

namespace evgof {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal CDF, accurate to ~1e-16 via erfc.
double norm_cdf(double x);

/// Standard normal quantile (Wichura's AS 241, |error| < 1e-14).
double norm_quantile(double p);

/// Regularized incomplete beta function I_x(a, b).
double inc_beta(double a, double b, double x);

/// Student t CDF with (possibly non-integral) df degrees of freedom.
double student_t_cdf(double x, double df);

/// Student t density.
double student_t_pdf(double x, double df);

/// Bivariate standard normal CDF P(X <= x, Y <= y) with correlation rho.
double binorm_cdf(double x, double y, double rho);

/// Debye function D_1(x) = (1/x) * integral_0^x t/(e^t - 1) dt, x != 0.
double debye1(double x);

}  // namespace evgof
