#pragma once

namespace tvrisk {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF for p in (0,1). Acklam's rational
/// approximation refined by one Halley step against erfc; accurate to
/// near machine precision over the full open interval.
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a,x), a > 0, x >= 0.
/// Series for x < a+1, continued fraction otherwise.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

/// Chi-square survival function Pr[X > x] with df degrees of freedom.
double chi_square_sf(double x, int df);

}  // namespace tvrisk
