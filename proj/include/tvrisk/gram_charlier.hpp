#pragma once

namespace tvrisk {

/// Conditional shape of a standardized residual: its third and fourth
/// moments. (0, 3) is the Gaussian point; kurt must stay positive.
struct ShapePair {
    double skew = 0.0;
    double kurt = 3.0;
};

struct GcDensityValue {
    double density = 0.0;      // always >= 0 (squared-polynomial form)
    double log_density = 0.0;  // computed in log space, clamped at g == 0
};

/// He_3(x) = x^3 - 3x.
double hermite_he3(double x);

/// He_4(x) = x^4 - 6x^2 + 3.
double hermite_he4(double x);

/// Fourth-order Gram-Charlier correction polynomial
///   g(x) = 1 + (skew/6) He_3(x) + ((kurt-3)/24) He_4(x).
/// Identically 1 at the Gaussian point.
double gc_polynomial(double x, const ShapePair& shape);

/// Normalizing constant of the squared expansion,
///   h = 1 + skew^2/6 + (kurt-3)^2/24.
/// Always >= 1.
double gc_normalizer(const ShapePair& shape);

/// Positivity-corrected Gram-Charlier density
///   f(x) = phi(x) g(x)^2 / h.
/// The squared polynomial keeps the density nonnegative for every shape;
/// h renormalizes it to integrate to one. log_density is assembled in log
/// space; at the isolated zeros of g, log|g| is clamped to log(1e-150) so
/// downstream likelihoods stay finite.
GcDensityValue gc_density(double x, const ShapePair& shape);

/// Floor applied to |g| inside log terms. Isolated polynomial zeros would
/// otherwise send a single observation's log-likelihood to -infinity.
inline constexpr double kGcPolynomialFloor = 1e-150;

/// Per-observation log-likelihood of a residual with conditional variance
/// sigma^2 under the Gram-Charlier density of eta = residual/sigma:
///   l = -log(2*pi)/2 - log(sigma^2)/2 - eta^2/2 + log(g(eta)^2) - log(h).
/// Throws std::invalid_argument for variance <= 0.
double gc_loglik_term(double residual, double variance, const ShapePair& shape);

}  // namespace tvrisk
