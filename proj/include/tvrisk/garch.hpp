#pragma once

#include <array>
#include <vector>

#include "tvrisk/ewma.hpp"
#include "tvrisk/series.hpp"

namespace tvrisk {

struct GarchParams {
    double mu = 0.0;     // percent
    double omega = 0.0;  // percent^2, > 0
    double alpha = 0.0;  // >= 0
    double beta = 0.0;   // >= 0, alpha + beta < 1 at the optimum
    double log_likelihood = 0.0;
    std::array<double, 4> t_stats{0.0, 0.0, 0.0, 0.0};
};

/// sigma_t^2 = omega + alpha*eps_{t-1}^2 + beta*sigma_{t-1}^2.
double garch_step(double prev_variance, double prev_residual, const GarchParams& params);

/// In-sample conditional variance path starting from init_variance.
std::vector<double> garch_variance_path(const ReturnSeries& returns,
                                        const GarchParams& params,
                                        double init_variance);

/// Gaussian log-likelihood summed over the filtered path. A nonpositive
/// variance anywhere yields the optimizer penalty, never a throw.
double garch_loglik(const ReturnSeries& returns, const GarchParams& params,
                    double init_variance);

/// MLE of (mu, omega, alpha, beta) with stationarity enforced by
/// reparameterization: omega = exp(t), alpha+beta = logistic(u) and the
/// beta share = logistic(v), keeping the optimum interior. init_variance
/// is the in-sample sample variance. Requires >= 100 in-sample
/// observations; throws EstimationError on non-convergence and InputError
/// on degenerate (zero-variance) input.
GarchParams estimate_garch(const ReturnSeries& returns);

}  // namespace tvrisk
