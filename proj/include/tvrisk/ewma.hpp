#pragma once

#include <array>
#include <optional>
#include <vector>

#include "tvrisk/gram_charlier.hpp"
#include "tvrisk/mle.hpp"
#include "tvrisk/series.hpp"

namespace tvrisk {

/// Raised when a model fit does not converge. Carries the best point the
/// optimizer reached so callers can report diagnostics.
class EstimationError : public std::runtime_error {
  public:
    EstimationError(const std::string& what, OptimizationResult best)
        : std::runtime_error(what), best_result(std::move(best)) {}

    OptimizationResult best_result;
};

/// Decay factors of the three-moment EWMA filter plus the constant
/// conditional mean. t_stats follow the delta-method convention on the
/// natural (lambda) scale.
struct DecayParams {
    double lambda1 = 0.94;  // variance decay
    double lambda2 = 0.94;  // third-moment decay
    double lambda3 = 0.94;  // fourth-moment decay
    double mu = 0.0;        // percent
    double log_likelihood = 0.0;
    std::array<double, 3> t_stats{0.0, 0.0, 0.0};
};

/// Filter state: conditional variance of the residual and conditional
/// third/fourth moments of the standardized residual. The moment states
/// are the recursion values themselves, read directly as E[eta^3] and
/// E[eta^4]; nothing is rooted.
struct MomentState {
    double variance = 1.0;  // percent^2, > 0
    double third = 0.0;
    double fourth = 3.0;    // > 0

    ShapePair shape() const { return {third, fourth}; }
};

struct MomentPoint {
    Date date;
    MomentState state;
    double std_residual = 0.0;  // residual / sqrt(variance dated same day)
};

using MomentPath = std::vector<MomentPoint>;

/// sigma_t^2 = lambda*sigma_{t-1}^2 + (1-lambda)*eps_{t-1}^2.
/// lambda must lie strictly inside (0,1).
double riskmetrics_step(double prev_variance, double prev_residual, double lambda);

/// Runs the plain RiskMetrics recursion over the in-sample period with
/// eps_t = r_t - mu. Shape states are pinned at the Gaussian (0, 3).
MomentPath riskmetrics_filter(const ReturnSeries& returns, double lambda, double mu,
                              double init_variance);

/// One step of the three-moment recursion. eta is standardized with the
/// variance available before the residual was observed:
///   eta            = residual / sqrt(variance_{t-1})
///   variance_t     = l1*variance_{t-1} + (1-l1)*residual^2
///   third_t        = l2*third_{t-1}    + (1-l2)*eta^3
///   fourth_t       = l3*fourth_{t-1}   + (1-l3)*eta^4
MomentState ewma_sk_step(const MomentState& state, double residual,
                         const std::array<double, 3>& lambdas);

/// Full in-sample path of states and standardized residuals. The state
/// recorded at date t is the one used to evaluate that date's likelihood
/// term (built from information through t-1).
MomentPath ewma_sk_filter(const ReturnSeries& returns, const DecayParams& params,
                          const MomentState& init);

/// Gaussian-neutral start: variance = in-sample sample variance,
/// third = 0, fourth = 3.
MomentState default_init_state(const ReturnSeries& returns);

/// In-sample Gram-Charlier log-likelihood of the filter at the given
/// parameters. Returns the documented penalty if the variance floor
/// (1e-12) is breached anywhere along the path.
double ewma_sk_loglik(const ReturnSeries& returns, const DecayParams& params,
                      const MomentState& init);

struct EwmaSkFit {
    DecayParams params;
    MomentPath path;
    OptimizationResult optimum;
};

/// Maximum-likelihood fit of (lambda1, lambda2, lambda3, mu). The decay
/// factors run through a logistic map so the search is unconstrained;
/// t-statistics are delta-method values on the natural scale. Pass
/// pinned_mu to fix the mean instead of estimating it. Requires >= 100
/// in-sample observations. Throws EstimationError on non-convergence.
EwmaSkFit estimate_ewma_sk(const ReturnSeries& returns,
                           std::optional<double> pinned_mu = std::nullopt);

}  // namespace tvrisk
