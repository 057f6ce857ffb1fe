#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvrisk/ewma.hpp"
#include "tvrisk/garch.hpp"
#include "tvrisk/gram_charlier.hpp"
#include "tvrisk/series.hpp"

namespace tvrisk {

enum class ModelTag { HS, FHS, RiskMetrics, EwmaSk, GarchN };

std::string to_string(ModelTag tag);
ModelTag parse_model_tag(const std::string& name);

struct VaRQuery {
    double confidence_alpha = 0.01;  // tail probability, in (0, 0.5]
    int horizon_days = 1;
    ModelTag model_tag = ModelTag::EwmaSk;
};

struct VaRPoint {
    Date date;
    double var_loss = 0.0;  // positive loss magnitude, percent
};

struct VaRSeries {
    VaRQuery query;
    std::vector<VaRPoint> points;
};

struct CfOptions {
    /// Reproduce the raw-kurtosis variant (kurt/24 instead of (kurt-3)/24)
    /// for comparison; breaks Gaussian nesting and is off by default.
    bool raw_kurtosis = false;
    /// Add the second-order skew^2 term -(2z^3-5z)s^2/36 of the full
    /// four-moment expansion.
    bool full_expansion = false;
};

/// Cornish-Fisher quantile: with z = Phi^-1(1-alpha),
///   q = z * {1 + (skew/6)(z^2-1) + ((kurt-3)/24)(z^3-3z)}.
/// Reduces to z exactly at the Gaussian shape. alpha must be in (0, 0.5].
double cornish_fisher_quantile(double alpha, const ShapePair& shape,
                               const CfOptions& opts = {});

/// Positive loss magnitude quantile*sigma - mu; the return-space threshold
/// is its negation. sigma must be > 0.
double parametric_var(double mu, double sigma, double quantile);

/// Historical-simulation VaR: the k-th order statistic of the window with
/// k = ceil(alpha*N) (lower order statistic, no interpolation), negated.
/// Window must hold at least ceil(1/alpha) observations.
double historical_simulation(std::span<const double> window, double alpha);

/// Filtered HS: empirical alpha-quantile of standardized residuals, same
/// order-statistic rule, scaled by the volatility forecast. A window with
/// no negative residuals yields a nonpositive value, reported as-is.
double filtered_historical_simulation(std::span<const double> std_residuals,
                                      double sigma_forecast, double alpha);

struct RescaledMoments {
    double mu = 0.0;
    double sigma = 0.0;
    double skew = 0.0;
    double kurt = 3.0;
};

/// Aggregates one-period moments of i.i.d. increments to an x-period
/// horizon: mu_x = x*mu, sigma_x = sqrt(x)*sigma, skew_x = skew/sqrt(x),
/// kurt_x = (kurt + 3(x-1))/x.
RescaledMoments rescale_moments(double mu, double sigma, double skew, double kurt, int x);

/// Inputs for one VaR forecast: conditional mean/volatility one step ahead
/// and, for the shape-aware model, the one-step-ahead shape. HS/FHS carry
/// their precomputed 1-day loss instead.
struct ModelForecast {
    double mu = 0.0;
    double sigma = 0.0;
    ShapePair shape{0.0, 3.0};
    double empirical_one_day = 0.0;
};

/// Single VaR number for a query. Parametric models go through
/// rescale_moments (horizon > 1) and the CF quantile, with the shape
/// pinned at (0,3) for RiskMetrics and GARCH-N; HS/FHS scale their 1-day
/// estimate by sqrt(horizon).
double forecast_var(const ModelForecast& state, const VaRQuery& query,
                    const CfOptions& opts = {});

struct ForecastOptions {
    double alpha = 0.01;
    int horizon = 1;
    double riskmetrics_lambda = 0.94;
    /// Fixed-length trailing window for HS/FHS; expanding when unset.
    std::optional<std::size_t> rolling_window;
    CfOptions cf;
    double credit_addon = 0.0;  // carried through to backtests
};

/// Rolling one-step-ahead forecasts over the out-of-sample period (every
/// horizon-th date for multi-day horizons, non-overlapping windows).
/// Filters are seeded over the in-sample period with the fitted
/// parameters and updated with realized returns as the window advances.
/// ewma_params is required for EWMA-SK, garch_params for GARCH-N;
/// RiskMetrics runs at opts.riskmetrics_lambda with the in-sample mean,
/// and FHS draws its residuals and volatility from that same filter.
VaRSeries forecast_series(const ReturnSeries& returns, ModelTag model,
                          const ForecastOptions& opts,
                          const DecayParams* ewma_params = nullptr,
                          const GarchParams* garch_params = nullptr);

/// Non-overlapping horizon-day sums of out-of-sample returns, dated by
/// window start; the realized counterpart to multi-day VaR forecasts.
std::vector<ReturnPoint> aggregate_returns(std::span<const ReturnPoint> returns, int horizon);

}  // namespace tvrisk
