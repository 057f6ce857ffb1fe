#include "tvrisk/var_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tvrisk/special_functions.hpp"

namespace tvrisk {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 0.5)) {
        throw std::invalid_argument("tail probability must lie in (0, 0.5]");
    }
}

// Lower order statistic at k = ceil(alpha*N). The epsilon absorbs cases
// like 0.01*100 landing a hair above an exact integer.
std::size_t quantile_rank(double alpha, std::size_t n) {
    const double raw = alpha * static_cast<double>(n);
    auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return std::max<std::size_t>(k, 1);
}

double empirical_quantile(std::span<const double> window, double alpha) {
    check_alpha(alpha);
    const std::size_t min_len =
        static_cast<std::size_t>(std::ceil(1.0 / alpha - 1e-9));
    if (window.size() < min_len) {
        throw InputError("window of " + std::to_string(window.size()) +
                         " observations is too short for alpha=" + std::to_string(alpha) +
                         " (need " + std::to_string(min_len) + ")");
    }
    std::vector<double> sorted(window.begin(), window.end());
    const std::size_t k = quantile_rank(alpha, sorted.size());
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    return sorted[k - 1];
}

double in_sample_mean(const ReturnSeries& returns) {
    double sum = 0.0;
    for (const auto& o : returns.in_sample()) sum += o.value;
    return sum / static_cast<double>(returns.split_index);
}

double in_sample_variance(const ReturnSeries& returns) {
    const double mean = in_sample_mean(returns);
    double ss = 0.0;
    for (const auto& o : returns.in_sample()) {
        const double d = o.value - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(returns.split_index);
}

}  // namespace

std::string to_string(ModelTag tag) {
    switch (tag) {
        case ModelTag::HS: return "HS";
        case ModelTag::FHS: return "FHS";
        case ModelTag::RiskMetrics: return "RiskMetrics";
        case ModelTag::EwmaSk: return "EWMA-SK";
        case ModelTag::GarchN: return "GARCH-N";
    }
    throw std::logic_error("unknown model tag");
}

ModelTag parse_model_tag(const std::string& name) {
    if (name == "HS") return ModelTag::HS;
    if (name == "FHS") return ModelTag::FHS;
    if (name == "RiskMetrics") return ModelTag::RiskMetrics;
    if (name == "EWMA-SK") return ModelTag::EwmaSk;
    if (name == "GARCH-N") return ModelTag::GarchN;
    throw InputError("unknown model '" + name +
                     "' (expected HS, FHS, RiskMetrics, EWMA-SK or GARCH-N)");
}

double cornish_fisher_quantile(double alpha, const ShapePair& shape, const CfOptions& opts) {
    check_alpha(alpha);
    const double z = normal_quantile(1.0 - alpha);
    const double z2 = z * z;
    const double kurt_coeff = opts.raw_kurtosis ? shape.kurt : shape.kurt - 3.0;
    double bracket =
        1.0 + shape.skew / 6.0 * (z2 - 1.0) + kurt_coeff / 24.0 * (z2 * z - 3.0 * z);
    if (opts.full_expansion) {
        bracket -= (2.0 * z2 * z - 5.0 * z) * shape.skew * shape.skew / 36.0;
    }
    return z * bracket;
}

double parametric_var(double mu, double sigma, double quantile) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("parametric_var: sigma must be positive");
    }
    return quantile * sigma - mu;
}

double historical_simulation(std::span<const double> window, double alpha) {
    return -empirical_quantile(window, alpha);
}

double filtered_historical_simulation(std::span<const double> std_residuals,
                                      double sigma_forecast, double alpha) {
    if (!(sigma_forecast > 0.0)) {
        throw std::invalid_argument("filtered_historical_simulation: sigma must be positive");
    }
    return -empirical_quantile(std_residuals, alpha) * sigma_forecast;
}

RescaledMoments rescale_moments(double mu, double sigma, double skew, double kurt, int x) {
    if (x < 1) {
        throw std::invalid_argument("rescale_moments: horizon must be >= 1");
    }
    const double n = static_cast<double>(x);
    RescaledMoments out;
    out.mu = n * mu;
    out.sigma = std::sqrt(n) * sigma;
    out.skew = skew / std::sqrt(n);
    out.kurt = (kurt + 3.0 * (n - 1.0)) / n;
    return out;
}

double forecast_var(const ModelForecast& state, const VaRQuery& query, const CfOptions& opts) {
    check_alpha(query.confidence_alpha);
    if (query.horizon_days < 1) {
        throw std::invalid_argument("forecast_var: horizon must be >= 1");
    }

    if (query.model_tag == ModelTag::HS || query.model_tag == ModelTag::FHS) {
        return state.empirical_one_day * std::sqrt(static_cast<double>(query.horizon_days));
    }

    const ShapePair shape =
        query.model_tag == ModelTag::EwmaSk ? state.shape : ShapePair{0.0, 3.0};
    if (query.horizon_days == 1) {
        const double q = cornish_fisher_quantile(query.confidence_alpha, shape, opts);
        return parametric_var(state.mu, state.sigma, q);
    }
    const RescaledMoments rm =
        rescale_moments(state.mu, state.sigma, shape.skew, shape.kurt, query.horizon_days);
    const double q =
        cornish_fisher_quantile(query.confidence_alpha, {rm.skew, rm.kurt}, opts);
    return parametric_var(rm.mu, rm.sigma, q);
}

VaRSeries forecast_series(const ReturnSeries& returns, ModelTag model,
                          const ForecastOptions& opts, const DecayParams* ewma_params,
                          const GarchParams* garch_params) {
    check_alpha(opts.alpha);
    if (opts.horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    if (returns.split_index < 2) {
        throw InputError("forecast_series: need at least 2 in-sample observations");
    }
    if (returns.split_index + static_cast<std::size_t>(opts.horizon) > returns.size()) {
        throw InputError("forecast_series: out-of-sample period shorter than one horizon");
    }
    if (model == ModelTag::EwmaSk && ewma_params == nullptr) {
        throw std::invalid_argument("forecast_series: EWMA-SK requires fitted decay parameters");
    }
    if (model == ModelTag::GarchN && garch_params == nullptr) {
        throw std::invalid_argument("forecast_series: GARCH-N requires fitted parameters");
    }

    const std::size_t n_total = returns.size();
    const std::size_t split = returns.split_index;
    const double init_variance = in_sample_variance(returns);
    const double rm_mu = in_sample_mean(returns);

    VaRSeries series;
    series.query = {opts.alpha, opts.horizon, model};

    // Rolling one-pass state per model family. At index t each state
    // reflects information through t-1, i.e. the one-step-ahead forecast.
    double rm_variance = init_variance;
    MomentState sk_state{init_variance, 0.0, 3.0};
    double garch_variance = init_variance;
    std::vector<double> residual_history;  // RiskMetrics-standardized, for FHS
    residual_history.reserve(n_total);

    auto window_begin = [&](std::size_t end) {
        if (!opts.rolling_window) return std::size_t{0};
        return end > *opts.rolling_window ? end - *opts.rolling_window : 0;
    };

    std::vector<double> hs_window;
    const auto& obs = returns.observations;
    for (std::size_t t = 0; t < n_total; ++t) {
        const bool forecast_due = t >= split && (t - split) % opts.horizon == 0 &&
                                  t + opts.horizon <= n_total;
        if (forecast_due) {
            ModelForecast state;
            switch (model) {
                case ModelTag::HS: {
                    hs_window.clear();
                    for (std::size_t i = window_begin(t); i < t; ++i)
                        hs_window.push_back(obs[i].value);
                    state.empirical_one_day = historical_simulation(hs_window, opts.alpha);
                    break;
                }
                case ModelTag::FHS: {
                    const std::size_t begin = window_begin(residual_history.size());
                    state.empirical_one_day = filtered_historical_simulation(
                        std::span(residual_history).subspan(begin), std::sqrt(rm_variance),
                        opts.alpha);
                    break;
                }
                case ModelTag::RiskMetrics:
                    state.mu = rm_mu;
                    state.sigma = std::sqrt(rm_variance);
                    break;
                case ModelTag::EwmaSk:
                    state.mu = ewma_params->mu;
                    state.sigma = std::sqrt(sk_state.variance);
                    state.shape = sk_state.shape();
                    break;
                case ModelTag::GarchN:
                    state.mu = garch_params->mu;
                    state.sigma = std::sqrt(garch_variance);
                    break;
            }
            series.points.push_back(
                {obs[t].date, forecast_var(state, series.query, opts.cf)});
        }

        // Advance filters with the realized observation.
        switch (model) {
            case ModelTag::HS:
                break;
            case ModelTag::FHS:
            case ModelTag::RiskMetrics: {
                const double residual = obs[t].value - rm_mu;
                if (model == ModelTag::FHS) {
                    residual_history.push_back(residual / std::sqrt(rm_variance));
                }
                rm_variance = riskmetrics_step(rm_variance, residual, opts.riskmetrics_lambda);
                break;
            }
            case ModelTag::EwmaSk:
                sk_state = ewma_sk_step(
                    sk_state, obs[t].value - ewma_params->mu,
                    {ewma_params->lambda1, ewma_params->lambda2, ewma_params->lambda3});
                break;
            case ModelTag::GarchN:
                garch_variance = garch_step(garch_variance, obs[t].value - garch_params->mu,
                                            *garch_params);
                break;
        }
    }
    return series;
}

std::vector<ReturnPoint> aggregate_returns(std::span<const ReturnPoint> returns, int horizon) {
    if (horizon < 1) throw std::invalid_argument("aggregate_returns: horizon must be >= 1");
    std::vector<ReturnPoint> out;
    const auto h = static_cast<std::size_t>(horizon);
    out.reserve(returns.size() / h);
    for (std::size_t start = 0; start + h <= returns.size(); start += h) {
        double sum = 0.0;
        for (std::size_t i = 0; i < h; ++i) sum += returns[start + i].value;
        out.push_back({returns[start].date, sum});
    }
    return out;
}

}  // namespace tvrisk
