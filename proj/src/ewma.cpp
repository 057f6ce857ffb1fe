#include "tvrisk/ewma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tvrisk/gram_charlier.hpp"

namespace tvrisk {

namespace {

constexpr double kVarianceFloor = 1e-12;

double logit(double p) { return std::log(p / (1.0 - p)); }

// Saturating logistic: keeps optimizer probes strictly inside (0,1) even
// when the line search wanders far out in the unconstrained space.
double logistic(double x) {
    const double v = 1.0 / (1.0 + std::exp(-x));
    return std::clamp(v, 1e-9, 1.0 - 1e-9);
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("decay factor must lie strictly inside (0,1)");
    }
}

double in_sample_mean(const ReturnSeries& returns) {
    const auto obs = returns.in_sample();
    double sum = 0.0;
    for (const auto& o : obs) sum += o.value;
    return sum / static_cast<double>(obs.size());
}

double in_sample_variance(const ReturnSeries& returns) {
    const auto obs = returns.in_sample();
    const double mean = in_sample_mean(returns);
    double ss = 0.0;
    for (const auto& o : obs) {
        const double d = o.value - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(obs.size());
}

}  // namespace

double riskmetrics_step(double prev_variance, double prev_residual, double lambda) {
    check_lambda(lambda);
    if (!(prev_variance > 0.0)) {
        throw std::invalid_argument("riskmetrics_step: previous variance must be positive");
    }
    return lambda * prev_variance + (1.0 - lambda) * prev_residual * prev_residual;
}

MomentPath riskmetrics_filter(const ReturnSeries& returns, double lambda, double mu,
                              double init_variance) {
    check_lambda(lambda);
    if (returns.split_index < 2) {
        throw InputError("riskmetrics_filter: need at least 2 in-sample observations");
    }
    if (!(init_variance > 0.0)) {
        throw std::invalid_argument("riskmetrics_filter: init variance must be positive");
    }

    MomentPath path;
    path.reserve(returns.split_index);
    double variance = init_variance;
    for (const auto& obs : returns.in_sample()) {
        const double residual = obs.value - mu;
        path.push_back({obs.date, {variance, 0.0, 3.0}, residual / std::sqrt(variance)});
        variance = lambda * variance + (1.0 - lambda) * residual * residual;
    }
    return path;
}

MomentState ewma_sk_step(const MomentState& state, double residual,
                         const std::array<double, 3>& lambdas) {
    for (double l : lambdas) check_lambda(l);
    if (!(state.variance > 0.0)) {
        throw std::invalid_argument("ewma_sk_step: variance must be positive");
    }
    const double eta = residual / std::sqrt(state.variance);
    const double eta3 = eta * eta * eta;

    MomentState next;
    next.variance = lambdas[0] * state.variance + (1.0 - lambdas[0]) * residual * residual;
    next.third = lambdas[1] * state.third + (1.0 - lambdas[1]) * eta3;
    next.fourth = lambdas[2] * state.fourth + (1.0 - lambdas[2]) * eta3 * eta;
    return next;
}

MomentPath ewma_sk_filter(const ReturnSeries& returns, const DecayParams& params,
                          const MomentState& init) {
    if (returns.split_index < 2) {
        throw InputError("ewma_sk_filter: need at least 2 in-sample observations");
    }
    if (!(init.variance > 0.0 && init.fourth > 0.0)) {
        throw std::invalid_argument("ewma_sk_filter: invalid initial state");
    }
    const std::array<double, 3> lambdas{params.lambda1, params.lambda2, params.lambda3};

    MomentPath path;
    path.reserve(returns.split_index);
    MomentState state = init;
    for (const auto& obs : returns.in_sample()) {
        const double residual = obs.value - params.mu;
        path.push_back({obs.date, state, residual / std::sqrt(state.variance)});
        state = ewma_sk_step(state, residual, lambdas);
    }
    return path;
}

MomentState default_init_state(const ReturnSeries& returns) {
    return {in_sample_variance(returns), 0.0, 3.0};
}

double ewma_sk_loglik(const ReturnSeries& returns, const DecayParams& params,
                      const MomentState& init) {
    const std::array<double, 3> lambdas{params.lambda1, params.lambda2, params.lambda3};
    for (double l : lambdas) check_lambda(l);

    double loglik = 0.0;
    double breach = 0.0;
    MomentState state = init;
    for (const auto& obs : returns.in_sample()) {
        if (!(state.variance > kVarianceFloor)) {
            breach += (kVarianceFloor - state.variance) / kVarianceFloor + 1.0;
            state.variance = kVarianceFloor;
        }
        const double residual = obs.value - params.mu;
        loglik += gc_loglik_term(residual, state.variance, state.shape());
        state = ewma_sk_step(state, residual, lambdas);
    }
    if (breach > 0.0) return kInfeasiblePenalty - breach;
    if (!std::isfinite(loglik)) return kInfeasiblePenalty;
    return loglik;
}

EwmaSkFit estimate_ewma_sk(const ReturnSeries& returns, std::optional<double> pinned_mu) {
    if (returns.split_index < 100) {
        throw InputError("estimate_ewma_sk: need at least 100 in-sample observations");
    }
    const double sample_var = in_sample_variance(returns);
    if (!(sample_var > 0.0)) {
        throw InputError("estimate_ewma_sk: zero in-sample variance");
    }
    const MomentState init{sample_var, 0.0, 3.0};
    const bool estimate_mu = !pinned_mu.has_value();

    auto unpack = [&](std::span<const double> theta) {
        DecayParams p;
        p.lambda1 = logistic(theta[0]);
        p.lambda2 = logistic(theta[1]);
        p.lambda3 = logistic(theta[2]);
        p.mu = estimate_mu ? theta[3] : *pinned_mu;
        return p;
    };

    OptimizationProblem problem;
    problem.objective = [&](std::span<const double> theta) {
        return ewma_sk_loglik(returns, unpack(theta), init);
    };
    problem.initial_point = {logit(0.94), logit(0.94), logit(0.94)};
    problem.parameter_names = {"lambda1", "lambda2", "lambda3"};
    if (estimate_mu) {
        problem.initial_point.push_back(in_sample_mean(returns));
        problem.parameter_names.push_back("mu");
    }

    OptimizationResult opt = maximize(problem, 1e-4, 400);
    if (!opt.converged) {
        throw EstimationError("estimate_ewma_sk: optimizer did not converge (best loglik " +
                                  std::to_string(opt.value) + ", gradient norm " +
                                  std::to_string(opt.gradient_norm) + ")",
                              opt);
    }

    EwmaSkFit fit;
    fit.params = unpack(opt.point);
    fit.params.log_likelihood = opt.value;
    fit.optimum = opt;

    // Delta-method t-statistics on the natural (lambda) scale:
    // se_i = se_theta_i * dlambda/dtheta = se_theta_i * lambda(1-lambda).
    fit.params.t_stats = {std::nan(""), std::nan(""), std::nan("")};
    if (opt.standard_errors) {
        const std::array<double, 3> lambdas{fit.params.lambda1, fit.params.lambda2,
                                            fit.params.lambda3};
        for (int i = 0; i < 3; ++i) {
            const double se_nat = (*opt.standard_errors)[i] * lambdas[i] * (1.0 - lambdas[i]);
            fit.params.t_stats[i] = lambdas[i] / se_nat;
        }
    }

    fit.path = ewma_sk_filter(returns, fit.params, init);
    return fit;
}

}  // namespace tvrisk
