#include "tvrisk/garch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvrisk {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727417803297;
constexpr double kVarianceFloor = 1e-12;

double logit(double p) { return std::log(p / (1.0 - p)); }

// Saturating logistic, so optimizer probes stay strictly inside (0,1).
double logistic(double x) {
    const double v = 1.0 / (1.0 + std::exp(-x));
    return std::clamp(v, 1e-9, 1.0 - 1e-9);
}

double sample_mean(std::span<const ReturnPoint> obs) {
    double sum = 0.0;
    for (const auto& o : obs) sum += o.value;
    return sum / static_cast<double>(obs.size());
}

double sample_variance(std::span<const ReturnPoint> obs, double mean) {
    double ss = 0.0;
    for (const auto& o : obs) {
        const double d = o.value - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(obs.size());
}

void check_params(const GarchParams& p) {
    if (!(p.omega > 0.0) || p.alpha < 0.0 || p.beta < 0.0) {
        throw std::invalid_argument("garch parameters violate omega > 0, alpha, beta >= 0");
    }
}

}  // namespace

double garch_step(double prev_variance, double prev_residual, const GarchParams& params) {
    check_params(params);
    if (!(prev_variance > 0.0)) {
        throw std::invalid_argument("garch_step: previous variance must be positive");
    }
    return params.omega + params.alpha * prev_residual * prev_residual +
           params.beta * prev_variance;
}

std::vector<double> garch_variance_path(const ReturnSeries& returns, const GarchParams& params,
                                        double init_variance) {
    check_params(params);
    if (!(init_variance > 0.0)) {
        throw std::invalid_argument("garch_variance_path: init variance must be positive");
    }
    std::vector<double> path;
    path.reserve(returns.split_index);
    double variance = init_variance;
    for (const auto& obs : returns.in_sample()) {
        path.push_back(variance);
        const double residual = obs.value - params.mu;
        variance = params.omega + params.alpha * residual * residual + params.beta * variance;
    }
    return path;
}

double garch_loglik(const ReturnSeries& returns, const GarchParams& params,
                    double init_variance) {
    if (returns.split_index < 2) {
        throw InputError("garch_loglik: need at least 2 in-sample observations");
    }
    double loglik = 0.0;
    double breach = 0.0;
    double variance = init_variance;
    for (const auto& obs : returns.in_sample()) {
        if (!(variance > kVarianceFloor)) {
            breach += (kVarianceFloor - variance) / kVarianceFloor + 1.0;
            variance = kVarianceFloor;
        }
        const double residual = obs.value - params.mu;
        loglik += -kHalfLog2Pi - 0.5 * std::log(variance) -
                  residual * residual / (2.0 * variance);
        variance = params.omega + params.alpha * residual * residual + params.beta * variance;
    }
    if (breach > 0.0) return kInfeasiblePenalty - breach;
    if (!std::isfinite(loglik)) return kInfeasiblePenalty;
    return loglik;
}

GarchParams estimate_garch(const ReturnSeries& returns) {
    if (returns.split_index < 100) {
        throw InputError("estimate_garch: need at least 100 in-sample observations");
    }
    const auto in_sample = returns.in_sample();
    const double mean = sample_mean(in_sample);
    const double variance = sample_variance(in_sample, mean);
    if (!(variance > 0.0)) {
        throw InputError("estimate_garch: zero in-sample variance");
    }

    // Parameter map keeping the optimum interior: omega through exp,
    // persistence u = alpha+beta and the beta share v through logistics.
    auto unpack = [](std::span<const double> theta) {
        GarchParams p;
        p.mu = theta[0];
        p.omega = std::exp(theta[1]);
        const double u = logistic(theta[2]);
        const double v = logistic(theta[3]);
        p.alpha = u * (1.0 - v);
        p.beta = u * v;
        return p;
    };

    OptimizationProblem problem;
    problem.objective = [&](std::span<const double> theta) {
        return garch_loglik(returns, unpack(theta), variance);
    };
    problem.initial_point = {mean, std::log(0.05 * variance), logit(0.95), logit(0.90 / 0.95)};
    problem.parameter_names = {"mu", "log_omega", "logit_persistence", "logit_beta_share"};

    OptimizationResult opt = maximize(problem, 1e-4, 400);
    if (!opt.converged) {
        throw EstimationError("estimate_garch: optimizer did not converge (best loglik " +
                                  std::to_string(opt.value) + ", gradient norm " +
                                  std::to_string(opt.gradient_norm) + ")",
                              opt);
    }

    GarchParams params = unpack(opt.point);
    params.log_likelihood = opt.value;
    params.t_stats = {std::nan(""), std::nan(""), std::nan(""), std::nan("")};

    if (opt.covariance) {
        // Delta method: J = d(mu,omega,alpha,beta)/dtheta by central
        // differences, cov_nat = J cov_theta J'.
        const std::size_t k = opt.point.size();
        Matrix jac(4, k);
        std::vector<double> probe = opt.point;
        for (std::size_t j = 0; j < k; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(opt.point[j]));
            const double saved = probe[j];
            probe[j] = saved + h;
            const GarchParams up = unpack(probe);
            probe[j] = saved - h;
            const GarchParams dn = unpack(probe);
            probe[j] = saved;
            jac(0, j) = (up.mu - dn.mu) / (2.0 * h);
            jac(1, j) = (up.omega - dn.omega) / (2.0 * h);
            jac(2, j) = (up.alpha - dn.alpha) / (2.0 * h);
            jac(3, j) = (up.beta - dn.beta) / (2.0 * h);
        }
        const std::array<double, 4> natural{params.mu, params.omega, params.alpha, params.beta};
        for (int i = 0; i < 4; ++i) {
            double var_i = 0.0;
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b)
                    var_i += jac(i, a) * (*opt.covariance)(a, b) * jac(i, b);
            if (var_i > 0.0) params.t_stats[i] = natural[i] / std::sqrt(var_i);
        }
    }
    return params;
}

}  // namespace tvrisk
