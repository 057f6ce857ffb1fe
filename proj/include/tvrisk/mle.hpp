#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tvrisk {

/// Minimal dense row-major matrix; all uses here are small (k x k for a
/// handful of parameters).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

using Objective = std::function<double(std::span<const double>)>;

/// A log-likelihood (or any smooth scalar) to be maximized. The objective
/// must return a finite value everywhere it is probed; callers signal
/// infeasible regions with a large negative penalty, not NaN.
struct OptimizationProblem {
    Objective objective;
    std::vector<double> initial_point;
    std::vector<std::string> parameter_names;
};

struct OptimizationResult {
    std::vector<double> point;
    double value = 0.0;
    double gradient_norm = 0.0;  // infinity norm at the final point
    int iterations = 0;
    bool converged = false;
    /// sqrt(diag((-H)^-1)) at the optimum; empty when the Hessian is not
    /// negative definite there.
    std::optional<std::vector<double>> standard_errors;
    /// (-H)^-1 itself, for delta-method transforms by callers.
    std::optional<Matrix> covariance;
};

/// Penalty value objectives should return from infeasible regions, plus a
/// distance term steering the search back (see callers).
inline constexpr double kInfeasiblePenalty = -1e10;

/// BFGS ascent with central-difference gradients and a backtracking line
/// search enforcing sufficient increase. Converges when the gradient
/// infinity-norm drops to `tolerance` or the step stalls below 1e-12.
/// A single deterministic restart from a +10% perturbed start is attempted
/// if the first run exhausts max_iterations. Throws std::invalid_argument
/// when the objective is non-finite at the initial point.
OptimizationResult maximize(const OptimizationProblem& problem,
                            double tolerance = 1e-5,
                            int max_iterations = 500);

/// Central-difference gradient with per-coordinate step
/// max(1e-6, 1e-7*|x_i|).
std::vector<double> numerical_gradient(const Objective& objective,
                                       std::span<const double> point);

/// Symmetric central-difference Hessian with per-coordinate step
/// step*max(1, |x_i|).
Matrix numerical_hessian(const Objective& objective,
                         std::span<const double> point,
                         double step = 1e-4);

/// (-H)^-1 via Cholesky; nullopt when -H is not positive definite
/// (standard errors then flagged unavailable, never a failure).
std::optional<Matrix> covariance_from_hessian(const Matrix& hessian);

std::optional<std::vector<double>> standard_errors_from_hessian(const Matrix& hessian);

}  // namespace tvrisk
