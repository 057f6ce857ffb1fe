#include "tvrisk/mle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvrisk {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kStepStall = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> matvec(const Matrix& m, std::span<const double> v) {
    std::vector<double> out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

// Backtracking line search on a descent direction with one quadratic
// refinement probe after acceptance. The probe recovers the exact line
// minimum on quadratic objectives, which is what keeps BFGS finite-step
// there.
struct LineSearchOutcome {
    double step = 0.0;
    double value = 0.0;
    bool ok = false;
};

LineSearchOutcome line_search(const Objective& fn, std::span<const double> x,
                              std::span<const double> direction, double f0, double slope0) {
    const std::size_t n = x.size();
    std::vector<double> trial(n);
    auto eval_at = [&](double t) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + t * direction[i];
        return fn(trial);
    };
    auto quad_min = [&](double t, double ft) {
        const double denom = 2.0 * (ft - f0 - slope0 * t);
        if (!(denom > 0.0)) return -1.0;
        return -slope0 * t * t / denom;
    };

    double t = 1.0;
    for (int k = 0; k < 60; ++k) {
        const double ft = eval_at(t);
        if (std::isfinite(ft) && ft <= f0 + kArmijoSlope * t * slope0) {
            LineSearchOutcome out{t, ft, true};
            const double tq = quad_min(t, ft);
            if (tq > 0.0 && std::isfinite(tq) && tq < 10.0 * t && std::abs(tq - t) > 1e-14) {
                const double fq = eval_at(tq);
                if (std::isfinite(fq) && fq < ft && fq <= f0 + kArmijoSlope * tq * slope0) {
                    out.step = tq;
                    out.value = fq;
                }
            }
            return out;
        }
        double tq = std::isfinite(ft) ? quad_min(t, ft) : -1.0;
        if (!(tq > 1e-3 * t && tq < 0.5 * t)) tq = 0.5 * t;
        t = tq;
        if (t < 1e-20) break;
    }
    return {};
}

// Minimizes the negated objective; results are reported on the original
// (maximization) scale by the caller.
OptimizationResult bfgs_minimize(const Objective& negated, std::vector<double> x,
                                 double tolerance, int max_iterations) {
    const std::size_t n = x.size();
    OptimizationResult result;

    auto gradient = [&](std::span<const double> p) {
        std::vector<double> g(n);
        std::vector<double> probe(p.begin(), p.end());
        for (std::size_t i = 0; i < n; ++i) {
            const double h = std::max(1e-6, 1e-7 * std::abs(p[i]));
            const double saved = probe[i];
            probe[i] = saved + h;
            const double fp = negated(probe);
            probe[i] = saved - h;
            const double fm = negated(probe);
            probe[i] = saved;
            g[i] = (fp - fm) / (2.0 * h);
        }
        return g;
    };

    double fx = negated(x);
    std::vector<double> grad = gradient(x);

    Matrix inv_hessian(n, n);
    for (std::size_t i = 0; i < n; ++i) inv_hessian(i, i) = 1.0;

    int iterations = 0;
    bool converged = false;
    while (iterations < max_iterations) {
        if (inf_norm(grad) <= tolerance) {
            converged = true;
            break;
        }
        ++iterations;

        std::vector<double> direction = matvec(inv_hessian, grad);
        for (double& d : direction) d = -d;
        double slope = dot(grad, direction);
        if (!(slope < 0.0)) {
            // Curvature estimate went bad; fall back to steepest descent.
            for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i];
            slope = dot(grad, direction);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) inv_hessian(i, j) = (i == j) ? 1.0 : 0.0;
        }

        const auto ls = line_search(negated, x, direction, fx, slope);
        if (!ls.ok) {
            // No acceptable step: the search has stalled.
            converged = true;
            break;
        }

        std::vector<double> step(n), grad_new;
        for (std::size_t i = 0; i < n; ++i) {
            step[i] = ls.step * direction[i];
            x[i] += step[i];
        }
        fx = ls.value;
        grad_new = gradient(x);

        if (inf_norm(step) < kStepStall) {
            grad = std::move(grad_new);
            converged = true;
            break;
        }

        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = grad_new[i] - grad[i];
        const double ys = dot(y, step);
        if (ys > 1e-12 * inf_norm(y) * inf_norm(step)) {
            // BFGS inverse update: H <- (I - rho s y')H(I - rho y s') + rho s s'.
            const double rho = 1.0 / ys;
            const std::vector<double> hy = matvec(inv_hessian, y);
            const double yhy = dot(y, hy);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    inv_hessian(i, j) += rho * rho * yhy * step[i] * step[j] -
                                         rho * (step[i] * hy[j] + hy[i] * step[j]) +
                                         rho * step[i] * step[j];
                }
            }
        }
        grad = std::move(grad_new);
    }

    result.point = std::move(x);
    result.value = -fx;
    result.gradient_norm = inf_norm(grad);
    result.iterations = iterations;
    result.converged = converged || inf_norm(grad) <= tolerance;
    return result;
}

}  // namespace

std::vector<double> numerical_gradient(const Objective& objective, std::span<const double> point) {
    std::vector<double> g(point.size());
    std::vector<double> probe(point.begin(), point.end());
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double h = std::max(1e-6, 1e-7 * std::abs(point[i]));
        const double saved = probe[i];
        probe[i] = saved + h;
        const double fp = objective(probe);
        probe[i] = saved - h;
        const double fm = objective(probe);
        probe[i] = saved;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

OptimizationResult maximize(const OptimizationProblem& problem, double tolerance,
                            int max_iterations) {
    if (problem.initial_point.empty()) {
        throw std::invalid_argument("maximize: empty initial point");
    }
    for (double v : problem.initial_point) {
        if (!std::isfinite(v)) throw std::invalid_argument("maximize: non-finite initial point");
    }
    const Objective& f = problem.objective;
    if (!std::isfinite(f(problem.initial_point))) {
        throw std::invalid_argument("maximize: objective non-finite at initial point");
    }

    Objective negated = [&f](std::span<const double> p) { return -f(p); };

    OptimizationResult result =
        bfgs_minimize(negated, problem.initial_point, tolerance, max_iterations);

    if (!result.converged) {
        // One deterministic fallback from a +10% perturbed start.
        std::vector<double> perturbed = problem.initial_point;
        for (double& v : perturbed) v *= 1.1;
        if (std::isfinite(f(perturbed))) {
            OptimizationResult retry = bfgs_minimize(negated, perturbed, tolerance, max_iterations);
            if (retry.converged || retry.value > result.value) result = std::move(retry);
        }
    }

    const Matrix hessian = numerical_hessian(f, result.point);
    result.covariance = covariance_from_hessian(hessian);
    if (result.covariance) {
        std::vector<double> se(result.point.size());
        for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::sqrt((*result.covariance)(i, i));
        result.standard_errors = std::move(se);
    }
    return result;
}

Matrix numerical_hessian(const Objective& objective, std::span<const double> point, double step) {
    const std::size_t n = point.size();
    Matrix hessian(n, n);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = step * std::max(1.0, std::abs(point[i]));

    std::vector<double> probe(point.begin(), point.end());
    const double f0 = objective(probe);

    for (std::size_t i = 0; i < n; ++i) {
        const double saved = probe[i];
        probe[i] = saved + h[i];
        const double fp = objective(probe);
        probe[i] = saved - h[i];
        const double fm = objective(probe);
        probe[i] = saved;
        hessian(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double si = probe[i], sj = probe[j];
            probe[i] = si + h[i]; probe[j] = sj + h[j];
            const double fpp = objective(probe);
            probe[j] = sj - h[j];
            const double fpm = objective(probe);
            probe[i] = si - h[i]; probe[j] = sj + h[j];
            const double fmp = objective(probe);
            probe[j] = sj - h[j];
            const double fmm = objective(probe);
            probe[i] = si; probe[j] = sj;
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            hessian(i, j) = v;
            hessian(j, i) = v;
        }
    }
    return hessian;
}

std::optional<Matrix> covariance_from_hessian(const Matrix& hessian) {
    const std::size_t n = hessian.rows;
    if (n == 0 || hessian.cols != n) return std::nullopt;

    // Cholesky of -H; failure means the Hessian is not negative definite
    // and the covariance is flagged unavailable.
    Matrix chol(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = -hessian(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= chol(i, k) * chol(j, k);
            if (i == j) {
                if (!(s > 0.0)) return std::nullopt;
                chol(i, i) = std::sqrt(s);
            } else {
                chol(i, j) = s / chol(j, j);
            }
        }
    }

    // Invert via forward/back substitution against unit vectors.
    Matrix cov(n, n);
    std::vector<double> col(n);
    for (std::size_t rhs = 0; rhs < n; ++rhs) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = (i == rhs) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) s -= chol(i, k) * col[k];
            col[i] = s / chol(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = col[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= chol(k, ii) * col[k];
            col[ii] = s / chol(ii, ii);
        }
        for (std::size_t i = 0; i < n; ++i) cov(i, rhs) = col[i];
    }
    return cov;
}

std::optional<std::vector<double>> standard_errors_from_hessian(const Matrix& hessian) {
    const auto cov = covariance_from_hessian(hessian);
    if (!cov) return std::nullopt;
    std::vector<double> se(hessian.rows);
    for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::sqrt((*cov)(i, i));
    return se;
}

}  // namespace tvrisk
