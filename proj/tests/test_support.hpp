#pragma once

// Shared oracles and generators for the test suites. Everything here is
// deliberately independent of the library's computation paths: quadrature
// instead of closed forms, explicit weighted sums instead of recursions,
// and its own normal sampler.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tvrisk/series.hpp"

namespace testsup {

// ---------------------------------------------------------------------------
// Deterministic randomness. Box-Muller on mt19937_64 so streams are pinned
// by the C++ standard, independent of library distributions.
// ---------------------------------------------------------------------------
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform_(engine_);
        } while (u1 <= 0.0);
        const double u2 = uniform_(engine_);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double uniform() { return uniform_(engine_); }

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Composite Gauss-Legendre quadrature (16 nodes per subinterval).
// ---------------------------------------------------------------------------
template <typename F>
double integrate(F&& f, double a, double b, int subintervals = 96) {
    static const std::array<double, 8> nodes = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
        0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
    static const std::array<double, 8> weights = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

    const double step = (b - a) / subintervals;
    double total = 0.0;
    for (int i = 0; i < subintervals; ++i) {
        const double mid = a + (i + 0.5) * step;
        const double half = 0.5 * step;
        double acc = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            acc += weights[j] * (f(mid - half * nodes[j]) + f(mid + half * nodes[j]));
        }
        total += half * acc;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Calendar helpers: consecutive synthetic dates for in-memory series.
// ---------------------------------------------------------------------------
inline tvrisk::Date next_day(tvrisk::Date d) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
    const int dim = (d.month == 2 && leap) ? 29 : kDays[d.month - 1];
    if (++d.day > dim) {
        d.day = 1;
        if (++d.month > 12) {
            d.month = 1;
            ++d.year;
        }
    }
    return d;
}

inline tvrisk::ReturnSeries make_return_series(const std::vector<double>& values,
                                               std::size_t out_of_sample = 0) {
    tvrisk::ReturnSeries series;
    tvrisk::Date d{1995, 1, 1};
    series.observations.reserve(values.size());
    for (double v : values) {
        series.observations.push_back({d, v});
        d = next_day(d);
    }
    series.split_index = values.size() - out_of_sample;
    return series;
}

// ---------------------------------------------------------------------------
// GARCH(1,1) simulator with Gaussian innovations.
// ---------------------------------------------------------------------------
struct GarchTruth {
    double mu = 0.0;
    double omega = 0.02;
    double alpha = 0.08;
    double beta = 0.90;
};

inline std::vector<double> simulate_garch(const GarchTruth& p, std::size_t n,
                                          std::uint64_t seed, std::size_t burn_in = 500) {
    NormalSampler normal(seed);
    std::vector<double> out;
    out.reserve(n);
    double variance = p.omega / (1.0 - p.alpha - p.beta);
    for (std::size_t t = 0; t < n + burn_in; ++t) {
        const double eps = normal() * std::sqrt(variance);
        if (t >= burn_in) out.push_back(p.mu + eps);
        variance = p.omega + p.alpha * eps * eps + p.beta * variance;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gram-Charlier expansion innovations (the un-squared fourth-order series,
// which has exact moments (0, 1, skew, kurt) wherever it is nonnegative).
// Closed-form CDF through the partial normal moments
//   M_j(x) = int_{-inf}^x t^j phi(t) dt,
//   M_0 = Phi, M_1 = -phi, M_j = -x^{j-1} phi + (j-1) M_{j-2},
// inverted by bisection. Used to drive the EWMA-SK recovery oracle.
// ---------------------------------------------------------------------------
inline double gc_expansion_cdf(double x, double skew, double kurt) {
    const double e = kurt - 3.0;
    const std::array<double, 5> c = {1.0 + e / 8.0, -skew / 2.0, -e / 4.0, skew / 6.0,
                                     e / 24.0};
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    const double big_phi = 0.5 * std::erfc(-x / std::sqrt(2.0));
    std::array<double, 5> m{};
    m[0] = big_phi;
    m[1] = -phi;
    for (int j = 2; j < 5; ++j) {
        m[j] = -std::pow(x, j - 1) * phi + (j - 1) * m[j - 2];
    }
    double total = 0.0;
    for (int j = 0; j < 5; ++j) total += c[j] * m[j];
    return total;
}

inline double gc_expansion_sample(double u, double skew, double kurt) {
    double lo = -14.0, hi = 14.0;
    for (int i = 0; i < 70; ++i) {
        const double mid = 0.5 * (lo + hi);
        (gc_expansion_cdf(mid, skew, kurt) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Closed-form CDF of the production (squared, renormalized) density: the
// degree-8 polynomial phi-weighted partial moments, independent of the
// library's pointwise evaluation path.
inline double gc_squared_cdf(double x, double skew, double kurt) {
    const double e = kurt - 3.0;
    const std::array<double, 5> a = {1.0 + e / 8.0, -skew / 2.0, -e / 4.0, skew / 6.0,
                                     e / 24.0};
    std::array<double, 9> b{};
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) b[i + j] += a[i] * a[j];
    }
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    const double big_phi = 0.5 * std::erfc(-x / std::sqrt(2.0));
    std::array<double, 9> m{};
    m[0] = big_phi;
    m[1] = -phi;
    for (int j = 2; j < 9; ++j) {
        m[j] = -std::pow(x, j - 1) * phi + (j - 1) * m[j - 2];
    }
    double total = 0.0;
    for (int j = 0; j < 9; ++j) total += b[j] * m[j];
    const double h = 1.0 + skew * skew / 6.0 + e * e / 24.0;
    return total / h;
}

inline double gc_squared_sample(double u, double skew, double kurt) {
    double lo = -14.0, hi = 14.0;
    for (int i = 0; i < 70; ++i) {
        const double mid = 0.5 * (lo + hi);
        (gc_squared_cdf(mid, skew, kurt) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// EWMA-SK simulator. Innovations are Gram-Charlier expansion draws whose
// conditional third/fourth moments equal the recursion states; the states
// are reflected into a box inside the expansion's positivity region
// (corners checked nonnegative; the polynomial is affine in (skew, kurt)
// so corner positivity covers the box). The shape recursions are additive
// martingales under self-consistent moments, so reflection is what keeps
// a finite simulation inside the feasible region.
// ---------------------------------------------------------------------------
struct EwmaSkTruth {
    double lambda1 = 0.97;
    double lambda2 = 0.96;
    double lambda3 = 0.93;
    double mu = 0.0;
};

inline double reflect_into(double v, double lo, double hi) {
    for (int i = 0; i < 64 && (v < lo || v > hi); ++i) {
        if (v < lo) v = 2.0 * lo - v;
        if (v > hi) v = 2.0 * hi - v;
    }
    if (v < lo || v > hi) v = 0.5 * (lo + hi);
    return v;
}

// Geometric reflection for the variance: the self-driven EWMA variance is
// an integrated process with negative log-drift (it wanders toward zero
// over long horizons), so long simulations need a scale band.
inline double reflect_geometric(double v, double lo, double hi) {
    for (int i = 0; i < 64 && (v < lo || v > hi); ++i) {
        if (v < lo) v = lo * lo / v;
        if (v > hi) v = hi * hi / v;
    }
    if (v < lo || v > hi) v = std::sqrt(lo * hi);
    return v;
}

inline constexpr double kSkewBound = 0.6;
inline constexpr double kKurtLo = 3.8;
inline constexpr double kKurtHi = 6.0;

inline std::vector<double> simulate_ewma_sk(const EwmaSkTruth& p, std::size_t n,
                                            std::uint64_t seed) {
    NormalSampler rng(seed);
    std::vector<double> out;
    out.reserve(n);
    double variance = 1.0;
    double third = 0.0;
    double fourth = 0.5 * (kKurtLo + kKurtHi);
    for (std::size_t t = 0; t < n; ++t) {
        const double eta = gc_expansion_sample(rng.uniform(), third, fourth);
        const double eps = eta * std::sqrt(variance);
        out.push_back(p.mu + eps);
        variance = reflect_geometric(
            p.lambda1 * variance + (1.0 - p.lambda1) * eps * eps, 1e-4, 1e4);
        third = reflect_into(p.lambda2 * third + (1.0 - p.lambda2) * eta * eta * eta,
                             -kSkewBound, kSkewBound);
        fourth = reflect_into(p.lambda3 * fourth + (1.0 - p.lambda3) * eta * eta * eta * eta,
                              kKurtLo, kKurtHi);
    }
    return out;
}

}  // namespace testsup
