#include "tvrisk/gram_charlier.hpp"

#include <cmath>
#include <stdexcept>

#include "tvrisk/special_functions.hpp"

namespace tvrisk {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727417803297;

// log|g| with the floor applied at the polynomial's isolated zeros.
double log_abs_polynomial(double g) {
    const double mag = std::abs(g);
    if (mag < kGcPolynomialFloor) return std::log(kGcPolynomialFloor);
    return std::log(mag);
}

}  // namespace

double hermite_he3(double x) {
    return x * x * x - 3.0 * x;
}

double hermite_he4(double x) {
    const double x2 = x * x;
    return x2 * x2 - 6.0 * x2 + 3.0;
}

double gc_polynomial(double x, const ShapePair& shape) {
    return 1.0 + shape.skew / 6.0 * hermite_he3(x) + (shape.kurt - 3.0) / 24.0 * hermite_he4(x);
}

double gc_normalizer(const ShapePair& shape) {
    const double excess = shape.kurt - 3.0;
    return 1.0 + shape.skew * shape.skew / 6.0 + excess * excess / 24.0;
}

GcDensityValue gc_density(double x, const ShapePair& shape) {
    const double g = gc_polynomial(x, shape);
    const double h = gc_normalizer(shape);

    GcDensityValue value;
    value.density = normal_pdf(x) * g * g / h;
    value.log_density =
        -kHalfLog2Pi - 0.5 * x * x + 2.0 * log_abs_polynomial(g) - std::log(h);
    return value;
}

double gc_loglik_term(double residual, double variance, const ShapePair& shape) {
    if (!(variance > 0.0)) {
        throw std::invalid_argument("gc_loglik_term: variance must be positive");
    }
    const double eta = residual / std::sqrt(variance);
    const double g = gc_polynomial(eta, shape);
    return -kHalfLog2Pi - 0.5 * std::log(variance) - 0.5 * eta * eta +
           2.0 * log_abs_polynomial(g) - std::log(gc_normalizer(shape));
}

}  // namespace tvrisk
