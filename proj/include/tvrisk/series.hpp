#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "tvrisk/date.hpp"

namespace tvrisk {

/// Raised when input data violates a format or domain requirement.
/// Carries enough context (row numbers, dates) to locate the problem.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PricePoint {
    Date date;
    double price = 0.0;  // index points, strictly positive
};

/// Daily closing prices. Dates strictly increasing, prices > 0; enforced by
/// validate_price_series, which loaders and consumers call.
struct PriceSeries {
    std::vector<PricePoint> observations;

    std::size_t size() const { return observations.size(); }
};

void validate_price_series(const PriceSeries& prices);

struct ReturnPoint {
    Date date;
    double value = 0.0;  // continuously compounded return, percent
};

/// Log-return series with an in-sample/out-of-sample split. The first
/// split_index observations are in-sample, the rest out-of-sample.
struct ReturnSeries {
    std::vector<ReturnPoint> observations;
    std::size_t split_index = 0;

    std::size_t size() const { return observations.size(); }

    std::span<const ReturnPoint> in_sample() const {
        return std::span(observations).first(split_index);
    }
    std::span<const ReturnPoint> out_of_sample() const {
        return std::span(observations).subspan(split_index);
    }

    std::vector<double> in_sample_values() const;
};

struct StatsSummary {
    double mean = 0.0;
    double std_dev = 0.0;
    double minimum = 0.0;
    double maximum = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;  // raw fourth standardized moment, not excess
    double jarque_bera = 0.0;
    double jb_p_value = 0.0;
    std::size_t count = 0;
};

}  // namespace tvrisk
