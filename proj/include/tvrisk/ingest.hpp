#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>

#include "tvrisk/series.hpp"

namespace tvrisk {

/// Reads a `date,price` CSV (header required, ISO-8601 dates, one row per
/// trading day). Rejects missing or non-numeric prices with the offending
/// row number; never interpolates.
PriceSeries load_price_csv(const std::string& path);
PriceSeries parse_price_csv(std::istream& in, const std::string& source_name);

/// r_t = 100 * [ln(p_t) - ln(p_{t-1})]. Output has length - 1 observations
/// and starts fully in-sample (split_index = length).
ReturnSeries compute_log_returns(const PriceSeries& prices);

/// Sample statistics with population-divisor central moments (divisor n),
/// so the Jarque-Bera statistic matches its textbook definition. Kurtosis
/// is the raw fourth standardized moment. Requires >= 4 observations and
/// nonzero variance.
StatsSummary descriptive_stats(const ReturnSeries& returns);

/// JB = n * (skew^2/6 + (kurt-3)^2/24), p-value from chi-square(2).
std::pair<double, double> jarque_bera(double skewness, double kurtosis, std::size_t count);

/// Moves the split so the last out_of_sample_count observations are held out.
ReturnSeries split_sample(ReturnSeries returns, std::size_t out_of_sample_count);

}  // namespace tvrisk
