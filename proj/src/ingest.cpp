#include "tvrisk/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include "tvrisk/special_functions.hpp"

namespace tvrisk {

namespace {

std::string strip(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

void validate_price_series(const PriceSeries& prices) {
    for (std::size_t i = 0; i < prices.observations.size(); ++i) {
        const auto& obs = prices.observations[i];
        if (!(obs.price > 0.0)) {
            throw InputError("non-positive price on " + obs.date.to_string());
        }
        if (i > 0 && !(prices.observations[i - 1].date < obs.date)) {
            throw InputError("dates not strictly increasing at " + obs.date.to_string());
        }
    }
}

std::vector<double> ReturnSeries::in_sample_values() const {
    std::vector<double> values;
    values.reserve(split_index);
    for (std::size_t i = 0; i < split_index; ++i) values.push_back(observations[i].value);
    return values;
}

PriceSeries parse_price_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError(source_name + ": empty file");
    }
    if (strip(line) != "date,price") {
        throw InputError(source_name + ": expected header 'date,price', got '" + strip(line) + "'");
    }

    PriceSeries prices;
    std::size_t row = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++row;
        const std::string trimmed = strip(line);
        if (trimmed.empty()) continue;

        const auto comma = trimmed.find(',');
        if (comma == std::string::npos) {
            throw InputError(source_name + ": row " + std::to_string(row) + ": missing comma");
        }
        const std::string date_text = strip(trimmed.substr(0, comma));
        const std::string price_text = strip(trimmed.substr(comma + 1));
        if (price_text.empty()) {
            throw InputError(source_name + ": row " + std::to_string(row) + ": missing price");
        }

        PricePoint point;
        try {
            point.date = Date::parse(date_text);
        } catch (const std::invalid_argument& e) {
            throw InputError(source_name + ": row " + std::to_string(row) + ": " + e.what());
        }

        std::size_t consumed = 0;
        try {
            point.price = std::stod(price_text, &consumed);
        } catch (const std::exception&) {
            consumed = 0;
        }
        if (consumed != price_text.size() || !std::isfinite(point.price)) {
            throw InputError(source_name + ": row " + std::to_string(row) +
                             ": non-numeric price '" + price_text + "'");
        }
        prices.observations.push_back(point);
    }
    validate_price_series(prices);
    return prices;
}

PriceSeries load_price_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open input file: " + path);
    }
    return parse_price_csv(in, path);
}

ReturnSeries compute_log_returns(const PriceSeries& prices) {
    if (prices.size() < 2) {
        throw InputError("need at least 2 price observations to form returns");
    }
    validate_price_series(prices);

    ReturnSeries returns;
    returns.observations.reserve(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) {
        const auto& prev = prices.observations[i - 1];
        const auto& cur = prices.observations[i];
        returns.observations.push_back(
            {cur.date, 100.0 * (std::log(cur.price) - std::log(prev.price))});
    }
    returns.split_index = returns.observations.size();
    return returns;
}

StatsSummary descriptive_stats(const ReturnSeries& returns) {
    const auto& obs = returns.observations;
    const std::size_t n = obs.size();
    if (n < 4) {
        throw InputError("descriptive statistics need at least 4 observations");
    }

    StatsSummary s;
    s.count = n;
    s.minimum = obs[0].value;
    s.maximum = obs[0].value;
    double sum = 0.0;
    for (const auto& o : obs) {
        sum += o.value;
        s.minimum = std::min(s.minimum, o.value);
        s.maximum = std::max(s.maximum, o.value);
    }
    s.mean = sum / static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const auto& o : obs) {
        const double d = o.value - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    if (!(m2 > 0.0)) {
        throw InputError("zero variance: skewness and kurtosis are undefined");
    }
    s.std_dev = std::sqrt(m2);
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);

    const auto [jb, p] = jarque_bera(s.skewness, s.kurtosis, n);
    s.jarque_bera = jb;
    s.jb_p_value = p;
    return s;
}

std::pair<double, double> jarque_bera(double skewness, double kurtosis, std::size_t count) {
    if (count < 4) {
        throw InputError("jarque_bera needs count >= 4");
    }
    const double excess = kurtosis - 3.0;
    const double stat =
        static_cast<double>(count) * (skewness * skewness / 6.0 + excess * excess / 24.0);
    return {stat, chi_square_sf(stat, 2)};
}

ReturnSeries split_sample(ReturnSeries returns, std::size_t out_of_sample_count) {
    if (out_of_sample_count > returns.size()) {
        throw InputError("out-of-sample count " + std::to_string(out_of_sample_count) +
                         " exceeds series length " + std::to_string(returns.size()));
    }
    returns.split_index = returns.size() - out_of_sample_count;
    return returns;
}

}  // namespace tvrisk
