#include "tvrisk/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tvrisk/special_functions.hpp"

namespace tvrisk {

namespace {

// n * log(p) with the 0*log(0) = 0 convention used by every LR test here.
double xlogp(std::int64_t n, double p) {
    if (n == 0) return 0.0;
    return static_cast<double>(n) * std::log(p);
}

}  // namespace

std::optional<std::size_t> HitSequence::first_failure_index() const {
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (hits[i] == 1) return i + 1;  // 1-based
    }
    return std::nullopt;
}

HitSequence make_hit_sequence(std::vector<int> hits, double alpha) {
    HitSequence seq;
    seq.hits = std::move(hits);
    seq.alpha = alpha;
    for (std::size_t i = 0; i < seq.hits.size(); ++i) {
        (seq.hits[i] ? seq.n1 : seq.n0)++;
        if (i > 0) {
            const int prev = seq.hits[i - 1], cur = seq.hits[i];
            if (prev == 0 && cur == 0) seq.n00++;
            if (prev == 0 && cur == 1) seq.n01++;
            if (prev == 1 && cur == 0) seq.n10++;
            if (prev == 1 && cur == 1) seq.n11++;
        }
    }
    return seq;
}

HitSequence hit_sequence(std::span<const ReturnPoint> realized, const VaRSeries& var_series) {
    if (realized.size() != var_series.points.size()) {
        throw InputError("hit_sequence: " + std::to_string(realized.size()) +
                         " returns vs " + std::to_string(var_series.points.size()) +
                         " VaR forecasts");
    }
    std::vector<int> hits;
    hits.reserve(realized.size());
    for (std::size_t i = 0; i < realized.size(); ++i) {
        if (realized[i].date != var_series.points[i].date) {
            throw InputError("hit_sequence: date mismatch at position " + std::to_string(i) +
                             ": " + realized[i].date.to_string() + " vs " +
                             var_series.points[i].date.to_string());
        }
        hits.push_back(realized[i].value < -var_series.points[i].var_loss ? 1 : 0);
    }
    return make_hit_sequence(std::move(hits), var_series.query.confidence_alpha);
}

TestResult lr_tuff(std::size_t first_failure_index, double alpha) {
    if (first_failure_index < 1) {
        throw std::invalid_argument("lr_tuff: index of first failure is 1-based");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("lr_tuff: alpha must lie in (0,1)");
    }
    const auto n = static_cast<double>(first_failure_index);
    const double null_ll = std::log(alpha) + (n - 1.0) * std::log(1.0 - alpha);
    // At n = 1 the alternative's (1 - 1/n)^(n-1) factor is an empty
    // product, so its log contributes nothing.
    double alt_ll = -std::log(n);
    if (first_failure_index > 1) alt_ll += (n - 1.0) * std::log(1.0 - 1.0 / n);
    const double stat = std::max(0.0, -2.0 * (null_ll - alt_ll));
    return {stat, chi_square_sf(stat, 1)};
}

TestResult lr_uc(std::int64_t n0, std::int64_t n1, double p) {
    if (n0 < 0 || n1 < 0 || n0 + n1 < 1) {
        throw std::invalid_argument("lr_uc: needs at least one observation");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("lr_uc: p must lie in (0,1)");
    }
    const double pi_hat = static_cast<double>(n1) / static_cast<double>(n0 + n1);
    const double null_ll = xlogp(n1, p) + xlogp(n0, 1.0 - p);
    const double alt_ll = xlogp(n1, pi_hat) + xlogp(n0, 1.0 - pi_hat);
    const double stat = std::max(0.0, -2.0 * (null_ll - alt_ll));
    return {stat, chi_square_sf(stat, 1)};
}

TestResult lr_ind(std::int64_t n00, std::int64_t n01, std::int64_t n10, std::int64_t n11) {
    if (n00 < 0 || n01 < 0 || n10 < 0 || n11 < 0) {
        throw std::invalid_argument("lr_ind: negative transition count");
    }
    const std::int64_t total = n00 + n01 + n10 + n11;
    if (total < 1) {
        throw InputError("lr_ind: empty transition counts");
    }
    const double pi2 = static_cast<double>(n01 + n11) / static_cast<double>(total);
    const double pi01 =
        n00 + n01 > 0 ? static_cast<double>(n01) / static_cast<double>(n00 + n01) : 0.0;
    const double pi11 =
        n10 + n11 > 0 ? static_cast<double>(n11) / static_cast<double>(n10 + n11) : 0.0;

    const double null_ll = xlogp(n00 + n10, 1.0 - pi2) + xlogp(n01 + n11, pi2);
    // With 0*log(0) = 0 the pi11 = 0 case collapses the alternative to the
    // pi01-only likelihood, as intended for sequences without consecutive
    // violations.
    const double alt_ll = xlogp(n00, 1.0 - pi01) + xlogp(n01, pi01) +
                          xlogp(n10, 1.0 - pi11) + xlogp(n11, pi11);
    const double stat = std::max(0.0, -2.0 * (null_ll - alt_ll));
    return {stat, chi_square_sf(stat, 1)};
}

TestResult lr_cc(double uc_statistic, double ind_statistic) {
    if (!std::isfinite(uc_statistic) || !std::isfinite(ind_statistic)) {
        throw std::invalid_argument("lr_cc: inputs must be finite");
    }
    const double stat = uc_statistic + ind_statistic;
    return {stat, chi_square_sf(stat, 2)};
}

std::string to_string(Zone zone) {
    switch (zone) {
        case Zone::Green: return "green";
        case Zone::Yellow: return "yellow";
        case Zone::Red: return "red";
    }
    throw std::logic_error("unknown zone");
}

BaselZone basel_zone(int violations) {
    if (violations < 0) {
        throw std::invalid_argument("basel_zone: violation count cannot be negative");
    }
    BaselZone out;
    out.violations = violations;
    if (violations <= 4) {
        out.zone = Zone::Green;
        out.multiplier = 3.0;
    } else if (violations <= 9) {
        out.zone = Zone::Yellow;
        out.multiplier = 3.0 + 0.2 * (violations - 4);
    } else {
        out.zone = Zone::Red;
        out.multiplier = 4.0;
    }
    return out;
}

double market_risk_capital(std::span<const double> var_history, double current_var,
                           double multiplier, double credit_addon) {
    if (var_history.empty()) {
        throw InputError("market_risk_capital: empty VaR history");
    }
    const double mean = std::accumulate(var_history.begin(), var_history.end(), 0.0) /
                        static_cast<double>(var_history.size());
    return std::max(current_var, multiplier * mean) + credit_addon;
}

BacktestReport run_backtest(std::span<const ReturnPoint> realized, const VaRSeries& var_series,
                            double credit_addon) {
    if (realized.size() < 50) {
        throw InputError("run_backtest: need at least 50 aligned observations");
    }

    BacktestReport report;
    report.model = var_series.query.model_tag;
    report.alpha = var_series.query.confidence_alpha;
    report.horizon_days = var_series.query.horizon_days;
    report.hits = hit_sequence(realized, var_series);

    const auto& h = report.hits;
    const auto len = h.hits.size();
    report.failure_pct = 100.0 * static_cast<double>(h.n1) / static_cast<double>(len);

    if (const auto first = h.first_failure_index()) {
        report.tuff = lr_tuff(*first, h.alpha);
    }
    report.uc = lr_uc(h.n0, h.n1, h.alpha);
    report.ind = lr_ind(h.n00, h.n01, h.n10, h.n11);
    report.cc = lr_cc(report.uc.statistic, report.ind.statistic);

    const std::size_t basel_window = std::min<std::size_t>(len, 250);
    int recent_violations = 0;
    for (std::size_t i = len - basel_window; i < len; ++i) recent_violations += h.hits[i];
    report.basel = basel_zone(recent_violations);

    // MRC series: trailing 60-day average including the current forecast,
    // with the multiplier from the rolling 250-day violation count.
    std::vector<double> var_values;
    var_values.reserve(len);
    for (const auto& p : var_series.points) var_values.push_back(p.var_loss);

    report.mrc_partial_history = len < 60;
    const std::size_t mrc_start = len >= 60 ? 59 : 0;
    int rolling_violations = 0;
    for (std::size_t t = 0; t < len; ++t) {
        rolling_violations += h.hits[t];
        if (t >= 250) rolling_violations -= h.hits[t - 250];
        if (t < mrc_start) continue;
        const std::size_t window = std::min<std::size_t>(t + 1, 60);
        const auto history = std::span(var_values).subspan(t + 1 - window, window);
        const double multiplier = basel_zone(rolling_violations).multiplier;
        report.mrc_series.push_back(
            {var_series.points[t].date,
             market_risk_capital(history, var_values[t], multiplier, credit_addon)});
    }
    return report;
}

}  // namespace tvrisk
