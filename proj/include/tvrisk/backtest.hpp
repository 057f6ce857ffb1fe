#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvrisk/series.hpp"
#include "tvrisk/var_engine.hpp"

namespace tvrisk {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Violation indicator series with cached marginal and first-order
/// transition counts. hit_t = 1 iff r_t < -VaR_t (strict; a return exactly
/// on the boundary is not a violation).
struct HitSequence {
    std::vector<int> hits;
    double alpha = 0.01;
    std::int64_t n0 = 0, n1 = 0;
    std::int64_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;

    /// 1-based index of the first violation; nullopt when there is none.
    std::optional<std::size_t> first_failure_index() const;
};

HitSequence hit_sequence(std::span<const ReturnPoint> realized, const VaRSeries& var_series);

/// Builds the indicator and counts from raw hits (test seam and fuzzing
/// entry point).
HitSequence make_hit_sequence(std::vector<int> hits, double alpha);

/// Kupiec time-until-first-failure test from the 1-based index n of the
/// first violation:
///   LR = -2 ln[alpha (1-alpha)^(n-1)] + 2 ln[(1/n)(1 - 1/n)^(n-1)],
/// chi-square(1); the n = 1 case reads (1-1/n)^(n-1) as 1.
TestResult lr_tuff(std::size_t first_failure_index, double alpha);

/// Unconditional coverage: violation frequency against the nominal p.
TestResult lr_uc(std::int64_t n0, std::int64_t n1, double p);

/// Independence against a first-order Markov alternative. Uses the
/// 0*log(0) = 0 convention throughout, which also covers the degenerate
/// pi11 = 0 case (the alternative collapses to the pi01-only likelihood).
TestResult lr_ind(std::int64_t n00, std::int64_t n01, std::int64_t n10, std::int64_t n11);

/// Conditional coverage: the sum of UC and IND, chi-square(2).
TestResult lr_cc(double uc_statistic, double ind_statistic);

enum class Zone { Green, Yellow, Red };

std::string to_string(Zone zone);

/// Basel traffic-light class from the count of 1% VaR violations over 250
/// trading days: green (S=3) for x <= 4, yellow (S = 3 + 0.2(x-4)) for
/// 5 <= x <= 9, red (S=4) for x >= 10.
struct BaselZone {
    Zone zone = Zone::Green;
    int violations = 0;
    double multiplier = 3.0;
};

BaselZone basel_zone(int violations);

/// MRC_t = max(current_var, multiplier * mean(var_history)) + credit_addon.
/// var_history is the trailing 60-day window including the current value;
/// shorter histories are accepted (callers flag them), empty ones rejected.
double market_risk_capital(std::span<const double> var_history, double current_var,
                           double multiplier, double credit_addon);

struct MrcPoint {
    Date date;
    double capital = 0.0;
};

struct BacktestReport {
    ModelTag model = ModelTag::EwmaSk;
    double alpha = 0.01;
    int horizon_days = 1;
    double failure_pct = 0.0;
    std::optional<TestResult> tuff;  // nullopt when no violation occurred
    TestResult uc;
    TestResult ind;
    TestResult cc;
    BaselZone basel;  // from the last 250 observations
    HitSequence hits;
    std::vector<MrcPoint> mrc_series;
    bool mrc_partial_history = false;  // fewer than 60 VaR values available
};

/// Full battery over an aligned (realized return, VaR forecast) sample:
/// hit sequence, TUFF/UC/IND/CC, Basel zone over the trailing 250
/// observations, and the MRC series (rolling multiplier, trailing 60-day
/// VaR average). Requires >= 50 aligned observations.
BacktestReport run_backtest(std::span<const ReturnPoint> realized, const VaRSeries& var_series,
                            double credit_addon = 0.0);

}  // namespace tvrisk
