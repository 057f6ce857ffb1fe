#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "test_support.hpp"
#include "tvrisk/ewma.hpp"
#include "tvrisk/gram_charlier.hpp"

using namespace tvrisk;

TEST_CASE("riskmetrics step") {
    CHECK(riskmetrics_step(1.0, 1.0, 0.94) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(riskmetrics_step(2.0, 0.0, 0.94) == doctest::Approx(1.88).epsilon(1e-14));
    CHECK(riskmetrics_step(1.0, 2.0, 0.94) == doctest::Approx(1.18).epsilon(1e-14));
    CHECK_THROWS_AS(riskmetrics_step(1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(riskmetrics_step(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(riskmetrics_step(1.0, 1.0, -0.2), std::invalid_argument);
    CHECK_THROWS_AS(riskmetrics_step(0.0, 1.0, 0.94), std::invalid_argument);
}

TEST_CASE("riskmetrics filter paths") {
    SUBCASE("constant returns decay geometrically") {
        const auto r = testsup::make_return_series(std::vector<double>(50, 0.25));
        const auto path = riskmetrics_filter(r, 0.94, 0.25, 1.0);
        REQUIRE(path.size() == 50);
        for (std::size_t t = 0; t < path.size(); ++t) {
            CHECK(path[t].state.variance ==
                  doctest::Approx(std::pow(0.94, t)).epsilon(1e-12));
            CHECK(path[t].state.third == 0.0);
            CHECK(path[t].state.fourth == 3.0);
        }
    }
    SUBCASE("one shock then quiet") {
        std::vector<double> values(30, 0.0);
        values[0] = 5.0;
        const auto path = riskmetrics_filter(testsup::make_return_series(values), 0.94, 0.0, 1.0);
        CHECK(path[1].state.variance == doctest::Approx(0.94 + 0.06 * 25.0).epsilon(1e-12));
        for (std::size_t t = 2; t < path.size(); ++t) {
            CHECK(path[t].state.variance ==
                  doctest::Approx(path[t - 1].state.variance * 0.94).epsilon(1e-12));
        }
    }
    SUBCASE("standardized residual uses the same-dated variance") {
        const auto r = testsup::make_return_series({1.0, -2.0, 0.5, 0.0});
        const auto path = riskmetrics_filter(r, 0.94, 0.0, 4.0);
        CHECK(path[0].std_residual == doctest::Approx(1.0 / 2.0));
        CHECK(path[1].std_residual ==
              doctest::Approx(-2.0 / std::sqrt(path[1].state.variance)));
    }
}

TEST_CASE("recursive filter equals the brute-force weighted sum") {
    testsup::NormalSampler normal(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> values;
        for (int i = 0; i < 400; ++i) values.push_back(1.3 * normal());
        const double lambda = 0.90 + 0.09 * normal.uniform();
        const auto series = testsup::make_return_series(values);
        const auto path = riskmetrics_filter(series, lambda, 0.0, 1.7);

        for (std::size_t t : {std::size_t{1}, std::size_t{37}, std::size_t{399}}) {
            double expected = std::pow(lambda, t) * 1.7;
            for (std::size_t i = 1; i <= t; ++i) {
                expected += (1.0 - lambda) * std::pow(lambda, i - 1.0) *
                            values[t - i] * values[t - i];
            }
            CHECK(path[t].state.variance == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("ewma-sk step") {
    const std::array<double, 3> lambdas{0.97, 0.96, 0.93};
    SUBCASE("zero residual") {
        const auto next = ewma_sk_step({1.0, 0.0, 3.0}, 0.0, lambdas);
        CHECK(next.variance == doctest::Approx(0.97).epsilon(1e-14));
        CHECK(next.third == 0.0);
        CHECK(next.fourth == doctest::Approx(3.0 * 0.93).epsilon(1e-14));
    }
    SUBCASE("unit state with unit residual is a fixed point") {
        for (auto l : {std::array<double, 3>{0.5, 0.5, 0.5}, lambdas}) {
            const auto next = ewma_sk_step({1.0, 1.0, 1.0}, 1.0, l);
            CHECK(next.variance == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(next.third == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(next.fourth == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    SUBCASE("shock updates all three moments") {
        const auto next = ewma_sk_step({1.0, 0.0, 3.0}, 2.0, lambdas);
        CHECK(next.variance == doctest::Approx(1.09).epsilon(1e-14));
        CHECK(next.third == doctest::Approx(0.32).epsilon(1e-14));
        CHECK(next.fourth == doctest::Approx(3.91).epsilon(1e-14));
    }
    SUBCASE("decay factors outside (0,1) are rejected") {
        CHECK_THROWS_AS(ewma_sk_step({1.0, 0.0, 3.0}, 1.0, {1.0, 0.96, 0.93}),
                        std::invalid_argument);
        CHECK_THROWS_AS(ewma_sk_step({1.0, 0.0, 3.0}, 1.0, {0.97, 0.0, 0.93}),
                        std::invalid_argument);
    }
}

TEST_CASE("ewma-sk step preserves positivity and boundedness") {
    testsup::NormalSampler normal(31);
    MomentState state{0.5, -0.2, 4.0};
    double max_eta3 = std::abs(state.third);
    double max_eta4 = state.fourth;
    for (int i = 0; i < 2000; ++i) {
        const double residual = 8.0 * normal();
        const double eta = residual / std::sqrt(state.variance);
        max_eta3 = std::max(max_eta3, std::abs(eta * eta * eta));
        max_eta4 = std::max(max_eta4, eta * eta * eta * eta);
        state = ewma_sk_step(state, residual, {0.97, 0.96, 0.93});
        CHECK(state.variance > 0.0);
        CHECK(state.fourth > 0.0);
        // Convex-combination property.
        CHECK(std::abs(state.third) <= max_eta3 + 1e-12);
        CHECK(state.fourth <= max_eta4 + 1e-12);
    }
}

TEST_CASE("ewma-sk filter behaviour") {
    SUBCASE("gaussian iid input keeps shape states near the gaussian point") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            testsup::NormalSampler normal(seed);
            std::vector<double> values;
            for (int i = 0; i < 10000; ++i) values.push_back(normal());
            const auto series = testsup::make_return_series(values);
            DecayParams params;
            params.lambda1 = 0.97;
            params.lambda2 = 0.96;
            params.lambda3 = 0.93;
            params.mu = 0.0;
            const auto path = ewma_sk_filter(series, params, {1.0, 0.0, 3.0});
            double third_avg = 0.0, fourth_avg = 0.0;
            for (const auto& p : path) {
                third_avg += p.state.third;
                fourth_avg += p.state.fourth;
            }
            third_avg /= path.size();
            fourth_avg /= path.size();
            // Standardizing by the *filtered* volatility inflates eta^4
            // slightly (Jensen on the noisy variance state): the simulated
            // average sits near 3.3, not 3 exactly.
            CHECK(std::abs(third_avg) < 0.1);
            CHECK(fourth_avg > 3.0);
            CHECK(fourth_avg < 3.6);
        }
    }
    SUBCASE("constant returns decay the variance at lambda1") {
        const auto series = testsup::make_return_series(std::vector<double>(60, 0.1));
        DecayParams params;
        params.lambda1 = 0.95;
        params.mu = 0.1;
        const auto path = ewma_sk_filter(series, params, {2.0, 0.0, 3.0});
        for (std::size_t t = 0; t < path.size(); ++t) {
            CHECK(path[t].state.variance ==
                  doctest::Approx(2.0 * std::pow(0.95, t)).epsilon(1e-12));
        }
    }
    SUBCASE("a large negative return spikes the third-moment state downward") {
        std::vector<double> values(120, 0.2);
        values[60] = -8.0;
        const auto series = testsup::make_return_series(values);
        DecayParams params;
        params.lambda1 = 0.97;
        params.lambda2 = 0.96;
        params.lambda3 = 0.93;
        params.mu = 0.0;
        const auto path = ewma_sk_filter(series, params, {1.0, 0.0, 3.0});
        CHECK(path[60].state.third >= path[59].state.third - 1e-12);
        CHECK(path[61].state.third < path[60].state.third);
        CHECK(path[61].state.third < -1.0);
        CHECK(path[61].state.fourth > path[60].state.fourth);
    }
}

TEST_CASE("in-sample log-likelihood matches a hand-rolled sum over the path") {
    testsup::NormalSampler normal(77);
    std::vector<double> values;
    for (int i = 0; i < 300; ++i) values.push_back(normal());
    const auto series = testsup::make_return_series(values);

    DecayParams params;
    params.lambda1 = 0.95;
    params.lambda2 = 0.94;
    params.lambda3 = 0.92;
    params.mu = 0.03;
    const MomentState init = default_init_state(series);

    const auto path = ewma_sk_filter(series, params, init);
    double expected = 0.0;
    for (std::size_t t = 0; t < path.size(); ++t) {
        expected += gc_loglik_term(values[t] - params.mu, path[t].state.variance,
                                   path[t].state.shape());
    }
    CHECK(ewma_sk_loglik(series, params, init) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ewma-sk estimation requirements") {
    CHECK_THROWS_AS(estimate_ewma_sk(testsup::make_return_series(std::vector<double>(50, 1.0))),
                    InputError);
    CHECK_THROWS_AS(estimate_ewma_sk(testsup::make_return_series(std::vector<double>(200, 1.0))),
                    InputError);  // zero variance
}

TEST_CASE("iid squared-density draws recover their shape by direct MLE"
          * doctest::test_suite("slow")) {
    // Correct-specification check for the density/optimizer pair, free of
    // any filter dynamics: draw from the production density at a fixed
    // shape via its closed-form CDF and fit (skew, kurt) directly.
    testsup::NormalSampler rng(2025);
    const double true_skew = 0.3, true_kurt = 4.0;
    std::vector<double> draws;
    for (int i = 0; i < 40000; ++i) {
        draws.push_back(testsup::gc_squared_sample(rng.uniform(), true_skew, true_kurt));
    }
    OptimizationProblem p;
    p.objective = [&](std::span<const double> t) {
        double ll = 0.0;
        for (double x : draws) ll += gc_density(x, {t[0], t[1]}).log_density;
        return ll;
    };
    p.initial_point = {0.0, 3.5};
    const auto r = maximize(p, 1e-4, 200);
    REQUIRE(r.converged);
    CHECK(r.point[0] == doctest::Approx(true_skew).epsilon(0.12));
    CHECK(r.point[1] == doctest::Approx(true_kurt).epsilon(0.05));
}

TEST_CASE("simulated decay factors: variance decay is recovered, shape decays "
          "face a structural identifiability limit"
          * doctest::test_suite("slow")) {
    // The simulation draws innovations from the fourth-order expansion
    // density with exact conditional moments equal to the recursion states
    // (reflected into the expansion's positivity region); this is the only
    // stationary reading of the model, whose shape recursions are additive
    // martingales under self-consistent moments. The variance decay is
    // recovered cleanly. The shape decays are not recoverable by any
    // optimizer: the squared-polynomial density's shape parameters are not
    // the moments the filter is hard-wired to track (the pseudo-true
    // parameter is roughly 0.4x the true moment), so freezing the shape at
    // its start dominates tracking and the exact likelihood profile rises
    // monotonically toward lambda = 1. Asserted accordingly.
    const testsup::EwmaSkTruth truth;
    for (std::uint64_t seed : {11u, 12u}) {
        const auto values = testsup::simulate_ewma_sk(truth, 20000, seed);
        const auto series = testsup::make_return_series(values);
        const auto fit = estimate_ewma_sk(series);
        INFO("seed ", seed, ": l1=", fit.params.lambda1, " l2=", fit.params.lambda2,
             " l3=", fit.params.lambda3);
        CHECK(std::abs(fit.params.lambda1 - truth.lambda1) < 0.03);
        CHECK(fit.params.lambda2 > truth.lambda2 - 0.03);  // upward-biased, never below
        CHECK(fit.params.lambda3 > truth.lambda3 - 0.03);
        CHECK(fit.params.lambda2 < 1.0);
        CHECK(fit.params.lambda3 < 1.0);
        CHECK(std::abs(fit.params.mu) < 0.05);
        // Reported likelihood is reproducible from the returned parameters.
        CHECK(fit.params.log_likelihood ==
              doctest::Approx(ewma_sk_loglik(series, fit.params, default_init_state(series)))
                  .epsilon(1e-9));
    }
}

TEST_CASE("richer shape model weakly dominates the gaussian-pinned fit"
          * doctest::test_suite("slow")) {
    testsup::NormalSampler normal(99);
    std::vector<double> values;
    for (int i = 0; i < 4000; ++i) values.push_back(0.9 * normal());
    const auto series = testsup::make_return_series(values);

    const auto fit = estimate_ewma_sk(series);

    // Gaussian-pinned benchmark: shape frozen at (0,3), only (lambda1, mu)
    // estimated, same likelihood family.
    OptimizationProblem pinned;
    pinned.objective = [&](std::span<const double> theta) {
        DecayParams p;
        p.lambda1 = std::clamp(1.0 / (1.0 + std::exp(-theta[0])), 1e-9, 1.0 - 1e-9);
        p.lambda2 = 0.999999999;
        p.lambda3 = 0.999999999;
        p.mu = theta[1];
        return ewma_sk_loglik(series, p, default_init_state(series));
    };
    pinned.initial_point = {std::log(0.94 / 0.06), 0.0};
    const auto pinned_fit = maximize(pinned, 1e-4, 300);

    CHECK(fit.params.log_likelihood >= pinned_fit.value - 0.01);
}
