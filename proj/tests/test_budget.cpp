#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "qfp/budget.hpp"
#include "qfp/channels.hpp"
#include "qfp/rng.hpp"

using namespace qfp;
using Catch::Approx;

namespace {

constexpr double kSqrt3Local = 1.7320508075688772935;

BudgetParams deployed_params(BudgetMode mode) {
    BudgetParams p;
    p.delta = 0.5;
    p.epsilon_a = 0.15;
    p.frame_c = kSqrt3Local;
    p.k = 6;
    p.opnorm_b = 1.0;
    p.eta = 0.05;
    p.mode = mode;
    return p;
}

Fingerprint fp_of(std::vector<double> values) {
    Fingerprint fp;
    for (std::size_t i = 0; i < values.size(); ++i)
        fp.labels.push_back("O" + std::to_string(i));
    fp.values = std::move(values);
    return fp;
}

}  // namespace

TEST_CASE("detection_margin") {
    SECTION("deployed parameters give gamma ~ 0.139") {
        CHECK(detection_margin(0.5, kSqrt3Local, 0.15) == Approx(0.139).margin(5e-4));
        CHECK(detection_margin(0.5, kSqrt3Local, 0.15) ==
              Approx(0.5 / kSqrt3Local - 0.15).margin(1e-15));
    }
    SECTION("tier-3 constant at the deployed tolerance is infeasible") {
        CHECK_THROWS_AS(detection_margin(0.5, 3.73, 0.15), NonPositiveMarginError);
        try {
            detection_margin(0.5, 3.73, 0.15);
        } catch (const NonPositiveMarginError& e) {
            CHECK(e.gamma() < 0.0);
        }
    }
    SECTION("tier-3 constant at the tightened tolerance") {
        CHECK(detection_margin(0.5, 3.73, 0.05) == Approx(0.084).margin(5e-4));
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(detection_margin(0.0, 1.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(detection_margin(0.5, 0.0, 0.1), std::invalid_argument);
    }
}

TEST_CASE("shot_budget regression") {
    SECTION("precomputed budget is exactly 3420 at the deployed parameters") {
        CHECK(shot_budget(deployed_params(BudgetMode::Precomputed)) == 3420);
    }
    SECTION("sampled budget is exactly 13680, 2280 per observable") {
        const long long n = shot_budget(deployed_params(BudgetMode::Sampled));
        CHECK(n == 13680);
        CHECK(shots_per_observable(n, 6) == 2280);
    }
    SECTION("tier2 table value within 2%") {
        BudgetParams p = deployed_params(BudgetMode::Sampled);
        p.frame_c = 2.21;
        p.k = 9;
        const long long n = shot_budget(p);
        CHECK(std::abs(static_cast<double>(n) - 72700.0) <= 0.02 * 72700.0);
    }
    SECTION("ceiling allocation") {
        CHECK(shots_per_observable(10, 3) == 4);
        CHECK(shots_per_observable(9, 3) == 3);
        CHECK_THROWS_AS(shots_per_observable(0, 3), std::invalid_argument);
    }
    SECTION("margin error propagates") {
        BudgetParams p = deployed_params(BudgetMode::Sampled);
        p.frame_c = 3.73;
        CHECK_THROWS_AS(shot_budget(p), NonPositiveMarginError);
    }
}

TEST_CASE("budget properties over random parameter tuples") {
    Rng rng(1234);
    int tried = 0;
    while (tried < 200) {
        BudgetParams p;
        p.delta = 0.1 + rng.uniform() * 2.0;
        p.frame_c = 0.5 + rng.uniform() * 3.0;
        p.epsilon_a = 0.01 + rng.uniform() * 0.3;
        p.k = 1 + static_cast<int>(rng.uniform_index(20));
        p.opnorm_b = 0.5 + rng.uniform();
        p.eta = 0.001 + rng.uniform() * 0.5;
        if (p.delta / p.frame_c <= p.epsilon_a) continue;
        ++tried;

        p.mode = BudgetMode::Precomputed;
        const double pre = shot_budget_raw(p);
        p.mode = BudgetMode::Sampled;
        const double sampled = shot_budget_raw(p);
        // sampled = 4x precomputed exactly, before rounding
        CHECK(sampled == 4.0 * pre);

        // N strictly decreases when gamma grows (epsilon shrinks)
        BudgetParams wider = p;
        wider.epsilon_a = p.epsilon_a * 0.5;
        CHECK(shot_budget_raw(wider) < sampled);

        // N strictly increases in k log(2k/eta)
        BudgetParams larger = p;
        larger.k = p.k + 5;
        CHECK(shot_budget_raw(larger) > sampled);
    }
}

TEST_CASE("hoeffding coverage at the precomputed per-observable budget") {
    // estimating a known expectation with n_O = ceil(3420/6) shots misses by
    // more than gamma in far fewer than eta = 5% of trials
    const long long n_o = shots_per_observable(3420, 6);
    REQUIRE(n_o == 570);
    const double gamma = detection_margin(0.5, kSqrt3Local, 0.15);

    const Circuit channel = kernel_circuit(ChannelSpec::honest(), {0.4, 1.2}, {1.1, 0.3});
    const PauliObservable obs = parse_observable("Z1", 2);
    const Statevector state = run_circuit(channel, Statevector::zero(2));
    const double mu = pauli_expectation_exact(state, obs);

    int misses = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(4711, static_cast<std::uint64_t>(t)));
        const Counts counts = sample_counts(state, n_o, NoiseModel{}, rng);
        if (std::abs(expectation_from_counts(counts, obs) - mu) > gamma) ++misses;
    }
    CHECK(static_cast<double>(misses) / trials <= 0.05);
}

TEST_CASE("calibrate_tolerance") {
    SECTION("three timepoints with staggered pairwise maxima") {
        // pairwise maxima (0.067, 0.067, 0.046) over two observables
        const std::vector<Fingerprint> fps{fp_of({0.0, 0.0}), fp_of({0.067, 0.021}),
                                           fp_of({0.021, 0.067})};
        const ToleranceInterval interval = calibrate_tolerance(fps, 0.5, kSqrt3Local);
        CHECK(interval.d_typ == Approx(0.067).margin(1e-12));
        CHECK(interval.upper == Approx(0.289).margin(1e-3));
        CHECK_FALSE(interval.empty);
        CHECK(interval.recommended == Approx(0.178).margin(1e-3));
    }
    SECTION("identical fingerprints give a zero lower endpoint") {
        const std::vector<Fingerprint> fps{fp_of({0.1, -0.2}), fp_of({0.1, -0.2}),
                                           fp_of({0.1, -0.2})};
        const ToleranceInterval interval = calibrate_tolerance(fps, 0.5, kSqrt3Local);
        CHECK(interval.d_typ == 0.0);
        CHECK_FALSE(interval.empty);
        CHECK(interval.recommended == Approx(0.5 / kSqrt3Local / 2.0));
    }
    SECTION("d_typ beyond delta_min/C flags an empty interval") {
        const std::vector<Fingerprint> fps{fp_of({0.0}), fp_of({0.30})};
        const ToleranceInterval interval = calibrate_tolerance(fps, 0.5, kSqrt3Local);
        CHECK(interval.empty);
        CHECK(std::isnan(interval.recommended));
    }
    SECTION("permutation invariance") {
        std::vector<Fingerprint> fps{fp_of({0.0, 0.0}), fp_of({0.05, 0.01}),
                                     fp_of({0.01, 0.08})};
        const ToleranceInterval a = calibrate_tolerance(fps, 0.5, kSqrt3Local);
        std::swap(fps[0], fps[2]);
        const ToleranceInterval b = calibrate_tolerance(fps, 0.5, kSqrt3Local);
        std::swap(fps[1], fps[2]);
        const ToleranceInterval c = calibrate_tolerance(fps, 0.5, kSqrt3Local);
        CHECK(a.d_typ == b.d_typ);
        CHECK(a.d_typ == c.d_typ);
        CHECK(a.recommended == b.recommended);
    }
    SECTION("preconditions") {
        CHECK_THROWS_AS(calibrate_tolerance({fp_of({0.0})}, 0.5, kSqrt3Local),
                        std::invalid_argument);
        CHECK_THROWS_AS(calibrate_tolerance({fp_of({0.0}), fp_of({0.0, 0.1})}, 0.5, kSqrt3Local),
                        std::invalid_argument);
    }
}

TEST_CASE("compose_tolerances") {
    CHECK(compose_tolerances({0.05, 0.05, 0.05}) == Approx(0.15));
    CHECK(compose_tolerances({}) == 0.0);
    CHECK(compose_tolerances({0.3}) == 0.3);
    CHECK_THROWS_AS(compose_tolerances({0.1, -0.2}), std::invalid_argument);
}
