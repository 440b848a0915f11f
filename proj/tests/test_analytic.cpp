#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ifdiv/analytic.hpp"
#include "ifdiv/errors.hpp"

using namespace ifdiv;
using oracles::wifi_only_lifetime;

namespace {

ChainAnalysis fixed_policy(const ModelInputs &in, Action a) {
    const DecisionProcess proc = build_full_mdp(in);
    auto res = analyze(proc, constant_policy(proc, a), embed_initial(proc, initial_distribution(in.params1, in.params2)));
    REQUIRE(res.has_value());
    return *res;
}

} // namespace

TEST_CASE("initial distribution") {
    const auto init = initial_distribution(fixtures::kLte, fixtures::kWifi);
    CHECK(init[0].weight == doctest::Approx(0.887135).epsilon(1e-5));
    CHECK(init[3].state.n == 1);
    double total = 0.0;
    for (const auto &ws : init)
        total += ws.weight;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

    const auto point = initial_distribution({0.0, 0.3}, {0.0, 0.9});
    CHECK(point[0].weight == 1.0);
    CHECK(point[1].weight == 0.0);
    CHECK_THROWS_AS(initial_distribution({0.0, 0.0}, fixtures::kWifi), DegenerateChainError);
}

TEST_CASE("all-on lifetime and occupancy, default parameters") {
    const ChainAnalysis a = fixed_policy(fixtures::reference(), {1, 1});
    CHECK(std::abs(a.expected_lifetime / 5.0738e6 - 1.0) <= 0.01);
    const std::array<double, 4> published{0.9967, 0.0032, 0.000127, 4.9971e-6};
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(a.occupancy[k] / published[k] - 1.0) <= 0.05);
    CHECK(a.utilization[0] == doctest::Approx(1.0));
    CHECK(a.utilization[1] == doctest::Approx(1.0));
}

TEST_CASE("Wi-Fi-only lifetime and occupancy, default parameters") {
    const ChainAnalysis a = fixed_policy(fixtures::reference(), {0, 1});
    CHECK(std::abs(a.expected_lifetime / 1.3633e5 - 1.0) <= 0.01);
    const std::array<double, 4> published{0.9484, 0.0489, 0.0026, 0.000138};
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(a.occupancy[k] / published[k] - 1.0) <= 0.05);
    CHECK(a.utilization[0] == 0.0);
    CHECK(a.utilization[1] == doctest::Approx(1.0));
}

TEST_CASE("Wi-Fi-only lifetime matches the run-length recursion") {
    for (int N : {1, 2, 3, 4, 6}) {
        const ModelInputs in = fixtures::reference(0.0, N);
        const double oracle = wifi_only_lifetime(in.params1, in.params2, N);
        CHECK(std::abs(fixed_policy(in, {0, 1}).expected_lifetime / oracle - 1.0) <= 1e-6);
    }
}

TEST_CASE("analysis invariants") {
    for (double eta : {0.0, 0.07, 1.0})
        for (Action act : kActions) {
            const ModelInputs in = fixtures::reference(eta);
            const DecisionProcess proc = build_full_mdp(in);
            const auto a =
                analyze(proc, constant_policy(proc, act), embed_initial(proc, initial_distribution(in.params1, in.params2)));
            REQUIRE(a.has_value());
            double occ = 0.0;
            for (double x : a->occupancy)
                occ += x;
            CHECK(std::abs(occ - 1.0) <= 1e-9);
            CHECK(a->residual <= 1e-9);
            CHECK(a->expected_lifetime > 0.0);
            CHECK(std::isfinite(a->expected_lifetime));
            // expected reward = lifetime weighted per-slot rewards: bounded by [-1-eta, 1] per slot
            CHECK(a->expected_total_reward <= a->expected_lifetime);
            CHECK(a->expected_total_reward >= -(1.0 + eta) * a->expected_lifetime);
        }
}

TEST_CASE("duplication outlives either single path") {
    for (const auto &[lte, wifi] : {std::pair{fixtures::kLte, fixtures::kWifi},
                                    std::pair{GEParams{0.3, 0.2}, GEParams{0.1, 0.4}},
                                    std::pair{GEParams{0.05, 0.9}, GEParams{0.5, 0.5}}}) {
        ModelInputs in = fixtures::reference(0.0, 3);
        in.params1 = lte;
        in.params2 = wifi;
        const double both = fixed_policy(in, {1, 1}).expected_lifetime;
        CHECK(both >= fixed_policy(in, {1, 0}).expected_lifetime);
        CHECK(both >= fixed_policy(in, {0, 1}).expected_lifetime);
    }
}

TEST_CASE("expected reward at zero cost is successes minus misses") {
    const ModelInputs in = fixtures::reference(0.0, 2);
    const ChainAnalysis a = fixed_policy(in, {0, 1});
    // At eta = 0 a slot earns +1 or -1. Visits to n >= 1 are entered by a miss,
    // except an initial (B,B,1) start; the absorbing miss comes on top.
    const double start_bb = initial_distribution(in.params1, in.params2)[3].weight;
    const double misses = a.expected_lifetime * (1.0 - a.occupancy[0]) - start_bb + 1.0;
    CHECK(a.expected_total_reward == doctest::Approx(a.expected_lifetime - 2.0 * misses).epsilon(1e-9));
}

TEST_CASE("non-absorbing policies are reported, not solved") {
    // Wi-Fi that recovers every slot can never miss twice in a row
    ModelInputs in = fixtures::reference(0.0, 2);
    in.params2 = {0.3, 1.0};
    const DecisionProcess proc = build_full_mdp(in);
    const auto init = embed_initial(proc, initial_distribution(in.params1, in.params2));
    CHECK_FALSE(analyze(proc, constant_policy(proc, {0, 1}), init).has_value());
    CHECK(analyze(proc, constant_policy(proc, {1, 0}), init).has_value());

    ModelInputs never_bad = fixtures::reference(0.0, 4);
    never_bad.params1 = {0.0, 0.5};
    never_bad.params2 = {0.0, 0.5};
    const DecisionProcess p2 = build_full_mdp(never_bad);
    CHECK_FALSE(
        analyze(p2, constant_policy(p2, {1, 1}), embed_initial(p2, initial_distribution(never_bad.params1, never_bad.params2)))
            .has_value());
}

TEST_CASE("input validation") {
    const DecisionProcess proc = build_full_mdp(fixtures::reference());
    CHECK_THROWS_AS(analyze(proc, Policy(3, Action{1, 1}), Eigen::VectorXd::Zero(proc.size())), ValidationError);
}
