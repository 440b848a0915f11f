#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ifdiv/errors.hpp"
#include "ifdiv/ge_channel.hpp"
#include "ifdiv/rng.hpp"

using namespace ifdiv;
using fixtures::kLte;
using fixtures::kWifi;

constexpr auto G = ChannelState::Good;
constexpr auto B = ChannelState::Bad;

TEST_CASE("kernel entries") {
    CHECK(transition_prob(kLte, B, G) == 0.2577);
    CHECK(transition_prob(GEParams{0.0, 1.0}, G, B) == 0.0);
    const GEParams half{0.5, 0.5};
    for (auto from : {G, B})
        for (auto to : {G, B})
            CHECK(transition_prob(half, from, to) == 0.5);
}

TEST_CASE("kernel rows are stochastic") {
    for (const GEParams &gp : {kLte, kWifi, GEParams{0.0, 1.0}, GEParams{1.0, 0.0}, GEParams{0.3, 0.7}}) {
        const Eigen::Matrix2d P = transition_matrix(gp);
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(P.row(i).sum() - 1.0) <= 1e-12);
        CHECK(P(0, 1) == gp.p);
        CHECK(P(1, 0) == gp.r);
    }
}

TEST_CASE("steady state values") {
    const SteadyState lte = steady_state(kLte);
    CHECK(lte.good == doctest::Approx(0.93539).epsilon(1e-5));
    CHECK(lte.bad == doctest::Approx(0.06461).epsilon(1e-4));
    const SteadyState wifi = steady_state(kWifi);
    CHECK(wifi.good == doctest::Approx(0.94841).epsilon(1e-5));
    CHECK(wifi.bad == doctest::Approx(0.05159).epsilon(1e-4));
    const SteadyState half = steady_state({0.5, 0.5});
    CHECK(half.good == 0.5);
    CHECK(half.bad == 0.5);
}

TEST_CASE("steady state is a fixed point of the kernel") {
    for (const GEParams &gp : {kLte, kWifi, GEParams{0.2, 0.01}, GEParams{1.0, 1.0}}) {
        const SteadyState pi = steady_state(gp);
        CHECK(std::abs(pi.good + pi.bad - 1.0) <= 1e-12);
        const Eigen::RowVector2d v(pi.good, pi.bad);
        const Eigen::RowVector2d moved = v * transition_matrix(gp);
        CHECK((moved - v).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("degenerate and invalid parameters") {
    CHECK_THROWS_AS(steady_state({0.0, 0.0}), DegenerateChainError);
    CHECK_THROWS_AS(validate({-0.1, 0.5}), ValidationError);
    CHECK_THROWS_AS(validate({0.5, 1.5}), ValidationError);
    CHECK_THROWS_AS(validate({std::nan(""), 0.5}), ValidationError);
    CHECK_NOTHROW(validate({0.0, 0.0}));
}

TEST_CASE("step uses strict thresholds") {
    CHECK(step(kLte, G, 0.01) == B);
    CHECK(step(kWifi, B, 0.95) == B);
    CHECK(step(GEParams{0.25, 0.5}, G, 0.25) == G);
    CHECK(step(GEParams{0.25, 0.5}, B, 0.5) == B);
    CHECK(step(GEParams{0.0, 0.5}, G, 0.0) == G);
    CHECK(step(GEParams{1.0, 0.5}, G, 0.9999999) == B);
}

TEST_CASE("empirical kernel frequencies match within 3 binomial SE") {
    Xoshiro256 rng(2024);
    constexpr int draws = 1000000;
    for (const GEParams &gp : {kLte, kWifi}) {
        for (auto from : {G, B}) {
            int left = 0;
            for (int i = 0; i < draws; ++i)
                left += step(gp, from, uniform01(rng)) != from;
            const double q = from == G ? gp.p : gp.r;
            const double se = std::sqrt(q * (1 - q) / draws);
            CHECK(std::abs(static_cast<double>(left) / draws - q) <= 3 * se);
        }
    }
}

TEST_CASE("scaling both rates keeps the steady state") {
    Xoshiro256 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const GEParams gp{0.001 + 0.499 * uniform01(rng), 0.001 + 0.499 * uniform01(rng)};
        const double delta = -0.9 + 1.8 * uniform01(rng);
        const GEParams scaled = scale_rates(gp, delta);
        CHECK(scaled.p == doctest::Approx((1.0 + delta) * gp.p).epsilon(1e-15));
        CHECK(std::abs(scaled.p / (scaled.p + scaled.r) - gp.p / (gp.p + gp.r)) <= 1e-12);
    }
}

TEST_CASE("rate scaling rejects invalid errors") {
    CHECK_THROWS_AS(scale_rates(fixtures::kLte, -1.0), ValidationError);
    CHECK_THROWS_AS(scale_rates(fixtures::kWifi, 0.1), ValidationError); // r2 * 1.1 > 1
    CHECK(scale_rates(fixtures::kLte, 0.0).r == 0.2577);
}
