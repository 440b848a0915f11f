#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ifdiv/errors.hpp"
#include "ifdiv/metrics.hpp"

using namespace ifdiv;

TEST_CASE("lifetime delta") {
    CHECK(lifetime_delta(5.0, 5.0) == 0.0);
    CHECK(lifetime_delta(10.0, 5.0) == 1.0);
    CHECK(lifetime_delta(1.3633e5, 5.0738e6) == doctest::Approx(-0.97313).epsilon(1e-5));
    CHECK_THROWS_AS(lifetime_delta(1.0, 0.0), ValidationError);
}

TEST_CASE("policy deviation") {
    CHECK(policy_deviation(7.0, 7.0, 0.4, 0.4, 0.5) == 0.0);
    CostModel cm;
    cm.eta = 0.07;
    const double c_lte = interface_costs(cm).c1;
    // delta K = 0.02, utilization gap 0.5
    CHECK(policy_deviation(1.02, 1.0, 0.9, 0.4, c_lte) == doctest::Approx(0.0524299).epsilon(1e-6));
    CHECK(policy_deviation(1.02, 1.0, 0.9, 0.4, 0.0) == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("policy deviation is symmetric in utilization and linear in the LTE cost") {
    const double a = policy_deviation(0.9, 1.0, 0.3, 0.7, 0.1);
    const double b = policy_deviation(0.9, 1.0, 0.7, 0.3, 0.1);
    CHECK(a == doctest::Approx(b).epsilon(1e-15));
    const double base = std::abs(lifetime_delta(0.9, 1.0));
    const double doubled = policy_deviation(0.9, 1.0, 0.3, 0.7, 0.2);
    CHECK(doubled - base == doctest::Approx(2.0 * (a - base)).epsilon(1e-12));
}

TEST_CASE("reward loss") {
    CHECK(reward_loss(4.0, 4.0) == 0.0);
    CHECK(reward_loss(99.9, 100.0) == doctest::Approx(0.001).epsilon(1e-9));
    CHECK(reward_loss(100.1, 100.0) == doctest::Approx(0.001).epsilon(1e-9));
    CHECK_THROWS_AS(reward_loss(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(reward_loss(1.0, -3.0), ValidationError);
}

TEST_CASE("comparison report") {
    const PolicyOutcome opt{100.0, 90.0, 0.8};
    const ComparisonReport self = compare(opt, opt, 0.5);
    CHECK(self.delta_lifetime == 0.0);
    CHECK(self.policy_deviation == 0.0);
    CHECK(self.reward_loss == 0.0);
    CHECK(self.utilization_gap == 0.0);

    const ComparisonReport r = compare({95.0, 85.5, 0.6}, opt, 0.5);
    CHECK(r.delta_lifetime == doctest::Approx(-0.05));
    CHECK(r.utilization_gap == doctest::Approx(-0.2));
    CHECK(r.policy_deviation == doctest::Approx(0.05 + 0.1));
    CHECK(r.policy_deviation >= std::abs(r.delta_lifetime));
    CHECK(r.reward_loss == doctest::Approx(0.05));
}
