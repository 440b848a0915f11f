#include "ifdiv/metrics.hpp"

#include <cmath>

#include "ifdiv/errors.hpp"

namespace ifdiv {

double lifetime_delta(double lifetime, double optimal_lifetime) {
    if (!(optimal_lifetime > 0.0))
        throw ValidationError("reference lifetime must be positive");
    return (lifetime - optimal_lifetime) / optimal_lifetime;
}

double policy_deviation(double lifetime, double optimal_lifetime, double utilization,
                        double optimal_utilization, double lte_cost) {
    return std::abs(lifetime_delta(lifetime, optimal_lifetime)) +
           std::abs(utilization - optimal_utilization) * lte_cost;
}

double reward_loss(double reward, double optimal_reward) {
    if (optimal_reward == 0.0)
        throw ValidationError("reference reward is zero; relative loss undefined");
    if (optimal_reward < 0.0)
        throw ValidationError("reference reward is negative; relative loss is not meaningful");
    return std::abs(optimal_reward - reward) / optimal_reward;
}

ComparisonReport compare(const PolicyOutcome &candidate, const PolicyOutcome &optimal, double lte_cost) {
    ComparisonReport r;
    r.delta_lifetime = lifetime_delta(candidate.lifetime, optimal.lifetime);
    r.utilization_gap = candidate.lte_utilization - optimal.lte_utilization;
    r.policy_deviation = policy_deviation(candidate.lifetime, optimal.lifetime, candidate.lte_utilization,
                                          optimal.lte_utilization, lte_cost);
    r.reward_loss = reward_loss(candidate.total_reward, optimal.total_reward);
    return r;
}

} // namespace ifdiv
