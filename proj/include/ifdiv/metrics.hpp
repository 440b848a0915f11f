#ifndef IFDIV_METRICS_HPP
#define IFDIV_METRICS_HPP

namespace ifdiv {

/// (K_pi - K_star) / K_star; positive means the candidate outlives the optimum.
double lifetime_delta(double lifetime, double optimal_lifetime);

/// |delta K| + |u_pi - u_star| * c_lte, with c_lte taken at the experiment's eta.
double policy_deviation(double lifetime, double optimal_lifetime, double utilization,
                        double optimal_utilization, double lte_cost);

/// |R_star - R_pi| / R_star. Throws ValidationError unless R_star > 0.
double reward_loss(double reward, double optimal_reward);

struct ComparisonReport {
    double delta_lifetime = 0.0;
    double policy_deviation = 0.0;
    double reward_loss = 0.0;
    double utilization_gap = 0.0;
};

struct PolicyOutcome {
    double lifetime;
    double total_reward;
    double lte_utilization;
};

ComparisonReport compare(const PolicyOutcome &candidate, const PolicyOutcome &optimal, double lte_cost);

} // namespace ifdiv

#endif
