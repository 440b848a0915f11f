#ifndef IFDIV_ANALYTIC_HPP
#define IFDIV_ANALYTIC_HPP

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ifdiv/mdp_model.hpp"
#include "ifdiv/solver.hpp"

namespace ifdiv {

/// Start-of-episode distribution with both interfaces observed: each channel
/// drawn from its steady state; both Bad means the first slot already missed.
/// Order: (G,G,0), (G,B,0), (B,G,0), (B,B,1).
std::array<WeightedState, 4> initial_distribution(const GEParams &params1, const GEParams &params2);

/// Places the initial distribution on the process' Known x Known states.
Eigen::VectorXd embed_initial(const DecisionProcess &process, const std::array<WeightedState, 4> &init);

struct ChainAnalysis {
    /// expected number of slots before absorption
    double expected_lifetime = 0.0;
    /// undiscounted expected sum of rewards until absorption
    double expected_total_reward = 0.0;
    /// fraction of pre-absorption slots spent at n = 0 .. N-1
    std::vector<double> occupancy;
    /// fraction of slots each interface transmits
    std::array<double, 2> utilization{};
    /// expected visits per process state (zero for absorbing and unreachable)
    Eigen::VectorXd visits;
    /// sup-norm residual of the fundamental-matrix solve
    double residual = 0.0;
};

/// Absorbing-chain analysis of a frozen policy. Returns nullopt when some
/// state reachable from `init` cannot reach absorption (infinite lifetime).
std::optional<ChainAnalysis> analyze(const DecisionProcess &process, const Policy &policy,
                                     const Eigen::VectorXd &init);

} // namespace ifdiv

#endif
