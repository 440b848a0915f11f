#include "ifdiv/analytic.hpp"

#include <cmath>
#include <deque>

#include <Eigen/LU>

#include "ifdiv/errors.hpp"

namespace ifdiv {

std::array<WeightedState, 4> initial_distribution(const GEParams &params1, const GEParams &params2) {
    constexpr auto G = ChannelState::Good;
    constexpr auto B = ChannelState::Bad;
    const SteadyState pi1 = steady_state(params1);
    const SteadyState pi2 = steady_state(params2);
    return {{
        {{G, G, 0}, pi1.good * pi2.good},
        {{G, B, 0}, pi1.good * pi2.bad},
        {{B, G, 0}, pi1.bad * pi2.good},
        {{B, B, 1}, pi1.bad * pi2.bad},
    }};
}

Eigen::VectorXd embed_initial(const DecisionProcess &process, const std::array<WeightedState, 4> &init) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(process.size());
    for (const WeightedState &ws : init)
        out(process.index_of(ws.state)) += ws.weight;
    return out;
}

std::optional<ChainAnalysis> analyze(const DecisionProcess &process, const Policy &policy,
                                     const Eigen::VectorXd &init) {
    const int size = process.size();
    if (static_cast<int>(policy.size()) != size || init.size() != size)
        throw ValidationError("policy/initial distribution size does not match the process");

    auto action_of = [&](int s) {
        return static_cast<std::size_t>(action_index(policy[static_cast<std::size_t>(s)]));
    };

    // Forward reachability from the initial support under the policy.
    std::vector<char> reached(static_cast<std::size_t>(size), 0);
    std::deque<int> frontier;
    for (int s = 0; s < size; ++s)
        if (init(s) > 0.0) {
            reached[static_cast<std::size_t>(s)] = 1;
            frontier.push_back(s);
        }
    std::vector<std::vector<int>> predecessors(static_cast<std::size_t>(size));
    for (int s = 0; s < size; ++s) {
        if (process.absorbing(s))
            continue;
        for (SparseMatrix::InnerIterator it(process.transitions[action_of(s)], s); it; ++it)
            if (it.value() > 0.0)
                predecessors[static_cast<std::size_t>(it.col())].push_back(s);
    }
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop_front();
        if (process.absorbing(s))
            continue;
        for (SparseMatrix::InnerIterator it(process.transitions[action_of(s)], s); it; ++it) {
            auto &flag = reached[static_cast<std::size_t>(it.col())];
            if (it.value() > 0.0 && !flag) {
                flag = 1;
                frontier.push_back(static_cast<int>(it.col()));
            }
        }
    }

    // Backward reachability from the absorbing set.
    std::vector<char> escapes(static_cast<std::size_t>(size), 0);
    for (int s = 0; s < size; ++s)
        if (process.absorbing(s)) {
            escapes[static_cast<std::size_t>(s)] = 1;
            frontier.push_back(s);
        }
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop_front();
        for (int pred : predecessors[static_cast<std::size_t>(s)])
            if (!escapes[static_cast<std::size_t>(pred)]) {
                escapes[static_cast<std::size_t>(pred)] = 1;
                frontier.push_back(pred);
            }
    }

    std::vector<int> transient;
    std::vector<int> position(static_cast<std::size_t>(size), -1);
    for (int s = 0; s < size; ++s) {
        if (!reached[static_cast<std::size_t>(s)] || process.absorbing(s))
            continue;
        if (!escapes[static_cast<std::size_t>(s)])
            return std::nullopt;
        position[static_cast<std::size_t>(s)] = static_cast<int>(transient.size());
        transient.push_back(s);
    }

    // Expected visits x solve (I - Q)^T x = init restricted to transient states.
    const auto m = static_cast<Eigen::Index>(transient.size());
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const int s = transient[static_cast<std::size_t>(i)];
        rhs(i) = init(s);
        for (SparseMatrix::InnerIterator it(process.transitions[action_of(s)], s); it; ++it) {
            const int j = position[static_cast<std::size_t>(it.col())];
            if (j >= 0)
                system(j, i) -= it.value();
        }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd x = lu.solve(rhs);
    for (int round = 0; round < 2; ++round)
        x += lu.solve(rhs - system * x);

    ChainAnalysis out;
    out.residual = m > 0 ? (system * x - rhs).cwiseAbs().maxCoeff() : 0.0;
    out.visits = Eigen::VectorXd::Zero(size);
    out.occupancy.assign(static_cast<std::size_t>(process.max_misses), 0.0);
    for (Eigen::Index i = 0; i < m; ++i) {
        const int s = transient[static_cast<std::size_t>(i)];
        const double visits = x(i);
        const auto a = action_of(s);
        const Action act = kActions[a];
        out.visits(s) = visits;
        out.expected_lifetime += visits;
        out.expected_total_reward += visits * process.expected_reward[a](s);
        out.occupancy[static_cast<std::size_t>(process.states[static_cast<std::size_t>(s)].n)] += visits;
        out.utilization[0] += visits * act.a1;
        out.utilization[1] += visits * act.a2;
    }
    if (out.expected_lifetime > 0.0) {
        for (double &o : out.occupancy)
            o /= out.expected_lifetime;
        out.utilization[0] /= out.expected_lifetime;
        out.utilization[1] /= out.expected_lifetime;
    }
    return out;
}

} // namespace ifdiv
