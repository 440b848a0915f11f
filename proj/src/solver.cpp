#include "ifdiv/solver.hpp"

#include <Eigen/SparseCore>

#include "ifdiv/errors.hpp"

namespace ifdiv {

SolveResult value_iteration(const DecisionProcess &process, const ValueIterationOptions &options) {
    if (!(options.epsilon >= 0.0) || options.max_iterations < 1)
        throw ValidationError("value iteration needs epsilon >= 0 and at least one iteration");
    const int size = process.size();
    const double gamma = process.discount;

    Eigen::Matrix<bool, Eigen::Dynamic, 1> live(size);
    for (int s = 0; s < size; ++s)
        live(s) = !process.absorbing(s);

    SolveResult result;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(size, kNumActions);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
    Eigen::VectorXd next(size);
    for (long k = 1; k <= options.max_iterations; ++k) {
        for (int a = 0; a < kNumActions; ++a) {
            const auto ai = static_cast<std::size_t>(a);
            q.col(a).noalias() = process.expected_reward[ai];
            q.col(a).noalias() += gamma * (process.transitions[ai] * v);
        }
        next = live.select(q.rowwise().maxCoeff(), Eigen::VectorXd::Zero(size));
        const double delta = (next - v).cwiseAbs().maxCoeff();
        v.swap(next);
        result.iterations = k;
        result.last_delta = delta;
        if (delta <= options.epsilon) {
            result.converged = true;
            break;
        }
    }
    result.table.q = std::move(q);
    result.table.v = std::move(v);
    return result;
}

Policy greedy_policy(const QTable &table, const DecisionProcess &process) {
    Policy policy(static_cast<std::size_t>(process.size()),
                  kActions[static_cast<std::size_t>(process.tie_order[0])]);
    for (int s = 0; s < process.size(); ++s) {
        if (process.absorbing(s))
            continue;
        int best = process.tie_order[0];
        for (int a : process.tie_order)
            if (table.q(s, a) > table.q(s, best))
                best = a;
        policy[static_cast<std::size_t>(s)] = kActions[static_cast<std::size_t>(best)];
    }
    return policy;
}

Policy constant_policy(const DecisionProcess &process, Action a) {
    action_index(a);
    return Policy(static_cast<std::size_t>(process.size()), a);
}

SolvedModel solve_model(ModelKind kind, const ModelInputs &inputs, const ValueIterationOptions &options) {
    SolvedModel out;
    out.process = build_process(kind, inputs);
    out.solution = value_iteration(out.process, options);
    out.policy = greedy_policy(out.solution.table, out.process);
    return out;
}

} // namespace ifdiv
