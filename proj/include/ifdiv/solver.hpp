#ifndef IFDIV_SOLVER_HPP
#define IFDIV_SOLVER_HPP

#include <vector>

#include <Eigen/Core>

#include "ifdiv/mdp_model.hpp"

namespace ifdiv {

struct ValueIterationOptions {
    double epsilon = 1e-11;
    long max_iterations = 100000;
};

/// Q is states x kNumActions (columns follow kActions); V = max_A Q on
/// non-absorbing states and 0 on absorbing ones.
struct QTable {
    Eigen::MatrixXd q;
    Eigen::VectorXd v;
};

struct SolveResult {
    QTable table;
    long iterations = 0;
    bool converged = false;
    /// sup-norm of the last V update
    double last_delta = 0.0;
};

/// Synchronous value iteration from V = 0. Stops once
/// max_S |V^k(S) - V^{k-1}(S)| <= epsilon; hitting max_iterations returns the
/// last iterate with converged = false.
SolveResult value_iteration(const DecisionProcess &process, const ValueIterationOptions &options = {});

/// Greedy state -> action map; entries for absorbing states are unused.
using Policy = std::vector<Action>;

/// argmax_A Q(S, A) with ties resolved by the process' cost ordering.
Policy greedy_policy(const QTable &table, const DecisionProcess &process);

Policy constant_policy(const DecisionProcess &process, Action a);

/// A built process together with its value-iteration solution and greedy policy.
struct SolvedModel {
    DecisionProcess process;
    SolveResult solution;
    Policy policy;
};

SolvedModel solve_model(ModelKind kind, const ModelInputs &inputs, const ValueIterationOptions &options = {});

} // namespace ifdiv

#endif
