#ifndef IFDIV_MDP_MODEL_HPP
#define IFDIV_MDP_MODEL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ifdiv/ge_channel.hpp"

namespace ifdiv {

/// Per-interface on/off decision. (0,0) is not a member of the action set.
struct Action {
    std::uint8_t a1 = 1;
    std::uint8_t a2 = 1;

    friend bool operator==(const Action &, const Action &) = default;
};

inline constexpr int kNumActions = 3;

/// Canonical action enumeration; action indices everywhere refer to this array.
inline constexpr std::array<Action, kNumActions> kActions{Action{0, 1}, Action{1, 0}, Action{1, 1}};

int action_index(Action a);
std::string to_string(Action a);

/// Parses "(1,1)", "1,1", "11" and friends. Throws ValidationError.
Action parse_action(std::string_view text);

enum class Outcome : std::uint8_t { Success, Miss };

struct SystemState {
    ChannelState s1 = ChannelState::Good;
    ChannelState s2 = ChannelState::Good;
    int n = 0;

    friend bool operator==(const SystemState &, const SystemState &) = default;
};

struct WeightedState {
    SystemState state;
    double weight;
};

struct CostModel {
    double eta = 0.0;
    double power1_mw = 200.0;
    double power2_mw = 15.85;
    double success_reward = 1.0;
    double miss_reward = -1.0;
};

struct InterfaceCosts {
    double c1;
    double c2;
};

/// c_i = eta * E_i / (E_1 + E_2). Throws ValidationError on zero total power.
InterfaceCosts interface_costs(const CostModel &cm);

double action_cost(const InterfaceCosts &costs, Action a);

/// Tie-break order: ascending energy cost, then (0,1) < (1,0) < (1,1).
/// Returned as indices into kActions.
std::array<int, kNumActions> action_order(const CostModel &cm);

/// Success iff some transmitting interface is Good in the next slot.
constexpr Outcome transmission_outcome(ChannelState next1, ChannelState next2, Action a) {
    const bool delivered = (a.a1 && next1 == ChannelState::Good) ||
                           (a.a2 && next2 == ChannelState::Good);
    return delivered ? Outcome::Success : Outcome::Miss;
}

/// Consecutive-miss counter update; throws ContractViolation when n >= max_misses.
int next_counter(int n, Outcome outcome, int max_misses);

/// T(S, A, S') of the fully observable process. Throws ContractViolation when
/// S is absorbing.
double transition(const SystemState &from, Action a, const SystemState &to,
                  const GEParams &params1, const GEParams &params2, int max_misses);

/// R(S, A, S') = r(n') - c(A).
double reward(const SystemState &from, Action a, const SystemState &to, const CostModel &cm);

enum class ModelKind : std::uint8_t { Full, FPomdp, Hmdp };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

/// What the transmitter knows about one interface. The fully observable model
/// uses only the Known* letters; F-POMDP adds one slot of staleness before
/// falling back to the steady state; H-MDP forgets immediately.
enum class Knowledge : std::uint8_t { KnownGood, KnownBad, StaleFromGood, StaleFromBad, Steady, Unknown };

std::string_view to_string(Knowledge k);

/// Epistemic alphabet of a model kind, in state-enumeration order.
const std::vector<Knowledge> &alphabet(ModelKind kind);

constexpr Knowledge known(ChannelState s) {
    return s == ChannelState::Good ? Knowledge::KnownGood : Knowledge::KnownBad;
}

/// Knowledge of an interface that stays off for one more slot.
Knowledge advance_unobserved(ModelKind kind, Knowledge k);

/// Probability that the interface is Good in the slot the knowledge refers to.
double implied_good_probability(ModelKind kind, Knowledge k, const GEParams &params);

struct ProcessState {
    Knowledge k1;
    Knowledge k2;
    int n;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Finite episodic decision process over (knowledge1, knowledge2, n).
/// States are enumerated n-major, then interface 1, then interface 2 letters.
struct DecisionProcess {
    ModelKind kind = ModelKind::Full;
    int max_misses = 0;
    double discount = 0.99999;
    std::vector<Knowledge> letters;
    std::vector<ProcessState> states;
    /// Per action index: transition matrix and expected one-step reward.
    std::array<SparseMatrix, kNumActions> transitions;
    std::array<Eigen::VectorXd, kNumActions> expected_reward;
    std::array<int, kNumActions> tie_order{0, 1, 2};

    int size() const { return static_cast<int>(states.size()); }
    bool absorbing(int s) const { return states[static_cast<std::size_t>(s)].n >= max_misses; }
    int index_of(Knowledge k1, Knowledge k2, int n) const;
    int index_of(const SystemState &s) const { return index_of(known(s.s1), known(s.s2), s.n); }
    std::string label(int s) const;
};

/// Throws ValidationError unless every non-absorbing row sums to one within
/// tol and absorbing rows are empty.
void check_stochastic(const DecisionProcess &process, double tol = 1e-12);

struct ModelInputs {
    GEParams params1;
    GEParams params2;
    CostModel costs;
    int max_misses = 4;
    double discount = 0.99999;
};

DecisionProcess build_process(ModelKind kind, const ModelInputs &in);
DecisionProcess build_full_mdp(const ModelInputs &in);
DecisionProcess build_fpomdp_mdp(const ModelInputs &in);
DecisionProcess build_hmdp(const ModelInputs &in);

} // namespace ifdiv

#endif
