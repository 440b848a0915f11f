#ifndef IFDIV_BELIEF_POLICY_HPP
#define IFDIV_BELIEF_POLICY_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ifdiv/ge_channel.hpp"
#include "ifdiv/mdp_model.hpp"
#include "ifdiv/solver.hpp"

namespace ifdiv {

/// Probability that each interface was Good in the slot of the last
/// transmission, plus the (always observed) miss counter.
struct Belief {
    double good1 = 1.0;
    double good2 = 1.0;
    int n = 0;
};

/// Feedback after a slot. An empty o_i means the interface was off and the
/// base station gave no side information.
struct Observation {
    std::optional<ChannelState> o1;
    std::optional<ChannelState> o2;
    int n = 0;
};

/// One-step belief propagation f_G(b) = (1-p) b + r (1-b).
constexpr double propagate_good(double good, const GEParams &params) {
    return (1.0 - params.p) * good + params.r * (1.0 - good);
}

Belief update_belief(const Belief &b, const Observation &o, const GEParams &params1,
                     const GEParams &params2);

/// Product-form distribution over (G,G,n), (G,B,n), (B,G,n), (B,B,n).
std::array<WeightedState, 4> joint_belief(const Belief &b);

/// Belief-averaged Q-value rule. `full` must be the fully observable process
/// that produced `table`. Throws ContractViolation when b.n is absorbing.
Action qmdp_action(const Belief &b, const QTable &table, const DecisionProcess &full);

enum class AgentKind { FullMdp, Qmdp, FPomdp, Hmdp, Fixed };

struct AgentSpec {
    AgentKind kind = AgentKind::Qmdp;
    Action fixed{1, 1};
};

/// Accepts fullmdp, qmdp, fpomdp, hmdp and fixed:(a1,a2).
AgentSpec parse_agent_spec(std::string_view text);
std::string to_string(const AgentSpec &spec);

/// Runtime decision maker: observation in, action out. Instances carry
/// per-episode state; clone() yields a fresh copy sharing the solved tables.
class Agent {
  public:
    virtual ~Agent() = default;

    virtual AgentKind kind() const = 0;

    /// True when the agent must see every interface each slot (alpha = 1).
    virtual bool needs_full_observation() const { return false; }

    virtual void reset() {}

    virtual Action decide(const Observation &o) = 0;

    virtual std::unique_ptr<Agent> clone() const = 0;
};

class FixedAgent final : public Agent {
  public:
    explicit FixedAgent(Action a);
    AgentKind kind() const override { return AgentKind::Fixed; }
    Action decide(const Observation &o) override;
    std::unique_ptr<Agent> clone() const override;

  private:
    Action m_action;
};

/// Looks up the fully observable policy; rejects masked observations.
class FullMdpAgent final : public Agent {
  public:
    FullMdpAgent(std::shared_ptr<const DecisionProcess> process, Policy policy);
    AgentKind kind() const override { return AgentKind::FullMdp; }
    bool needs_full_observation() const override { return true; }
    Action decide(const Observation &o) override;
    std::unique_ptr<Agent> clone() const override;

  private:
    int m_max_misses;
    std::shared_ptr<const Policy> m_policy;
};

/// Belief tracking plus the Q-MDP action rule.
class QmdpAgent final : public Agent {
  public:
    QmdpAgent(const DecisionProcess &full, const QTable &table, const GEParams &model1,
              const GEParams &model2);
    AgentKind kind() const override { return AgentKind::Qmdp; }
    void reset() override;
    Action decide(const Observation &o) override;
    std::unique_ptr<Agent> clone() const override;

    const Belief &belief() const { return m_belief; }

  private:
    // q[(n * 4 + combo) * kNumActions + action], combo = 2*s1 + s2
    std::shared_ptr<const std::vector<double>> m_q;
    // argmax for degenerate beliefs, indexed n * 4 + combo
    std::shared_ptr<const std::vector<Action>> m_point_actions;
    std::array<int, kNumActions> m_order;
    int m_max_misses;
    GEParams m_model1;
    GEParams m_model2;
    Belief m_belief;
};

/// F-POMDP and H-MDP agents: track the finite knowledge state and look up the
/// policy solved on the corresponding reduced process.
class KnowledgeAgent final : public Agent {
  public:
    KnowledgeAgent(std::shared_ptr<const DecisionProcess> process, Policy policy);
    AgentKind kind() const override;
    void reset() override;
    Action decide(const Observation &o) override;
    std::unique_ptr<Agent> clone() const override;

    Knowledge knowledge1() const { return m_k1; }
    Knowledge knowledge2() const { return m_k2; }

  private:
    std::shared_ptr<const DecisionProcess> m_process;
    std::shared_ptr<const Policy> m_policy;
    Knowledge m_k1;
    Knowledge m_k2;
};

/// Solves the process the agent kind needs on `model` (the agent's view of the
/// channels) and wraps it. Non-convergence is reported through `solution`
/// when given; the last iterate is used either way.
std::unique_ptr<Agent> make_agent(const AgentSpec &spec, const ModelInputs &model,
                                  const ValueIterationOptions &options = {},
                                  SolveResult *solution = nullptr);

} // namespace ifdiv

#endif
