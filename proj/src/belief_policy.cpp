#include "ifdiv/belief_policy.hpp"

#include <string>

#include "ifdiv/errors.hpp"

namespace ifdiv {

namespace {

double observe_or_propagate(double good, const std::optional<ChannelState> &o, const GEParams &params) {
    if (o)
        return *o == ChannelState::Good ? 1.0 : 0.0;
    return propagate_good(good, params);
}

int combo_index(ChannelState s1, ChannelState s2) {
    return 2 * static_cast<int>(s1) + static_cast<int>(s2);
}

} // namespace

Belief update_belief(const Belief &b, const Observation &o, const GEParams &params1,
                     const GEParams &params2) {
    return {observe_or_propagate(b.good1, o.o1, params1), observe_or_propagate(b.good2, o.o2, params2), o.n};
}

std::array<WeightedState, 4> joint_belief(const Belief &b) {
    constexpr auto G = ChannelState::Good;
    constexpr auto B = ChannelState::Bad;
    return {{
        {{G, G, b.n}, b.good1 * b.good2},
        {{G, B, b.n}, b.good1 * (1.0 - b.good2)},
        {{B, G, b.n}, (1.0 - b.good1) * b.good2},
        {{B, B, b.n}, (1.0 - b.good1) * (1.0 - b.good2)},
    }};
}

Action qmdp_action(const Belief &b, const QTable &table, const DecisionProcess &full) {
    if (full.kind != ModelKind::Full)
        throw ContractViolation("Q-MDP requires the fully observable Q-table");
    if (b.n < 0 || b.n >= full.max_misses)
        throw ContractViolation("Q-MDP action requested for an absorbing belief");
    std::array<double, kNumActions> averaged{};
    for (const WeightedState &ws : joint_belief(b)) {
        const int s = full.index_of(ws.state);
        for (int a = 0; a < kNumActions; ++a)
            averaged[static_cast<std::size_t>(a)] += ws.weight * table.q(s, a);
    }
    int best = full.tie_order[0];
    for (int a : full.tie_order)
        if (averaged[static_cast<std::size_t>(a)] > averaged[static_cast<std::size_t>(best)])
            best = a;
    return kActions[static_cast<std::size_t>(best)];
}

AgentSpec parse_agent_spec(std::string_view text) {
    if (text == "fullmdp")
        return {AgentKind::FullMdp, {}};
    if (text == "qmdp")
        return {AgentKind::Qmdp, {}};
    if (text == "fpomdp")
        return {AgentKind::FPomdp, {}};
    if (text == "hmdp")
        return {AgentKind::Hmdp, {}};
    constexpr std::string_view prefix = "fixed:";
    if (text.substr(0, prefix.size()) == prefix)
        return {AgentKind::Fixed, parse_action(text.substr(prefix.size()))};
    throw ValidationError("unknown agent '" + std::string(text) + "'");
}

std::string to_string(const AgentSpec &spec) {
    switch (spec.kind) {
    case AgentKind::FullMdp:
        return "fullmdp";
    case AgentKind::Qmdp:
        return "qmdp";
    case AgentKind::FPomdp:
        return "fpomdp";
    case AgentKind::Hmdp:
        return "hmdp";
    case AgentKind::Fixed:
        return "fixed:" + to_string(spec.fixed);
    }
    return "?";
}

FixedAgent::FixedAgent(Action a) : m_action(a) { action_index(a); }

Action FixedAgent::decide(const Observation &) { return m_action; }

std::unique_ptr<Agent> FixedAgent::clone() const { return std::make_unique<FixedAgent>(*this); }

FullMdpAgent::FullMdpAgent(std::shared_ptr<const DecisionProcess> process, Policy policy)
    : m_max_misses(process->max_misses),
      m_policy(std::make_shared<const Policy>(std::move(policy))) {
    if (process->kind != ModelKind::Full)
        throw ContractViolation("FullMdpAgent needs a fully observable process");
}

Action FullMdpAgent::decide(const Observation &o) {
    if (!o.o1 || !o.o2)
        throw ContractViolation("fully observable agent received a masked observation");
    if (o.n < 0 || o.n >= m_max_misses)
        throw ContractViolation("decision requested in an absorbing state");
    // matches DecisionProcess enumeration for the two-letter alphabet
    const int s = 4 * o.n + combo_index(*o.o1, *o.o2);
    return (*m_policy)[static_cast<std::size_t>(s)];
}

std::unique_ptr<Agent> FullMdpAgent::clone() const { return std::make_unique<FullMdpAgent>(*this); }

QmdpAgent::QmdpAgent(const DecisionProcess &full, const QTable &table, const GEParams &model1,
                     const GEParams &model2)
    : m_order(full.tie_order), m_max_misses(full.max_misses), m_model1(model1), m_model2(model2) {
    if (full.kind != ModelKind::Full)
        throw ContractViolation("Q-MDP requires the fully observable Q-table");
    std::vector<double> q(static_cast<std::size_t>(full.max_misses * 4 * kNumActions));
    constexpr std::array<ChannelState, 2> both{ChannelState::Good, ChannelState::Bad};
    for (int n = 0; n < full.max_misses; ++n)
        for (ChannelState s1 : both)
            for (ChannelState s2 : both) {
                const int s = full.index_of(SystemState{s1, s2, n});
                for (int a = 0; a < kNumActions; ++a)
                    q[static_cast<std::size_t>((n * 4 + combo_index(s1, s2)) * kNumActions + a)] =
                        table.q(s, a);
            }
    std::vector<Action> point(static_cast<std::size_t>(full.max_misses * 4));
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double *row = q.data() + i * kNumActions;
        int best = m_order[0];
        for (int a : m_order)
            if (row[a] > row[best])
                best = a;
        point[i] = kActions[static_cast<std::size_t>(best)];
    }
    m_q = std::make_shared<const std::vector<double>>(std::move(q));
    m_point_actions = std::make_shared<const std::vector<Action>>(std::move(point));
    reset();
}

void QmdpAgent::reset() { m_belief = Belief{}; }

Action QmdpAgent::decide(const Observation &o) {
    m_belief.good1 = observe_or_propagate(m_belief.good1, o.o1, m_model1);
    m_belief.good2 = observe_or_propagate(m_belief.good2, o.o2, m_model2);
    m_belief.n = o.n;
    if (o.n < 0 || o.n >= m_max_misses)
        throw ContractViolation("Q-MDP action requested for an absorbing belief");
    if (o.o1 && o.o2) // degenerate belief: the average is a single Q row
        return (*m_point_actions)[static_cast<std::size_t>(o.n * 4 + combo_index(*o.o1, *o.o2))];
    const double g1 = m_belief.good1;
    const double g2 = m_belief.good2;
    const std::array<double, 4> w{g1 * g2, g1 * (1.0 - g2), (1.0 - g1) * g2, (1.0 - g1) * (1.0 - g2)};
    const double *row = m_q->data() + static_cast<std::size_t>(o.n * 4 * kNumActions);
    std::array<double, kNumActions> averaged{};
    for (int c = 0; c < 4; ++c)
        for (int a = 0; a < kNumActions; ++a)
            averaged[static_cast<std::size_t>(a)] += w[static_cast<std::size_t>(c)] * row[c * kNumActions + a];
    int best = m_order[0];
    for (int a : m_order)
        if (averaged[static_cast<std::size_t>(a)] > averaged[static_cast<std::size_t>(best)])
            best = a;
    return kActions[static_cast<std::size_t>(best)];
}

std::unique_ptr<Agent> QmdpAgent::clone() const { return std::make_unique<QmdpAgent>(*this); }

KnowledgeAgent::KnowledgeAgent(std::shared_ptr<const DecisionProcess> process, Policy policy)
    : m_process(std::move(process)), m_policy(std::make_shared<const Policy>(std::move(policy))) {
    if (m_process->kind == ModelKind::Full)
        throw ContractViolation("KnowledgeAgent needs an F-POMDP or H-MDP process");
    reset();
}

AgentKind KnowledgeAgent::kind() const {
    return m_process->kind == ModelKind::FPomdp ? AgentKind::FPomdp : AgentKind::Hmdp;
}

void KnowledgeAgent::reset() {
    const Knowledge none = m_process->kind == ModelKind::FPomdp ? Knowledge::Steady : Knowledge::Unknown;
    m_k1 = none;
    m_k2 = none;
}

Action KnowledgeAgent::decide(const Observation &o) {
    const ModelKind kind = m_process->kind;
    m_k1 = o.o1 ? known(*o.o1) : advance_unobserved(kind, m_k1);
    m_k2 = o.o2 ? known(*o.o2) : advance_unobserved(kind, m_k2);
    if (o.n < 0 || o.n >= m_process->max_misses)
        throw ContractViolation("decision requested in an absorbing state");
    return (*m_policy)[static_cast<std::size_t>(m_process->index_of(m_k1, m_k2, o.n))];
}

std::unique_ptr<Agent> KnowledgeAgent::clone() const { return std::make_unique<KnowledgeAgent>(*this); }

std::unique_ptr<Agent> make_agent(const AgentSpec &spec, const ModelInputs &model,
                                  const ValueIterationOptions &options, SolveResult *solution) {
    if (spec.kind == AgentKind::Fixed)
        return std::make_unique<FixedAgent>(spec.fixed);

    const ModelKind kind = spec.kind == AgentKind::FPomdp ? ModelKind::FPomdp
                           : spec.kind == AgentKind::Hmdp ? ModelKind::Hmdp
                                                          : ModelKind::Full;
    SolvedModel solved = solve_model(kind, model, options);
    if (solution)
        *solution = solved.solution;
    auto process = std::make_shared<const DecisionProcess>(std::move(solved.process));
    switch (spec.kind) {
    case AgentKind::FullMdp:
        return std::make_unique<FullMdpAgent>(process, std::move(solved.policy));
    case AgentKind::Qmdp:
        return std::make_unique<QmdpAgent>(*process, solved.solution.table, model.params1, model.params2);
    default:
        return std::make_unique<KnowledgeAgent>(process, std::move(solved.policy));
    }
}

} // namespace ifdiv
