#include "ifdiv/mdp_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "ifdiv/errors.hpp"

namespace ifdiv {

int action_index(Action a) {
    for (int i = 0; i < kNumActions; ++i)
        if (kActions[static_cast<std::size_t>(i)] == a)
            return i;
    throw ValidationError("action (0,0) is not allowed");
}

std::string to_string(Action a) {
    return "(" + std::to_string(a.a1) + "," + std::to_string(a.a2) + ")";
}

Action parse_action(std::string_view text) {
    std::string bits;
    for (char ch : text) {
        if (ch == '0' || ch == '1')
            bits.push_back(ch);
        else if (ch != '(' && ch != ')' && ch != ',' && !std::isspace(static_cast<unsigned char>(ch)))
            throw ValidationError("malformed action '" + std::string(text) + "'");
    }
    if (bits.size() != 2)
        throw ValidationError("malformed action '" + std::string(text) + "'");
    Action a{static_cast<std::uint8_t>(bits[0] - '0'), static_cast<std::uint8_t>(bits[1] - '0')};
    action_index(a); // rejects (0,0)
    return a;
}

InterfaceCosts interface_costs(const CostModel &cm) {
    const double total = cm.power1_mw + cm.power2_mw;
    if (!(total > 0.0) || cm.power1_mw < 0.0 || cm.power2_mw < 0.0)
        throw ValidationError("interface powers must be non-negative with a positive sum");
    return {cm.eta * cm.power1_mw / total, cm.eta * cm.power2_mw / total};
}

double action_cost(const InterfaceCosts &costs, Action a) {
    return a.a1 * costs.c1 + a.a2 * costs.c2;
}

std::array<int, kNumActions> action_order(const CostModel &cm) {
    const InterfaceCosts costs = interface_costs(cm);
    std::array<int, kNumActions> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return action_cost(costs, kActions[static_cast<std::size_t>(x)]) <
               action_cost(costs, kActions[static_cast<std::size_t>(y)]);
    });
    return order;
}

int next_counter(int n, Outcome outcome, int max_misses) {
    if (n < 0 || n >= max_misses)
        throw ContractViolation("counter update requested on absorbing or invalid state n=" +
                                std::to_string(n));
    return outcome == Outcome::Success ? 0 : std::min(n + 1, max_misses);
}

double transition(const SystemState &from, Action a, const SystemState &to,
                  const GEParams &params1, const GEParams &params2, int max_misses) {
    const int expected_n = next_counter(from.n, transmission_outcome(to.s1, to.s2, a), max_misses);
    if (to.n != expected_n)
        return 0.0;
    return transition_prob(params1, from.s1, to.s1) * transition_prob(params2, from.s2, to.s2);
}

double reward(const SystemState &, Action a, const SystemState &to, const CostModel &cm) {
    const double r = to.n == 0 ? cm.success_reward : cm.miss_reward;
    return r - action_cost(interface_costs(cm), a);
}

std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::Full:
        return "full";
    case ModelKind::FPomdp:
        return "fpomdp";
    case ModelKind::Hmdp:
        return "hmdp";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "full")
        return ModelKind::Full;
    if (text == "fpomdp")
        return ModelKind::FPomdp;
    if (text == "hmdp")
        return ModelKind::Hmdp;
    throw ValidationError("unknown model kind '" + std::string(text) + "'");
}

std::string_view to_string(Knowledge k) {
    switch (k) {
    case Knowledge::KnownGood:
        return "G";
    case Knowledge::KnownBad:
        return "B";
    case Knowledge::StaleFromGood:
        return "G+1";
    case Knowledge::StaleFromBad:
        return "B+1";
    case Knowledge::Steady:
        return "pi";
    case Knowledge::Unknown:
        return "?";
    }
    return "";
}

const std::vector<Knowledge> &alphabet(ModelKind kind) {
    static const std::vector<Knowledge> full{Knowledge::KnownGood, Knowledge::KnownBad};
    static const std::vector<Knowledge> fpomdp{Knowledge::KnownGood, Knowledge::KnownBad,
                                               Knowledge::StaleFromGood, Knowledge::StaleFromBad,
                                               Knowledge::Steady};
    static const std::vector<Knowledge> hmdp{Knowledge::KnownGood, Knowledge::KnownBad,
                                             Knowledge::Unknown};
    switch (kind) {
    case ModelKind::FPomdp:
        return fpomdp;
    case ModelKind::Hmdp:
        return hmdp;
    default:
        return full;
    }
}

Knowledge advance_unobserved(ModelKind kind, Knowledge k) {
    switch (kind) {
    case ModelKind::Full:
        throw ContractViolation("fully observable model has no unobserved interfaces");
    case ModelKind::Hmdp:
        return Knowledge::Unknown;
    case ModelKind::FPomdp:
        switch (k) {
        case Knowledge::KnownGood:
            return Knowledge::StaleFromGood;
        case Knowledge::KnownBad:
            return Knowledge::StaleFromBad;
        default:
            return Knowledge::Steady;
        }
    }
    return Knowledge::Unknown;
}

double implied_good_probability(ModelKind kind, Knowledge k, const GEParams &params) {
    switch (k) {
    case Knowledge::KnownGood:
        return 1.0;
    case Knowledge::KnownBad:
        return 0.0;
    case Knowledge::StaleFromGood:
        return 1.0 - params.p;
    case Knowledge::StaleFromBad:
        return params.r;
    case Knowledge::Steady:
    case Knowledge::Unknown:
        if (kind == ModelKind::Full)
            break;
        return steady_state(params).good;
    }
    throw ContractViolation("knowledge letter not valid for the fully observable model");
}

int DecisionProcess::index_of(Knowledge k1, Knowledge k2, int n) const {
    const auto width = static_cast<int>(letters.size());
    auto pos = [&](Knowledge k) {
        const auto it = std::find(letters.begin(), letters.end(), k);
        if (it == letters.end())
            throw ValidationError("knowledge letter not in this model's alphabet");
        return static_cast<int>(it - letters.begin());
    };
    if (n < 0 || n > max_misses)
        throw ValidationError("counter out of range");
    return (n * width + pos(k1)) * width + pos(k2);
}

std::string DecisionProcess::label(int s) const {
    const ProcessState &st = states[static_cast<std::size_t>(s)];
    return "(" + std::string(to_string(st.k1)) + "," + std::string(to_string(st.k2)) + "," +
           std::to_string(st.n) + ")";
}

void check_stochastic(const DecisionProcess &process, double tol) {
    for (int a = 0; a < kNumActions; ++a) {
        const SparseMatrix &t = process.transitions[static_cast<std::size_t>(a)];
        if (t.rows() != process.size() || t.cols() != process.size())
            throw ValidationError("transition matrix has wrong shape");
        for (int s = 0; s < process.size(); ++s) {
            const double row = t.row(s).sum();
            if (process.absorbing(s) ? t.row(s).nonZeros() != 0 : std::abs(row - 1.0) > tol)
                throw ValidationError("row " + process.label(s) + " under action " +
                                      to_string(kActions[static_cast<std::size_t>(a)]) +
                                      " sums to " + std::to_string(row));
        }
    }
}

namespace {

struct Branch {
    Knowledge next;
    double prob;
    bool delivers;
};

// Next-knowledge distribution of one interface. At most two branches.
struct Branches {
    std::array<Branch, 2> items{};
    int count = 0;

    void add(Knowledge next, double prob, bool delivers) {
        if (prob > 0.0)
            items[static_cast<std::size_t>(count++)] = {next, prob, delivers};
    }
};

Branches local_branches(ModelKind kind, Knowledge k, bool transmitting, const GEParams &params) {
    Branches out;
    if (kind == ModelKind::Full) {
        const ChannelState s = k == Knowledge::KnownGood ? ChannelState::Good : ChannelState::Bad;
        out.add(Knowledge::KnownGood, transition_prob(params, s, ChannelState::Good), transmitting);
        out.add(Knowledge::KnownBad, transition_prob(params, s, ChannelState::Bad), false);
        return out;
    }
    if (!transmitting) {
        out.add(advance_unobserved(kind, k), 1.0, false);
        return out;
    }
    double good_next;
    if (kind == ModelKind::Hmdp && k == Knowledge::Unknown) {
        good_next = steady_state(params).good;
    } else {
        const double g = implied_good_probability(kind, k, params);
        good_next = g * (1.0 - params.p) + (1.0 - g) * params.r;
    }
    out.add(Knowledge::KnownGood, good_next, true);
    out.add(Knowledge::KnownBad, 1.0 - good_next, false);
    return out;
}

} // namespace

DecisionProcess build_process(ModelKind kind, const ModelInputs &in) {
    validate(in.params1);
    validate(in.params2);
    if (in.max_misses < 1)
        throw ValidationError("survival threshold N must be at least 1");
    if (!(in.discount > 0.0 && in.discount < 1.0))
        throw ValidationError("discount must lie in (0, 1)");
    if (kind != ModelKind::Full) {
        steady_state(in.params1);
        steady_state(in.params2);
    }

    DecisionProcess proc;
    proc.kind = kind;
    proc.max_misses = in.max_misses;
    proc.discount = in.discount;
    proc.letters = alphabet(kind);
    proc.tie_order = action_order(in.costs);
    for (int n = 0; n <= in.max_misses; ++n)
        for (Knowledge k1 : proc.letters)
            for (Knowledge k2 : proc.letters)
                proc.states.push_back({k1, k2, n});

    const InterfaceCosts costs = interface_costs(in.costs);
    const int size = proc.size();
    for (int ai = 0; ai < kNumActions; ++ai) {
        const Action a = kActions[static_cast<std::size_t>(ai)];
        const double cost = action_cost(costs, a);
        std::vector<Eigen::Triplet<double>> triplets;
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(size);
        for (int s = 0; s < size; ++s) {
            if (proc.absorbing(s))
                continue;
            const ProcessState &from = proc.states[static_cast<std::size_t>(s)];
            const Branches b1 = local_branches(kind, from.k1, a.a1 != 0, in.params1);
            const Branches b2 = local_branches(kind, from.k2, a.a2 != 0, in.params2);
            for (int i = 0; i < b1.count; ++i) {
                for (int j = 0; j < b2.count; ++j) {
                    const Branch &x = b1.items[static_cast<std::size_t>(i)];
                    const Branch &y = b2.items[static_cast<std::size_t>(j)];
                    const Outcome outcome = (x.delivers || y.delivers) ? Outcome::Success : Outcome::Miss;
                    const int n_next = next_counter(from.n, outcome, in.max_misses);
                    const double prob = x.prob * y.prob;
                    const double r = (n_next == 0 ? in.costs.success_reward : in.costs.miss_reward) - cost;
                    triplets.emplace_back(s, proc.index_of(x.next, y.next, n_next), prob);
                    expected(s) += prob * r;
                }
            }
        }
        SparseMatrix t(size, size);
        t.setFromTriplets(triplets.begin(), triplets.end());
        t.makeCompressed();
        proc.transitions[static_cast<std::size_t>(ai)] = std::move(t);
        proc.expected_reward[static_cast<std::size_t>(ai)] = std::move(expected);
    }
    return proc;
}

DecisionProcess build_full_mdp(const ModelInputs &in) { return build_process(ModelKind::Full, in); }
DecisionProcess build_fpomdp_mdp(const ModelInputs &in) { return build_process(ModelKind::FPomdp, in); }
DecisionProcess build_hmdp(const ModelInputs &in) { return build_process(ModelKind::Hmdp, in); }

} // namespace ifdiv
