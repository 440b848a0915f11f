#ifndef IFDIV_TESTS_LOCKSTEP_HPP
#define IFDIV_TESTS_LOCKSTEP_HPP

#include <memory>

#include "ifdiv/belief_policy.hpp"

namespace ifdiv {

// Feeds one unmasked observation stream to two agents and records disagreements.
class Lockstep final : public Agent {
  public:
    Lockstep(std::unique_ptr<Agent> lead, std::unique_ptr<Agent> shadow, long &mismatches, long &decisions)
        : m_lead(std::move(lead)), m_shadow(std::move(shadow)), m_mismatches(mismatches), m_decisions(decisions) {}
    AgentKind kind() const override { return m_lead->kind(); }
    bool needs_full_observation() const override { return true; }
    void reset() override {
        m_lead->reset();
        m_shadow->reset();
    }
    Action decide(const Observation &o) override {
        const Action a = m_lead->decide(o);
        m_mismatches += !(a == m_shadow->decide(o));
        ++m_decisions;
        return a;
    }
    std::unique_ptr<Agent> clone() const override {
        return std::make_unique<Lockstep>(m_lead->clone(), m_shadow->clone(), m_mismatches, m_decisions);
    }

  private:
    std::unique_ptr<Agent> m_lead;
    std::unique_ptr<Agent> m_shadow;
    long &m_mismatches;
    long &m_decisions;
};

} // namespace ifdiv

#endif
