#ifndef IFDIV_TESTS_ORACLES_HPP
#define IFDIV_TESTS_ORACLES_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "ifdiv/mdp_model.hpp"

// Reference computations built from the channel kernels alone, independent of
// the library's state enumeration and chain analysis.
namespace oracles {

using namespace ifdiv;

// Oracle for N = 1: transient states are the four (s1, s2, 0) combos, ordered
// GG, GB, BG, BB. Built from the kernel directly, not from the library's process.
struct OneStepChain {
    Eigen::Matrix4d T;
    Eigen::Vector4d R;
};

inline OneStepChain direct_chain(const ModelInputs &in, const std::array<Action, 4> &policy) {
    constexpr auto G = ChannelState::Good;
    constexpr auto B = ChannelState::Bad;
    const std::array<ChannelState, 2> both{G, B};
    auto k = [](const GEParams &gp, ChannelState x, ChannelState y) {
        if (x == G)
            return y == G ? 1 - gp.p : gp.p;
        return y == G ? gp.r : 1 - gp.r;
    };
    const double total_power = in.costs.power1_mw + in.costs.power2_mw;
    OneStepChain c;
    c.T.setZero();
    c.R.setZero();
    for (int i = 0; i < 4; ++i) {
        const Action a = policy[static_cast<std::size_t>(i)];
        const double cost = in.costs.eta * (a.a1 * in.costs.power1_mw + a.a2 * in.costs.power2_mw) / total_power;
        for (int j = 0; j < 4; ++j) {
            const ChannelState t1 = both[static_cast<std::size_t>(j / 2)];
            const ChannelState t2 = both[static_cast<std::size_t>(j % 2)];
            const double prob = k(in.params1, both[static_cast<std::size_t>(i / 2)], t1) *
                                k(in.params2, both[static_cast<std::size_t>(i % 2)], t2);
            const bool ok = (a.a1 && t1 == G) || (a.a2 && t2 == G);
            if (ok)
                c.T(i, j) = prob; // successful slots stay transient; misses absorb when N = 1
            c.R(i) += prob * ((ok ? 1.0 : -1.0) - cost);
        }
    }
    return c;
}

inline Eigen::Vector4d linear_solve(const OneStepChain &c, double gamma) {
    const Eigen::Matrix4d A = Eigen::Matrix4d::Identity() - gamma * c.T;
    return A.fullPivLu().solve(c.R);
}

// Wi-Fi-only lifetime by backward substitution over run-length states.
// E_B[k]: expected remaining slots with Wi-Fi Bad and k consecutive misses,
// written as c[k] + d[k] * a where a is the expectation from (Wi-Fi Good, n = 0).
inline double wifi_only_lifetime(const GEParams &lte, const GEParams &wifi, int N) {
    const double p = wifi.p;
    const double r = wifi.r;
    std::vector<double> c(static_cast<std::size_t>(N + 1), 0.0);
    std::vector<double> d(static_cast<std::size_t>(N + 1), 0.0);
    for (int k = N - 1; k >= 0; --k) {
        c[static_cast<std::size_t>(k)] = 1.0 + (1.0 - r) * c[static_cast<std::size_t>(k + 1)];
        d[static_cast<std::size_t>(k)] = r + (1.0 - r) * d[static_cast<std::size_t>(k + 1)];
    }
    // a = 1 + (1 - p) a + p E_B[1]
    const double a = (1.0 + p * c[1]) / (p * (1.0 - d[1]));
    auto from_bad = [&](int k) { return c[static_cast<std::size_t>(k)] + d[static_cast<std::size_t>(k)] * a; };

    const double g1 = lte.r / (lte.p + lte.r);
    const double g2 = wifi.r / (wifi.p + wifi.r);
    // initial states: Wi-Fi Good at n = 0; Wi-Fi Bad with LTE Good at n = 0; both Bad at n = 1
    return g2 * a + g1 * (1.0 - g2) * from_bad(0) + (1.0 - g1) * (1.0 - g2) * (N > 1 ? from_bad(1) : 0.0);
}

} // namespace oracles

#endif
