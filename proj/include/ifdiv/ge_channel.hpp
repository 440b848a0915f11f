#ifndef IFDIV_GE_CHANNEL_HPP
#define IFDIV_GE_CHANNEL_HPP

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

namespace ifdiv {

enum class ChannelState : std::uint8_t { Good = 0, Bad = 1 };

std::string_view to_string(ChannelState s);

/// Two-state Gilbert-Elliott parameters: p is Good->Bad, r is Bad->Good per slot.
struct GEParams {
    double p = 0.0;
    double r = 1.0;
};

/// Throws ValidationError unless both rates lie in [0, 1].
void validate(const GEParams &params);

double transition_prob(const GEParams &params, ChannelState from, ChannelState to);

/// Row-stochastic kernel, row/column 0 = Good, 1 = Bad.
Eigen::Matrix2d transition_matrix(const GEParams &params);

struct SteadyState {
    double good;
    double bad;
};

/// pi_G = r/(p+r). Throws DegenerateChainError when p = r = 0.
SteadyState steady_state(const GEParams &params);

/// Relative misestimate of both rates: ((1+delta) p, (1+delta) r). Keeps the
/// steady state. Throws ValidationError when delta <= -1 or a rate leaves [0, 1].
GEParams scale_rates(const GEParams &params, double delta);

/// Inverse-CDF sampler for one slot. Leaves Good iff draw < p, leaves Bad iff
/// draw < r; the strict comparison is part of the reproducibility contract.
inline ChannelState step(const GEParams &params, ChannelState current, double draw) {
    if (current == ChannelState::Good)
        return draw < params.p ? ChannelState::Bad : ChannelState::Good;
    return draw < params.r ? ChannelState::Good : ChannelState::Bad;
}

} // namespace ifdiv

#endif
