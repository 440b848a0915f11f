#include "ifdiv/ge_channel.hpp"

#include <cmath>
#include <string>

#include "ifdiv/errors.hpp"

namespace ifdiv {

std::string_view to_string(ChannelState s) {
    return s == ChannelState::Good ? "G" : "B";
}

void validate(const GEParams &params) {
    auto in_unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
    if (!in_unit(params.p) || !in_unit(params.r))
        throw ValidationError("GE parameters must lie in [0, 1], got p=" +
                              std::to_string(params.p) + " r=" + std::to_string(params.r));
}

double transition_prob(const GEParams &params, ChannelState from, ChannelState to) {
    if (from == ChannelState::Good)
        return to == ChannelState::Good ? 1.0 - params.p : params.p;
    return to == ChannelState::Good ? params.r : 1.0 - params.r;
}

Eigen::Matrix2d transition_matrix(const GEParams &params) {
    Eigen::Matrix2d m;
    m << 1.0 - params.p, params.p, params.r, 1.0 - params.r;
    return m;
}

SteadyState steady_state(const GEParams &params) {
    validate(params);
    const double total = params.p + params.r;
    if (total <= 0.0)
        throw DegenerateChainError("steady state undefined for p = r = 0");
    const double good = params.r / total;
    return {good, 1.0 - good};
}

GEParams scale_rates(const GEParams &params, double delta) {
    validate(params);
    if (!(delta > -1.0))
        throw ValidationError("relative error must exceed -1");
    const GEParams out{(1.0 + delta) * params.p, (1.0 + delta) * params.r};
    if (out.p > 1.0 || out.r > 1.0)
        throw ValidationError("scaled rate exceeds one");
    return out;
}

} // namespace ifdiv
