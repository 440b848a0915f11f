#ifndef IFDIV_TESTS_FIXTURES_HPP
#define IFDIV_TESTS_FIXTURES_HPP

#include "ifdiv/mdp_model.hpp"

namespace fixtures {

inline constexpr ifdiv::GEParams kLte{0.0178, 0.2577};
inline constexpr ifdiv::GEParams kWifi{0.0515, 0.9468};

inline ifdiv::ModelInputs reference(double eta = 0.0, int max_misses = 4) {
    ifdiv::ModelInputs in;
    in.params1 = kLte;
    in.params2 = kWifi;
    in.costs.eta = eta;
    in.max_misses = max_misses;
    return in;
}

} // namespace fixtures

#endif
