#ifndef IFDIV_TOOLS_EXPERIMENT_CONFIG_HPP
#define IFDIV_TOOLS_EXPERIMENT_CONFIG_HPP

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "ifdiv/mdp_model.hpp"
#include "ifdiv/simulator.hpp"
#include "ifdiv/solver.hpp"

namespace ifdiv::app {

/// Every tunable of an experiment. Defaults are the reference parameter set.
struct ExperimentConfig {
    GEParams lte{0.0178, 0.2577};
    GEParams wifi{0.0515, 0.9468};
    double power_lte_mw = 200.0;
    double power_wifi_mw = 15.85;
    std::vector<double> eta{0.0};
    int max_misses = 4;
    double gamma = 0.99999;
    double epsilon = 1e-11;
    long k_max = 100000;
    long episodes = 20000;
    std::uint64_t seed = 1;
    double theta_ms = 38.25;
    unsigned threads = 0;

    ModelInputs model(double eta_value) const;
    EnvConfig env(double eta_value) const;
    ValueIterationOptions solver_options() const;

    /// Single eta for commands that do not sweep; ValidationError otherwise.
    double single_eta() const;

    /// Assigns one key. Unknown keys and malformed values throw ValidationError.
    void set(std::string_view key, std::string_view value);

    /// Checks cross-field constraints (probability ranges, counts, powers).
    void validate() const;
};

/// Accepted keys, in documentation order.
const std::vector<std::string> &config_keys();

/// Flat `key = value` lines; `#` starts a comment. Errors are ParseError with
/// the line number.
void load_config(std::istream &in, ExperimentConfig &cfg);

/// Comma- or whitespace-separated reals.
std::vector<double> parse_real_list(std::string_view text);

} // namespace ifdiv::app

#endif
