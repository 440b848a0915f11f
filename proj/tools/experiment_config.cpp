#include "experiment_config.hpp"

#include <charconv>
#include <cmath>

#include "ifdiv/errors.hpp"

namespace ifdiv::app {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ValidationError(std::string(key) + ": expected a real number, got '" + std::string(text) + "'");
    return v;
}

template <class Int> Int parse_integer(std::string_view key, std::string_view text) {
    text = trim(text);
    // allow 1e5-style counts as long as they are integral
    const double v = parse_real(key, text);
    if (v < 0.0 || v != std::floor(v) || v > 1.8e19)
        throw ValidationError(std::string(key) + ": expected a non-negative integer, got '" + std::string(text) + "'");
    if (text.find_first_of(".eE") == std::string_view::npos) {
        Int exact = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), exact);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw ValidationError(std::string(key) + ": integer out of range '" + std::string(text) + "'");
        return exact;
    }
    return static_cast<Int>(v);
}

} // namespace

const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys{"p1",    "r1",       "p2",    "r2",       "E1",   "E2",
                                               "eta",   "N",        "gamma", "epsilon",  "k_max", "episodes",
                                               "seed",  "theta",    "threads"};
    return keys;
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find_first_of(", \t", pos);
        const std::string_view item = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        if (!trim(item).empty())
            out.push_back(parse_real("list", item));
        if (next == std::string_view::npos)
            break;
        pos = next + 1;
    }
    if (out.empty())
        throw ValidationError("expected at least one number in '" + std::string(text) + "'");
    return out;
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
    if (key == "p1")
        lte.p = parse_real(key, value);
    else if (key == "r1")
        lte.r = parse_real(key, value);
    else if (key == "p2")
        wifi.p = parse_real(key, value);
    else if (key == "r2")
        wifi.r = parse_real(key, value);
    else if (key == "E1")
        power_lte_mw = parse_real(key, value);
    else if (key == "E2")
        power_wifi_mw = parse_real(key, value);
    else if (key == "eta")
        eta = parse_real_list(value);
    else if (key == "N")
        max_misses = parse_integer<int>(key, value);
    else if (key == "gamma")
        gamma = parse_real(key, value);
    else if (key == "epsilon")
        epsilon = parse_real(key, value);
    else if (key == "k_max")
        k_max = parse_integer<long>(key, value);
    else if (key == "episodes")
        episodes = parse_integer<long>(key, value);
    else if (key == "seed")
        seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "theta")
        theta_ms = parse_real(key, value);
    else if (key == "threads")
        threads = parse_integer<unsigned>(key, value);
    else
        throw ValidationError("unknown configuration key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const {
    ifdiv::validate(lte);
    ifdiv::validate(wifi);
    if (power_lte_mw < 0.0 || power_wifi_mw < 0.0 || !(power_lte_mw + power_wifi_mw > 0.0))
        throw ValidationError("E1 and E2 must be non-negative with a positive sum");
    for (double e : eta)
        if (e < 0.0)
            throw ValidationError("eta must be non-negative");
    if (max_misses < 1)
        throw ValidationError("N must be at least 1");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ValidationError("gamma must lie in (0, 1)");
    if (!(epsilon >= 0.0))
        throw ValidationError("epsilon must be non-negative");
    if (k_max < 1)
        throw ValidationError("k_max must be at least 1");
    if (episodes < 1)
        throw ValidationError("episodes must be at least 1");
    if (!(theta_ms > 0.0))
        throw ValidationError("theta must be positive");
}

ModelInputs ExperimentConfig::model(double eta_value) const {
    ModelInputs in;
    in.params1 = lte;
    in.params2 = wifi;
    in.costs.eta = eta_value;
    in.costs.power1_mw = power_lte_mw;
    in.costs.power2_mw = power_wifi_mw;
    in.max_misses = max_misses;
    in.discount = gamma;
    return in;
}

EnvConfig ExperimentConfig::env(double eta_value) const {
    EnvConfig e;
    e.params1 = lte;
    e.params2 = wifi;
    e.max_misses = max_misses;
    e.costs = model(eta_value).costs;
    return e;
}

ValueIterationOptions ExperimentConfig::solver_options() const { return {epsilon, k_max}; }

double ExperimentConfig::single_eta() const {
    if (eta.size() != 1)
        throw ValidationError("this command takes a single eta value");
    return eta.front();
}

void load_config(std::istream &in, ExperimentConfig &cfg) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(lineno, "expected 'key = value'");
        const std::string_view key = trim(view.substr(0, eq));
        const std::string_view value = trim(view.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError(lineno, "expected 'key = value'");
        try {
            cfg.set(key, value);
        } catch (const ValidationError &e) {
            throw ParseError(lineno, e.what());
        }
    }
}

} // namespace ifdiv::app
