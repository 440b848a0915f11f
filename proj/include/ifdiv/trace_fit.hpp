#ifndef IFDIV_TRACE_FIT_HPP
#define IFDIV_TRACE_FIT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifdiv/ge_channel.hpp"

namespace ifdiv {

/// Latency samples in sending order; nullopt marks a lost packet (infinite latency).
using LatencyTrace = std::vector<std::optional<double>>;

/// Good iff latency <= theta; lost packets are Bad. Throws ValidationError on
/// an empty trace or theta <= 0.
std::vector<ChannelState> binarize(const LatencyTrace &trace, double theta_ms);

struct FitResult {
    /// nullopt when the source state never occurs before the last sample
    std::optional<double> p_hat;
    std::optional<double> r_hat;
    std::int64_t good_to_good = 0;
    std::int64_t good_to_bad = 0;
    std::int64_t bad_to_good = 0;
    std::int64_t bad_to_bad = 0;
    /// samples observed in each state
    std::int64_t good_dwell = 0;
    std::int64_t bad_dwell = 0;
    std::vector<std::string> diagnostics;
};

/// Transition-count maximum-likelihood estimate. Throws ValidationError for
/// fewer than two samples.
FitResult fit_ge(std::span<const ChannelState> states);

/// Empirical F(theta) = Pr(L <= theta), lost packets counted as failures.
double latency_reliability(const LatencyTrace &trace, double theta_ms);

/// Duplication over independent paths: prod_i (1 - F_i).
double e2e_error(std::span<const double> reliabilities);

/// CSV with header `seq,latency_ms`; latency is a non-negative decimal or
/// `lost` (any case). seq must increase by exactly one per row. Throws
/// ParseError carrying the offending line number.
LatencyTrace read_trace_csv(std::istream &in);

void write_trace_csv(std::ostream &out, const LatencyTrace &trace);

} // namespace ifdiv

#endif
