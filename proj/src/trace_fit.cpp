#include "ifdiv/trace_fit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

#include "ifdiv/errors.hpp"

namespace ifdiv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

bool within(const std::optional<double> &latency, double theta_ms) {
    return latency && *latency <= theta_ms;
}

} // namespace

std::vector<ChannelState> binarize(const LatencyTrace &trace, double theta_ms) {
    if (trace.empty())
        throw ValidationError("empty latency trace");
    if (!(theta_ms > 0.0))
        throw ValidationError("latency deadline must be positive");
    std::vector<ChannelState> out;
    out.reserve(trace.size());
    for (const auto &sample : trace)
        out.push_back(within(sample, theta_ms) ? ChannelState::Good : ChannelState::Bad);
    return out;
}

FitResult fit_ge(std::span<const ChannelState> states) {
    if (states.size() < 2)
        throw ValidationError("at least two samples are needed to count transitions");
    FitResult fit;
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        const bool from_good = states[i] == ChannelState::Good;
        const bool to_good = states[i + 1] == ChannelState::Good;
        if (from_good)
            ++(to_good ? fit.good_to_good : fit.good_to_bad);
        else
            ++(to_good ? fit.bad_to_good : fit.bad_to_bad);
    }
    for (ChannelState s : states)
        ++(s == ChannelState::Good ? fit.good_dwell : fit.bad_dwell);

    const std::int64_t from_good = fit.good_to_good + fit.good_to_bad;
    const std::int64_t from_bad = fit.bad_to_good + fit.bad_to_bad;
    if (from_good > 0)
        fit.p_hat = static_cast<double>(fit.good_to_bad) / static_cast<double>(from_good);
    else
        fit.diagnostics.emplace_back("p undefined: no transition leaves the Good state");
    if (from_bad > 0)
        fit.r_hat = static_cast<double>(fit.bad_to_good) / static_cast<double>(from_bad);
    else
        fit.diagnostics.emplace_back("r undefined: no transition leaves the Bad state");
    return fit;
}

double latency_reliability(const LatencyTrace &trace, double theta_ms) {
    if (trace.empty())
        throw ValidationError("empty latency trace");
    const auto hits = std::count_if(trace.begin(), trace.end(),
                                    [&](const auto &sample) { return within(sample, theta_ms); });
    return static_cast<double>(hits) / static_cast<double>(trace.size());
}

double e2e_error(std::span<const double> reliabilities) {
    double product = 1.0;
    for (double f : reliabilities) {
        if (!(f >= 0.0 && f <= 1.0))
            throw ValidationError("latency-reliability values must lie in [0, 1]");
        product *= 1.0 - f;
    }
    return product;
}

LatencyTrace read_trace_csv(std::istream &in) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::optional<long long> last_seq;
    LatencyTrace trace;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty())
            continue;
        if (!header_seen) {
            const auto comma = row.find(',');
            if (comma == std::string_view::npos || trim(row.substr(0, comma)) != "seq" ||
                trim(row.substr(comma + 1)) != "latency_ms")
                throw ParseError(lineno, "expected header 'seq,latency_ms'");
            header_seen = true;
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw ParseError(lineno, "expected two comma-separated fields");
        const std::string_view seq_field = trim(row.substr(0, comma));
        const std::string_view value_field = trim(row.substr(comma + 1));

        long long seq = 0;
        const auto [sp, sec] = std::from_chars(seq_field.data(), seq_field.data() + seq_field.size(), seq);
        if (sec != std::errc{} || sp != seq_field.data() + seq_field.size())
            throw ParseError(lineno, "invalid seq '" + std::string(seq_field) + "'");
        if (last_seq && seq != *last_seq + 1)
            throw ParseError(lineno, "seq " + std::to_string(seq) + " does not follow " +
                                         std::to_string(*last_seq) + " (gaps and reordering are rejected)");
        last_seq = seq;

        if (iequals(value_field, "lost")) {
            trace.emplace_back(std::nullopt);
            continue;
        }
        double latency = 0.0;
        const auto [vp, vec] = std::from_chars(value_field.data(), value_field.data() + value_field.size(), latency);
        if (vec != std::errc{} || vp != value_field.data() + value_field.size() || !std::isfinite(latency) ||
            latency < 0.0)
            throw ParseError(lineno, "invalid latency '" + std::string(value_field) + "'");
        trace.emplace_back(latency);
    }
    if (!header_seen)
        throw ParseError(lineno == 0 ? 1 : lineno, "empty trace file");
    if (trace.empty())
        throw ParseError(lineno, "trace has a header but no samples");
    return trace;
}

void write_trace_csv(std::ostream &out, const LatencyTrace &trace) {
    out << "seq,latency_ms\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << i << ',';
        if (trace[i]) {
            const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, *trace[i]);
            out.write(buf, p - buf);
        } else {
            out << "lost";
        }
        out << '\n';
    }
}

} // namespace ifdiv
