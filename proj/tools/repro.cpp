#include "repro.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "app.hpp"
#include "ifdiv/errors.hpp"

namespace ifdiv::app {

using nlohmann::json;

namespace {

const std::vector<std::string> kSimulatingCommands{"simulate", "paired", "sweep-eta", "sensitivity"};

std::string show(const json &v) {
    if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", v.get<double>());
        return buf;
    }
    if (v.is_string())
        return v.get<std::string>();
    return v.dump();
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::string replace_all(std::string s, const std::string &from, const std::string &to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
    return s;
}

bool applies(const json &entry, Profile profile) {
    if (!entry.contains("profiles"))
        return true;
    const std::string wanted = profile == Profile::Desk ? "desk" : "full";
    for (const json &p : entry["profiles"])
        if (p.get<std::string>() == wanted)
            return true;
    return false;
}

std::vector<std::string> build_args(const json &entry, Profile profile, const std::filesystem::path &work_dir) {
    std::vector<std::string> args;
    for (const json &a : entry["args"])
        args.push_back(replace_all(a.get<std::string>(), "{work}", work_dir.string()));
    if (profile != Profile::Desk || args.empty())
        return args;
    bool simulating = false;
    for (const std::string &c : kSimulatingCommands)
        simulating = simulating || args.front() == c;
    if (!simulating)
        return args;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--episodes") {
            // unparsable counts pass through and fail inside the command
            const double requested = std::strtod(args[i + 1].c_str(), nullptr);
            if (requested > static_cast<double>(kDeskEpisodeCap))
                args[i + 1] = std::to_string(kDeskEpisodeCap);
            return args;
        }
    }
    args.push_back("--episodes");
    args.push_back(std::to_string(kDeskEpisodeCap));
    return args;
}

ReproRow evaluate_check(const std::string &id, const json &check, const json &doc) {
    ReproRow row{id, check["pointer"].get<std::string>(), "FAIL", "", "", ""};
    const json::json_pointer ptr(row.check);
    if (doc.is_null() || !doc.contains(ptr)) {
        row.detail = "missing in output";
        return row;
    }
    const json &value = doc.at(ptr);
    row.value = show(value);
    if (check.contains("equals")) {
        row.expected = show(check["equals"]);
        row.status = value == check["equals"] ? "PASS" : "FAIL";
        return row;
    }
    if (!value.is_number()) {
        row.detail = "not a number";
        return row;
    }
    const double v = value.get<double>();
    if (check.contains("expected")) {
        const double e = check["expected"].get<double>();
        double tol = 0.0;
        if (check.contains("rel_tol")) {
            tol = check["rel_tol"].get<double>() * std::abs(e);
            row.expected = show(check["expected"]) + " rel " + show(check["rel_tol"]);
        } else {
            tol = check.value("abs_tol", 0.0);
            row.expected = show(check["expected"]) + " abs " + show(json(tol));
        }
        row.status = std::abs(v - e) <= tol ? "PASS" : "FAIL";
        return row;
    }
    const double lo = check.value("min", -HUGE_VAL);
    const double hi = check.value("max", HUGE_VAL);
    row.expected = "[" + (check.contains("min") ? show(check["min"]) : std::string("-inf")) + ", " +
                   (check.contains("max") ? show(check["max"]) : std::string("inf")) + "]";
    row.status = v >= lo && v <= hi ? "PASS" : "FAIL";
    return row;
}

} // namespace

Profile parse_profile(std::string_view text) {
    if (text == "desk")
        return Profile::Desk;
    if (text == "full")
        return Profile::Full;
    throw ValidationError("profile must be desk or full, got '" + std::string(text) + "'");
}

void check_manifest(const json &manifest) {
    if (!manifest.is_object() || !manifest.contains("entries") || !manifest["entries"].is_array())
        throw ValidationError("manifest needs an 'entries' array");
    for (const json &entry : manifest["entries"]) {
        if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string())
            throw ValidationError("every manifest entry needs a string 'id'");
        const std::string id = entry["id"].get<std::string>();
        if (!entry.contains("args") || !entry["args"].is_array() || entry["args"].empty())
            throw ValidationError(id + ": 'args' must be a non-empty array");
        for (const json &a : entry["args"])
            if (!a.is_string())
                throw ValidationError(id + ": arguments must be strings");
        if (entry.contains("profiles") && !entry["profiles"].is_array())
            throw ValidationError(id + ": 'profiles' must be an array");
        if (entry.contains("expect_exit") && !entry["expect_exit"].is_number_integer())
            throw ValidationError(id + ": 'expect_exit' must be an integer");
        if (!entry.contains("checks"))
            continue;
        if (!entry["checks"].is_array())
            throw ValidationError(id + ": 'checks' must be an array");
        for (const json &c : entry["checks"]) {
            if (!c.is_object() || !c.contains("pointer") || !c["pointer"].is_string())
                throw ValidationError(id + ": every check needs a string 'pointer'");
            const bool has_expected = c.contains("expected");
            const bool has_range = c.contains("min") || c.contains("max");
            const bool has_equals = c.contains("equals");
            if (int(has_expected) + int(has_range) + int(has_equals) != 1)
                throw ValidationError(id + ": a check needs exactly one of expected, min/max or equals");
            if (has_expected && !c["expected"].is_number())
                throw ValidationError(id + ": 'expected' must be a number");
            try {
                (void)json::json_pointer(c["pointer"].get<std::string>());
            } catch (const json::exception &) {
                throw ValidationError(id + ": malformed pointer '" + c["pointer"].get<std::string>() + "'");
            }
        }
    }
}

ReproReport run_repro(const json &manifest, Profile profile, const std::filesystem::path &work_dir,
                      std::ostream &err) {
    ReproReport report;
    for (const json &entry : manifest["entries"]) {
        const std::string id = entry["id"].get<std::string>();
        const bool heavy = profile == Profile::Desk && entry.value("heavy", false);
        if (!applies(entry, profile) || heavy) {
            report.rows.push_back({id, "entry", "SKIP", "", "", heavy ? "heavy entry" : "not in this profile"});
            ++report.skipped;
            continue;
        }
        const std::vector<std::string> args = build_args(entry, profile, work_dir);
        std::ostringstream diag;
        const CommandResult result = execute(args, diag);
        if (!diag.str().empty())
            err << "[" << id << "] " << diag.str();

        std::vector<ReproRow> rows;
        const int expect_exit = entry.value("expect_exit", 0);
        rows.push_back({id, "exit", result.exit_code == expect_exit ? "PASS" : "FAIL",
                        std::to_string(result.exit_code), std::to_string(expect_exit), ""});
        if (entry.contains("checks"))
            for (const json &c : entry["checks"])
                rows.push_back(evaluate_check(id, c, result.document));
        for (ReproRow &r : rows) {
            (r.status == "PASS" ? report.passed : report.failed) += 1;
            report.rows.push_back(std::move(r));
        }
    }
    return report;
}

void write_report_csv(std::ostream &out, const ReproReport &report) {
    out << "id,check,status,value,expected,detail\n";
    for (const ReproRow &r : report.rows)
        out << csv_field(r.id) << ',' << csv_field(r.check) << ',' << r.status << ',' << csv_field(r.value) << ','
            << csv_field(r.expected) << ',' << csv_field(r.detail) << '\n';
}

} // namespace ifdiv::app
