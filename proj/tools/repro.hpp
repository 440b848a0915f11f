#ifndef IFDIV_TOOLS_REPRO_HPP
#define IFDIV_TOOLS_REPRO_HPP

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ifdiv::app {

enum class Profile { Desk, Full };

Profile parse_profile(std::string_view text);

/// Episode cap applied to every simulating command under the desk profile.
inline constexpr long kDeskEpisodeCap = 2000;

struct ReproRow {
    std::string id;
    std::string check;
    std::string status; // PASS, FAIL or SKIP
    std::string value;
    std::string expected;
    std::string detail;
};

struct ReproReport {
    std::vector<ReproRow> rows;
    int passed = 0;
    int failed = 0;
    int skipped = 0;

    bool ok() const { return failed == 0; }
};

/// Validates the manifest layout; throws ValidationError on the first problem.
void check_manifest(const nlohmann::json &manifest);

/// Runs every entry through the command layer. A failing entry never stops the
/// run. `{work}` in arguments expands to `work_dir`.
ReproReport run_repro(const nlohmann::json &manifest, Profile profile, const std::filesystem::path &work_dir,
                      std::ostream &err);

/// Columns: id,check,status,value,expected,detail
void write_report_csv(std::ostream &out, const ReproReport &report);

} // namespace ifdiv::app

#endif
