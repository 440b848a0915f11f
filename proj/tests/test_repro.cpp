#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "repro.hpp"
#include "ifdiv/errors.hpp"

using namespace ifdiv;
using namespace ifdiv::app;
using nlohmann::json;

namespace {

std::filesystem::path work_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "ifdiv-repro-tests";
    std::filesystem::create_directories(dir);
    return dir;
}

ReproReport run_manifest(const json &manifest, Profile profile = Profile::Desk) {
    check_manifest(manifest);
    std::ostringstream err;
    return run_repro(manifest, profile, work_dir(), err);
}

const ReproRow &row(const ReproReport &r, const std::string &id, const std::string &check) {
    for (const ReproRow &x : r.rows)
        if (x.id == id && x.check == check)
            return x;
    FAIL("row not found: " << id << " " << check);
    return r.rows.front();
}

} // namespace

TEST_CASE("empty manifest passes trivially") {
    const ReproReport r = run_manifest(json::parse(R"js({"version": 1, "entries": []})js"));
    CHECK(r.ok());
    CHECK(r.rows.empty());
    std::ostringstream csv;
    write_report_csv(csv, r);
    CHECK(csv.str() == "id,check,status,value,expected,detail\n");
}

TEST_CASE("manifest layout is validated") {
    CHECK_THROWS_AS(check_manifest(json::parse("{}")), ValidationError);
    CHECK_THROWS_AS(check_manifest(json::parse(R"js({"entries": [{"args": ["solve"]}]})js")), ValidationError);
    CHECK_THROWS_AS(check_manifest(json::parse(R"js({"entries": [{"id": "a", "args": []}]})js")), ValidationError);
    CHECK_THROWS_AS(check_manifest(json::parse(
                        R"js({"entries": [{"id": "a", "args": ["solve"], "checks": [{"pointer": "/x", "expected": 1, "equals": 1}]}]})js")),
                    ValidationError);
    CHECK_THROWS_AS(check_manifest(json::parse(
                        R"js({"entries": [{"id": "a", "args": ["solve"], "checks": [{"pointer": "x", "equals": 1}]}]})js")),
                    ValidationError);
    CHECK_THROWS_AS(parse_profile("fast"), ValidationError);
}

TEST_CASE("shipped manifest is well formed") {
    std::ifstream in(std::filesystem::path(IFDIV_SOURCE_DIR) / "repro" / "manifest.json");
    REQUIRE(in);
    const json manifest = json::parse(in);
    CHECK_NOTHROW(check_manifest(manifest));
    CHECK(manifest["entries"].size() >= 5);
}

TEST_CASE("checks pass, fail and report missing values without stopping the run") {
    const json manifest = json::parse(R"js({"entries": [
        {"id": "wifi", "args": ["analytic", "--agent", "fixed:(0,1)", "--set", "N=1"],
         "checks": [{"pointer": "/utilization/lte", "equals": 0.0},
                    {"pointer": "/lifetime", "min": 1.0},
                    {"pointer": "/lifetime", "max": 1.0},
                    {"pointer": "/missing", "equals": 1}]},
        {"id": "bad-args", "args": ["solve", "--nope"], "expect_exit": 2},
        {"id": "unexpected-exit", "args": ["solve", "--nope"]}
    ]})js");
    const ReproReport r = run_manifest(manifest);
    REQUIRE(r.rows.size() == 7);
    CHECK(r.rows[0].status == "PASS"); // exit
    CHECK(r.rows[1].status == "PASS");
    CHECK(r.rows[2].status == "PASS");
    CHECK(r.rows[3].status == "FAIL");
    CHECK(r.rows[4].status == "FAIL");
    CHECK(r.rows[4].detail == "missing in output");
    CHECK(row(r, "bad-args", "exit").status == "PASS");
    CHECK(row(r, "unexpected-exit", "exit").status == "FAIL");
    CHECK(r.passed == 4);
    CHECK(r.failed == 3);
    CHECK_FALSE(r.ok());
}

TEST_CASE("relative and absolute tolerances") {
    const json manifest = json::parse(R"js({"entries": [
        {"id": "t", "args": ["analytic", "--set", "N=1", "--set", "p1=0", "--set", "r1=1", "--set", "p2=0", "--set", "r2=1"],
         "checks": [{"pointer": "/utilization/wifi", "expected": 1.05, "rel_tol": 0.05},
                    {"pointer": "/utilization/wifi", "expected": 1.05, "rel_tol": 0.04},
                    {"pointer": "/utilization/wifi", "expected": 1.2, "abs_tol": 0.2}]}
    ]})js");
    const ReproReport r = run_manifest(manifest);
    // p = 0 for both channels never absorbs, so only the exit row has a value
    CHECK(row(r, "t", "exit").status == "PASS");
    CHECK(r.failed == 3);
}

TEST_CASE("desk profile caps episodes and skips heavy or full-only entries") {
    const json manifest = json::parse(R"js({"entries": [
        {"id": "capped", "args": ["simulate", "--agent", "fixed:(0,1)", "--set", "N=1", "--episodes", "5000"],
         "checks": [{"pointer": "/summary/episodes", "equals": 2000}]},
        {"id": "appended", "args": ["simulate", "--agent", "fixed:(0,1)", "--set", "N=1"],
         "checks": [{"pointer": "/summary/episodes", "equals": 2000}]},
        {"id": "small", "args": ["simulate", "--agent", "fixed:(0,1)", "--set", "N=1", "--episodes", "10"],
         "checks": [{"pointer": "/summary/episodes", "equals": 10}]},
        {"id": "heavy", "heavy": true, "args": ["solve"]},
        {"id": "full-only", "profiles": ["full"], "args": ["solve"]}
    ]})js");
    const ReproReport r = run_manifest(manifest);
    CHECK(r.ok());
    CHECK(r.skipped == 2);
    CHECK(row(r, "heavy", "entry").status == "SKIP");
    CHECK(row(r, "full-only", "entry").status == "SKIP");
    CHECK(row(r, "capped", "/summary/episodes").status == "PASS");
    CHECK(row(r, "appended", "/summary/episodes").status == "PASS");
    CHECK(row(r, "small", "/summary/episodes").status == "PASS");
}

TEST_CASE("work directory placeholder chains commands") {
    const json manifest = json::parse(R"js({"entries": [
        {"id": "gen", "args": ["gen-trace", "--samples", "5000", "--out", "{work}/chain.csv"]},
        {"id": "fit", "args": ["fit", "--trace", "{work}/chain.csv"],
         "checks": [{"pointer": "/samples", "equals": 5000}]}
    ]})js");
    const ReproReport r = run_manifest(manifest);
    CHECK(r.ok());
    CHECK(std::filesystem::exists(work_dir() / "chain.csv"));
}

TEST_CASE("report CSV quotes fields with separators") {
    ReproReport r;
    r.rows.push_back({"a", "/x", "FAIL", "1", "[0, 1]", "said \"no\", twice"});
    std::ostringstream csv;
    write_report_csv(csv, r);
    CHECK(csv.str() == "id,check,status,value,expected,detail\na,/x,FAIL,1,\"[0, 1]\",\"said \"\"no\"\", twice\"\n");
}

TEST_CASE("repro command exit status follows the report") {
    const auto path = work_dir() / "empty.json";
    std::ofstream(path) << R"js({"entries": []})js";
    std::ostringstream err;
    CHECK(execute({"repro", "--manifest", path.string()}, err).exit_code == kExitOk);
    std::ofstream(work_dir() / "broken.json") << "{ not json";
    CHECK(execute({"repro", "--manifest", (work_dir() / "broken.json").string()}, err).exit_code == kExitParse);
    CHECK(execute({"repro", "--manifest", path.string(), "--profile", "slow"}, err).exit_code == kExitValidation);
}
