#include "fusion/errors.hpp"
#include "fusion/suites.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace fusion;

namespace {

std::string stripped(const std::vector<Report>& reports) {
    std::string out;
    for (const auto& r : reports) {
        Json j = r.to_json();
        j.erase("ms");
        out += j.dump() + "\n";
    }
    return out;
}

RunConfig small() {
    RunConfig cfg;
    cfg.max_n = 2;
    cfg.max_entry = 3;
    cfg.samples = 4;
    cfg.seed = 42;
    return cfg;
}

}  // namespace

TEST_SUITE("cli-harness") {

TEST_CASE("suite names") {
    std::set<std::string> names(suite_names().begin(), suite_names().end());
    for (const char* s : {"dims", "dual-oracle", "submodules", "filtration", "descriptions", "vectorfields", "transition",
                          "splitting", "cohomology", "all"})
        CHECK(names.count(s) == 1);
    CHECK_THROWS_AS(expand_suite("nope", small()), UsageError);
}

TEST_CASE("report schema and seed") {
    auto reports = run_suite("dims", small());
    REQUIRE_FALSE(reports.empty());
    for (const auto& r : reports) {
        Json j = r.to_json();
        std::vector<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
        CHECK(keys == std::vector<std::string>{"claim", "anchor", "inputs", "expected", "got", "shift", "status", "ms"});
        CHECK(j["inputs"]["seed"] == 42);
        CHECK_FALSE(r.anchor.empty());
        CHECK(r.status == "pass");
    }
    CHECK(exit_code(reports) == 0);
    CHECK(std::is_sorted(reports.begin(), reports.end(), [](const Report& a, const Report& b) { return a.claim < b.claim; }));
}

TEST_CASE("reports are deterministic across runs and worker counts") {
    RunConfig a = small(), b = small();
    a.workers = 1;
    b.workers = 4;
    CHECK(stripped(run_suite("submodules", a)) == stripped(run_suite("submodules", b)));
    CHECK(stripped(run_suite("vectorfields", a)) == stripped(run_suite("vectorfields", a)));
}

TEST_CASE("the seed changes the sampled points and the spot check") {
    RunConfig a = small(), b = small();
    b.seed = 43;
    auto ra = run_suite("vectorfields", a), rb = run_suite("vectorfields", b);
    CHECK(exit_code(ra) == 0);
    CHECK(exit_code(rb) == 0);
    CHECK(stripped(ra) != stripped(rb));
}

TEST_CASE("geometric suites honor a single n") {
    RunConfig cfg = small();
    cfg.n = 3;
    for (const auto& c : expand_suite("splitting", cfg)) CHECK(c.inputs["n"] == 3);
    CHECK(expand_suite("splitting", cfg).size() == 1);
}

TEST_CASE("exit codes") {
    Report ok, bad, broken;
    ok.status = "pass";
    bad.status = "fail";
    broken.status = "fail";
    broken.integrity_error = true;
    CHECK(exit_code({ok}) == 0);
    CHECK(exit_code({ok, bad}) == 1);
    CHECK(exit_code({bad, broken}) == 3);
}

TEST_CASE("claims that throw become failing reports") {
    Claim usage{"x/usage", "test", Json::object(), [] () -> Check { throw UsageError("bad"); }};
    Claim integ{"x/integrity", "test", Json::object(), [] () -> Check { throw IntegrityError("broken"); }};
    auto reports = run_claims({usage, integ}, small());
    int fails = 0;
    for (const auto& r : reports)
        if (r.claim.rfind("x/", 0) == 0) {
            CHECK(r.status == "fail");
            ++fails;
        }
    CHECK(fails == 2);
    CHECK(exit_code(reports) == 3);
}

TEST_CASE("output formats") {
    auto reports = run_suite("transition", small());
    std::ostringstream table, csv, json;
    write_reports(table, reports, OutputFormat::table);
    write_reports(csv, reports, OutputFormat::csv);
    write_reports(json, reports, OutputFormat::json);
    CHECK(table.str().find("passed") != std::string::npos);
    CHECK(csv.str().rfind("claim,anchor,status,shift,ms,inputs,expected,got\n", 0) == 0);
    std::istringstream lines(json.str());
    std::size_t count = 0;
    for (std::string line; std::getline(lines, line); ++count) CHECK(Json::accept(line));
    CHECK(count == reports.size());
}

TEST_CASE("cache spot check") {
    Report r = cache_spot_check(small());
    CHECK(r.status == "pass");
    CHECK(r.anchor == "cache-consistency");
    CHECK(r.expected == r.got);
}

}
