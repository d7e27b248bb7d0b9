#pragma once

// Verification suites: each suite expands into claim instances over a grid,
// runs them on a worker pool and returns reports sorted by claim id.

#include "fusion/check.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fusion {

enum class OutputFormat { table, json, csv };

struct RunConfig {
    int max_n = 4;
    int max_entry = 5;
    std::optional<int> n;  // restricts the geometric suites to one n
    int samples = 20;
    std::uint64_t seed = 1;
    std::string cache_dir;
    OutputFormat format = OutputFormat::table;
    unsigned workers = 0;
};

struct Report {
    std::string claim;
    std::string anchor;
    Json inputs = Json::object();
    Json expected = Json::object();
    Json got = Json::object();
    std::optional<Bidegree> shift;
    std::string status;  // "pass", "fail" or "skipped"
    double ms = 0;
    bool integrity_error = false;

    Json to_json() const;
};

struct Claim {
    std::string id;
    std::string anchor;
    Json inputs;
    std::function<Check()> run;
};

const std::vector<std::string>& suite_names();

// UsageError for an unknown suite.
std::vector<Claim> expand_suite(const std::string& suite, const RunConfig& cfg);

// Runs the claims (plus one cache spot check) and sorts by claim id.
std::vector<Report> run_claims(std::vector<Claim> claims, const RunConfig& cfg);
std::vector<Report> run_suite(const std::string& suite, const RunConfig& cfg);

// Rebuilds one module requested during the run, chosen by the seed, and
// compares it with the stored copy.
Report cache_spot_check(const RunConfig& cfg);

void write_reports(std::ostream& os, const std::vector<Report>& reports, OutputFormat format);

// 0 all pass, 1 some failure, 3 an integrity error occurred.
int exit_code(const std::vector<Report>& reports);

}  // namespace fusion
