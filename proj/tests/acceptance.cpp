// Acceptance run: one PASS/FAIL line per criterion, computed from two runs of
// the full verification suite.
//
// --expect-fail lists criteria known to fail; the exit status is then 0 only
// if exactly those fail, so an unexpected pass is as loud as a new failure.

#include "fusion/suites.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

using namespace fusion;

namespace {

struct Selection {
    std::vector<const Report*> reports;
    std::size_t passed = 0;
    double ms = 0;

    bool all_pass() const { return !reports.empty() && passed == reports.size(); }
    std::string ratio() const { return std::to_string(passed) + "/" + std::to_string(reports.size()); }
};

Selection select(const std::vector<Report>& all, const std::string& prefix) {
    Selection s;
    for (const auto& r : all)
        if (r.claim.rfind(prefix, 0) == 0) {
            s.reports.push_back(&r);
            s.passed += r.status == "pass";
            s.ms += r.ms;
        }
    return s;
}

std::string failing(const Selection& s) {
    std::string out;
    for (const auto* r : s.reports)
        if (r->status != "pass") out += (out.empty() ? "" : ", ") + r->claim.substr(r->claim.rfind('/') + 1);
    return out;
}

std::string stripped(const std::vector<Report>& reports) {
    std::string out;
    for (const auto& r : reports) {
        Json j = r.to_json();
        j.erase("ms");
        out += j.dump() + "\n";
    }
    return out;
}

std::string seconds(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f s", ms / 1000);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    RunConfig cfg;
    cfg.max_n = 4;
    cfg.max_entry = 5;
    cfg.samples = 20;
    std::vector<int> expect_fail;
    app.add_option("--seed", cfg.seed);
    app.add_option("--workers", cfg.workers);
    app.add_option("--expect-fail", expect_fail, "criteria expected to fail")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<Report> run1 = run_suite("all", cfg);
    auto t1 = std::chrono::steady_clock::now();
    std::vector<Report> run2 = run_suite("all", cfg);
    double first_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    std::vector<std::pair<bool, std::string>> lines;

    {
        Selection s = select(run1, "dims/dimension/");
        bool ok = s.all_pass() && s.reports.size() >= 125 && s.ms < 600000;
        lines.push_back({ok, "dimension law: " + s.ratio() + " compositions, n <= 4, entries <= 5, " + seconds(s.ms)});
    }
    {
        Selection s = select(run1, "dual-oracle/character/");
        lines.push_back({s.all_pass() && s.reports.size() == 70,
                         "dual oracle: " + s.ratio() + " characters equal (n <= 3 entries <= 5, n = 4 entries <= 3)"});
    }
    {
        Selection k = select(run1, "submodules/kernel-dimension/"), f = select(run1, "submodules/first-kernel/");
        bool shifts = true;
        for (const auto* r : f.reports) shifts = shifts && r->shift.has_value();
        lines.push_back({k.all_pass() && f.all_pass() && shifts,
                         "kernel dimension: " + k.ratio() + " formula, " + f.ratio() + " first kernels up to recorded shift"});
    }
    {
        Selection s = select(run1, "filtration/worked/(4,5,6,9),i=3");
        bool ok = s.all_pass() && s.reports.size() == 1;
        std::string got;
        if (!s.reports.empty()) {
            const Report& r = *s.reports[0];
            ok = ok && r.got["quotients"] == Json::parse("[[4,8],[4,6],[3,5],[3,3],[4,5,5,10]]") &&
                 r.got["dims"] == Json::parse("[32,24,15,9,1000]") && r.got["total"] == 1080 && r.ms < 300000;
            got = r.got["dims"].dump() + " total " + r.got["total"].dump() + ", " + seconds(r.ms);
        }
        lines.push_back({ok, "worked filtration (4,5,6,9), i = 3: " + got});
    }
    {
        Selection s = select(run1, "dims/tensor/");
        lines.push_back({s.all_pass(), "tensor embedding: " + s.ratio() + " pairs, n <= 3, entries <= 3"});
    }
    {
        Selection t = select(run1, "descriptions/tensor-description/"), e = select(run1, "descriptions/embedding/");
        bool shifts = true;
        for (const auto& sel : {t, e})
            for (const auto* r : sel.reports) shifts = shifts && r->shift.has_value();
        lines.push_back({t.all_pass() && e.all_pass() && shifts,
                         "descriptions: tensor " + t.ratio() + ", embedding " + e.ratio() + ", each with one recorded shift"});
    }
    {
        Selection a = select(run1, "vectorfields/algebra/"), t = select(run1, "transition/matrix/"),
                  s = select(run1, "splitting/type/");
        bool ok = a.all_pass() && a.reports.size() == 6 && t.all_pass() && s.all_pass();
        std::string text = "vector fields: algebra " + a.ratio() + ", transition table " + t.ratio() + ", splitting " + s.ratio();
        if (!t.all_pass()) text += "; table differs at " + failing(t);
        if (!s.all_pass()) text += "; splitting differs at " + failing(s);
        lines.push_back({ok, text});
    }
    {
        Selection s = select(run1, "vectorfields/jacobian/");
        bool ok = s.all_pass() && s.reports.size() == 6;
        for (const auto* r : s.reports) ok = ok && r->inputs["samples"] == 20;
        lines.push_back({ok, "jacobian: " + s.ratio() + " values of n, 20 exact samples each"});
    }
    {
        Selection r = select(run1, "cohomology/recursion/"), c = select(run1, "cohomology/chain/(2,3,4)"),
                  p = select(run1, "cohomology/pullback/");
        bool ok = r.all_pass() && r.reports.size() == 125 && c.all_pass() && p.all_pass();
        lines.push_back({ok, "cohomology: recursion " + r.ratio() + ", chain (2,3,4) " + c.ratio() + ", pullback " + p.ratio()});
    }
    {
        bool same = !run1.empty() && stripped(run1) == stripped(run2);
        lines.push_back({same, "determinism: two runs of all (" + std::to_string(run1.size()) + " reports, seed " +
                                   std::to_string(cfg.seed) + ") identical modulo timing; first run " + seconds(first_ms)});
    }

    std::set<int> failed, expected(expect_fail.begin(), expect_fail.end());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        int id = static_cast<int>(i) + 1;
        if (!lines[i].first) failed.insert(id);
        std::cout << "criterion " << (id < 10 ? " " : "") << id << "  " << (lines[i].first ? "PASS" : "FAIL") << "  "
                  << lines[i].second << "\n";
    }
    std::cout << (lines.size() - failed.size()) << "/" << lines.size() << " criteria pass\n";
    if (!expected.empty()) {
        std::cout << "expected failures:";
        for (int e : expected) std::cout << " " << e;
        std::cout << (failed == expected ? " (as expected)" : " (MISMATCH)") << "\n";
    }
    return failed == expected ? 0 : 1;
}
