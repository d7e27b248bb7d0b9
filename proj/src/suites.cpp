#include "fusion/suites.hpp"

#include "fusion/dual.hpp"
#include "fusion/errors.hpp"
#include "fusion/fusion_checks.hpp"
#include "fusion/geometry.hpp"
#include "fusion/parallel.hpp"
#include "fusion/registry.hpp"
#include "fusion/submodules.hpp"

#include <algorithm>
#include <chrono>
#include <random>

namespace fusion {

namespace {

std::vector<Composition> grid(int min_n, int max_n, int max_entry) {
    std::vector<Composition> out;
    for (int n = min_n; n <= max_n; ++n)
        for (auto& A : sorted_compositions(n, max_entry)) out.push_back(std::move(A));
    return out;
}

bool move_ok(const Composition& A, int i, int j) {
    if (i < 1 || j > A.n() || i >= j) return false;
    Composition B = A;
    B.a[static_cast<std::size_t>(i - 1)] -= 1;
    B.a[static_cast<std::size_t>(j - 1)] += 1;
    return B.positive() && B.sorted();
}

Json comp_json(const Composition& A) { return A.a; }

std::string tag(const Composition& A, int i = 0, int j = 0) {
    std::string s = A.to_string();
    if (i) s += ",i=" + std::to_string(i);
    if (j) s += ",j=" + std::to_string(j);
    return s;
}

std::string pad(int n) {
    std::string s = std::to_string(n);
    return std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
}

struct Builder {
    std::vector<Claim>& out;
    const RunConfig& cfg;

    void add(std::string id, std::string anchor, Json inputs, std::function<Check()> run) {
        inputs["seed"] = cfg.seed;
        out.push_back({std::move(id), std::move(anchor), std::move(inputs), std::move(run)});
    }
};

int geo_lo(const RunConfig& cfg, int lo) { return cfg.n ? std::max(lo, *cfg.n) : lo; }
int geo_hi(const RunConfig& cfg, int hi) { return cfg.n ? *cfg.n : hi; }

void dims_suite(Builder& b) {
    const RunConfig& cfg = b.cfg;
    for (const auto& A : grid(1, cfg.max_n, cfg.max_entry)) {
        b.add("dims/dimension/" + tag(A), "dimension-law", {{"A", comp_json(A)}}, [A] {
            Check c;
            ModulePtr M = module_for(A);
            c.expected["dim"] = A.product();
            c.got["dim"] = M->total_dim();
            c.got["character"] = to_json(M->character());
            c.require(static_cast<long long>(M->total_dim()) == A.product(), "dim M^A differs from prod a_i");
            return c;
        });
        b.add("dims/e0-nilpotency/" + tag(A), "e0-nilpotency", {{"A", comp_json(A)}}, [A] { return verify_e0_nilpotency(A); });
        if (A.n() >= 2)
            b.add("dims/demazure/" + tag(A), "demazure-embedding", {{"A", comp_json(A)}}, [A] { return verify_demazure(A); });
        if (A.n() < cfg.max_n)
            b.add("dims/deletion-of-ones/" + tag(A), "deletion-of-ones", {{"tail", comp_json(A)}},
                  [A] { return verify_deletion_of_ones(A); });
    }
    int tn = std::min(cfg.max_n, 3), te = std::min(cfg.max_entry, 3);
    auto small = grid(1, tn, te);
    for (const auto& A : small)
        for (const auto& B : small)
            if (B.n() <= A.n())
                b.add("dims/tensor/" + A.to_string() + "x" + B.to_string(), "tensor-embedding",
                      {{"A", comp_json(A)}, {"B", comp_json(B)}}, [A, B] { return verify_tensor_embedding(A, B); });
}

void dual_suite(Builder& b) {
    const RunConfig& cfg = b.cfg;
    std::vector<Composition> cases = grid(1, std::min(cfg.max_n, 3), cfg.max_entry);
    if (cfg.max_n >= 4)
        for (auto& A : grid(4, 4, std::min(cfg.max_entry, 3))) cases.push_back(A);
    for (const auto& A : cases)
        b.add("dual-oracle/character/" + tag(A), "dual-functional-realization", {{"A", comp_json(A)}}, [A] {
            Check c;
            GradedCharacter quotient = module_for(A)->character();
            GradedCharacter oracle = oracle_character(A);
            c.expected["character"] = to_json(quotient);
            c.got["character"] = to_json(oracle);
            c.require(quotient == oracle, "symmetric-polynomial oracle differs from the ideal quotient");
            return c;
        });
    const std::vector<std::pair<Composition, int>> ring{{{2, 2}, 2}, {{2, 3}, 2}, {{2, 3}, 3}, {{2, 2, 3}, 2}, {{2, 3, 4}, 2}};
    for (const auto& [A, k] : ring)
        b.add("dual-oracle/coordinate-ring/" + tag(A) + ",k=" + std::to_string(k), "coordinate-ring-generation",
              {{"A", comp_json(A)}, {"k", k}}, [A, k] { return coordinate_ring_component(A, k, true); });
}

void submodule_suite(Builder& b) {
    const RunConfig& cfg = b.cfg;
    for (const auto& A : grid(2, cfg.max_n, cfg.max_entry)) {
        for (int i = 1; i < A.n(); ++i) {
            if (!move_ok(A, i, i + 1)) continue;
            Json in{{"A", comp_json(A)}, {"i", i}};
            b.add("submodules/kernel-dimension/" + tag(A, i), "kernel-dimension", in, [A, i] { return verify_exactness(A, i); });
            if (A[i] == A[i + 1])
                b.add("submodules/equal-entries/" + tag(A, i), "equal-entries-kernel", in,
                      [A, i] { return verify_equal_entries_kernel(A, i); });
            b.add("submodules/generators/" + tag(A, i), "kernel-generators", in, [A, i] { return verify_generators(A, i); });
        }
        if (move_ok(A, 1, 2))
            b.add("submodules/first-kernel/" + tag(A), "first-kernel", {{"A", comp_json(A)}}, [A] { return verify_first_kernel(A); });
        for (int i = 1; i < A.n(); ++i)
                for (int j = i + 2; j <= A.n(); ++j) {
                    bool ok = move_ok(A, i, j);
                    for (int l = i; l < j; ++l) ok = ok && move_ok(A, l, l + 1);
                    if (!ok) continue;
                    b.add("submodules/sum/" + tag(A, i, j), "kernel-sum-decomposition", {{"A", comp_json(A)}, {"i", i}, {"j", j}},
                          [A, i, j] { return verify_sum_decomposition(A, {i, j}); });
                }
    }
}

Check filtration_check(const Composition& A, int i, std::optional<std::vector<std::vector<int>>> want_labels,
                       std::optional<std::vector<long long>> want_dims) {
    FiltrationReport rep = verify_filtration(A, i);
    Check c = rep.check;
    Json steps = Json::array();
    std::vector<std::vector<int>> labels;
    std::vector<long long> dims;
    for (const auto& st : rep.steps) {
        labels.push_back(st.quotient.a);
        dims.push_back(st.dim);
        Json s{{"module", st.quotient.a}, {"dim", st.dim}, {"rule", st.rule}};
        if (st.shift) s["shift"] = to_json(*st.shift);
        steps.push_back(s);
    }
    c.got["steps"] = steps;
    if (want_labels) {
        c.expected["quotients"] = *want_labels;
        c.require(labels == *want_labels, "filtration quotients differ from the worked chain");
    }
    if (want_dims) {
        c.expected["dims"] = *want_dims;
        c.require(dims == *want_dims, "filtration dimensions differ from the worked chain");
    }
    return c;
}

void filtration_suite(Builder& b) {
    const RunConfig& cfg = b.cfg;
    b.add("filtration/worked/(4,5,6,9),i=3", "filtration", {{"A", {4, 5, 6, 9}}, {"i", 3}}, [] {
        return filtration_check({4, 5, 6, 9}, 3, std::vector<std::vector<int>>{{4, 8}, {4, 6}, {3, 5}, {3, 3}, {4, 5, 5, 10}},
                                std::vector<long long>{32, 24, 15, 9, 1000});
    });
    b.add("filtration/worked/(2,2,3),i=1", "filtration-stop", {{"A", {2, 2, 3}}, {"i", 1}}, [] {
        return filtration_check({2, 2, 3}, 1, std::vector<std::vector<int>>{{1, 3}, {1, 3, 3}}, std::nullopt);
    });
    for (const auto& A : grid(2, cfg.max_n, cfg.max_entry))
        for (int i = 1; i < A.n(); ++i) {
            if (!move_ok(A, i, i + 1)) continue;
            b.add("filtration/grid/" + tag(A, i), "filtration", {{"A", comp_json(A)}, {"i", i}},
                  [A, i] { return filtration_check(A, i, std::nullopt, std::nullopt); });
        }
}

void description_suite(Builder& b) {
    const RunConfig& cfg = b.cfg;
    for (const auto& A : grid(2, cfg.max_n, cfg.max_entry)) {
        b.add("descriptions/e1-nilpotency/" + tag(A), "e1-nilpotency", {{"A", comp_json(A)}}, [A] { return nilpotency_e1(A); });
        for (int i = 1; i < A.n(); ++i) {
            if (!move_ok(A, i, i + 1)) continue;
            Json in{{"A", comp_json(A)}, {"i", i}};
            if (A[i] < A[i + 1])
                b.add("descriptions/tensor-description/" + tag(A, i), "tensor-description", in,
                      [A, i] { return verify_second_description(A, i); });
            if (emb_hypothesis(A, i))
                b.add("descriptions/embedding/" + tag(A, i), "embedding-description", in, [A, i] { return verify_emb(A, i); });
            b.add("descriptions/inductive/" + tag(A, i), "inductive-description", in,
                  [A, i] { return verify_inductive_description(A, i); });
        }
    }
}

void vectorfield_suite(Builder& b) {
    const RunConfig& cfg = b.cfg;
    SampleConfig sc{cfg.samples, cfg.seed};
    for (int n = geo_lo(cfg, 1); n <= geo_hi(cfg, 6); ++n) {
        b.add("vectorfields/algebra/n=" + pad(n), "vector-field-algebra", {{"n", n}}, [n] { return verify_vect_algebra(n); });
        b.add("vectorfields/jacobian/n=" + pad(n), "canonical-bundle-jacobian", {{"n", n}, {"samples", cfg.samples}},
              [n, sc] { return jacobian_identity(n, sc); });
        if (n >= 2)
            b.add("vectorfields/chart-identities/n=" + pad(n), "chart-transition-identities", {{"n", n}, {"samples", cfg.samples}},
                  [n, sc] { return pushforward_check(n, sc); });
    }
}

void transition_suite(Builder& b) {
    for (int n = geo_lo(b.cfg, 2); n <= geo_hi(b.cfg, 5); ++n)
        b.add("transition/matrix/n=" + pad(n), "transition-matrix", {{"n", n}}, [n] { return verify_transition(n); });
}

void splitting_suite(Builder& b) {
    for (int n = geo_lo(b.cfg, 2); n <= geo_hi(b.cfg, 5); ++n)
        b.add("splitting/type/n=" + pad(n), "splitting-type", {{"n", n}}, [n] { return verify_splitting(n); });
}

void cohomology_suite(Builder& b) {
    const RunConfig& cfg = b.cfg;
    int e = std::min(cfg.max_entry, 4);
    for (int n = 1; n <= cfg.max_n; ++n)
        for (const auto& A : sorted_compositions(n, e + 1)) {
            std::vector<int> label = A.a;
            for (int& x : label) x -= 1;
            b.add("cohomology/recursion/" + Composition(label).to_string(), "cohomology-recursion", {{"label", label}},
                  [label] { return verify_cohomology(label); });
        }
    b.add("cohomology/chain/(2,3,4)", "cohomology-recursion", {{"label", {2, 3, 4}}}, [] {
        Check c;
        CohomologyResult r = cohomology_dim({2, 3, 4});
        Json chain = Json::array();
        for (const auto& st : r.chain) chain.push_back({{"state", st.state}, {"rule", st.rule}, {"added", st.added}});
        c.got["chain"] = chain;
        c.expected["first_step"] = {{"state", {2, 3, 3}}, {"added", 12}};
        c.expected["dim"] = 60;
        c.got["dim"] = r.value;
        c.require(r.value == 60, "d(2,3,4) differs from 60");
        c.require(r.chain.size() > 1 && r.chain[0].rule == "R1" && r.chain[0].added == 12 &&
                      r.chain[1].state == std::vector<int>{2, 3, 3},
                  "first step differs from d(2,3,4) = d(2,3,3) + 12");
        return c;
    });
    for (const auto& A : grid(1, cfg.max_n, cfg.max_entry))
        b.add("cohomology/pullback/" + tag(A), "pullback-sections", {{"A", comp_json(A)}}, [A] { return verify_pullback(A); });
}

}  // namespace

Json Report::to_json() const {
    Json j;
    j["claim"] = claim;
    j["anchor"] = anchor;
    j["inputs"] = inputs;
    j["expected"] = expected;
    j["got"] = got;
    j["shift"] = shift ? fusion::to_json(*shift) : Json(nullptr);
    j["status"] = status;
    j["ms"] = ms;
    return j;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"dims",         "dual-oracle", "submodules", "filtration", "descriptions",
                                                "vectorfields", "transition",  "splitting",  "cohomology", "all"};
    return names;
}

std::vector<Claim> expand_suite(const std::string& suite, const RunConfig& cfg) {
    if (cfg.max_n < 1 || cfg.max_entry < 1) throw UsageError("grid bounds must be positive");
    if (cfg.samples < 1) throw UsageError("sample count must be positive");
    std::vector<Claim> out;
    Builder b{out, cfg};
    const std::vector<std::pair<std::string, void (*)(Builder&)>> table{
        {"dims", dims_suite},         {"dual-oracle", dual_suite}, {"submodules", submodule_suite},
        {"filtration", filtration_suite}, {"descriptions", description_suite}, {"vectorfields", vectorfield_suite},
        {"transition", transition_suite}, {"splitting", splitting_suite}, {"cohomology", cohomology_suite}};
    bool found = false;
    for (const auto& [name, fn] : table)
        if (suite == "all" || suite == name) {
            fn(b);
            found = true;
        }
    if (!found) throw UsageError("unknown suite: " + suite);
    return out;
}

Report cache_spot_check(const RunConfig& cfg) {
    Report r;
    r.claim = "cache/spot-check";
    r.anchor = "cache-consistency";
    r.inputs["seed"] = cfg.seed;
    auto known = registry().known();
    // Nothing requested yet: draw from a small grid instead.
    if (known.empty()) known = grid(1, std::min(cfg.max_n, 3), std::min(cfg.max_entry, 3));
    std::mt19937_64 rng(cfg.seed);
    const Composition& A = known[std::uniform_int_distribution<std::size_t>(0, known.size() - 1)(rng)];
    auto t0 = std::chrono::steady_clock::now();
    GradedCharacter stored = module_for(A)->character();
    GradedCharacter fresh = ModuleRegistry::build_fresh(A)->character();
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.inputs["A"] = A.a;
    r.inputs["key"] = ModuleRegistry::cache_key(A);
    r.expected["character"] = to_json(fresh);
    r.got["character"] = to_json(stored);
    r.status = stored == fresh ? "pass" : "fail";
    return r;
}

std::vector<Report> run_claims(std::vector<Claim> claims, const RunConfig& cfg) {
    std::vector<Report> reports(claims.size());
    parallel_for(
        claims.size(),
        [&](std::size_t t) {
            const Claim& cl = claims[t];
            Report& r = reports[t];
            r.claim = cl.id;
            r.anchor = cl.anchor;
            r.inputs = cl.inputs;
            auto t0 = std::chrono::steady_clock::now();
            try {
                Check c = cl.run();
                r.expected = c.expected;
                r.got = c.got;
                r.shift = c.shift;
                r.status = c.ok ? "pass" : "fail";
                if (!c.ok) r.got["detail"] = c.detail;
            } catch (const IntegrityError& e) {
                r.status = "fail";
                r.integrity_error = true;
                r.got["detail"] = std::string("integrity: ") + e.what();
            } catch (const std::exception& e) {
                r.status = "fail";
                r.got["detail"] = std::string("error: ") + e.what();
            }
            r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        },
        cfg.workers);
    reports.push_back(cache_spot_check(cfg));
    std::stable_sort(reports.begin(), reports.end(), [](const Report& a, const Report& b) { return a.claim < b.claim; });
    return reports;
}

std::vector<Report> run_suite(const std::string& suite, const RunConfig& cfg) {
    return run_claims(expand_suite(suite, cfg), cfg);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string shift_text(const std::optional<Bidegree>& s) { return s ? s->to_string() : ""; }

}  // namespace

void write_reports(std::ostream& os, const std::vector<Report>& reports, OutputFormat format) {
    switch (format) {
        case OutputFormat::json:
            for (const auto& r : reports) os << r.to_json().dump() << "\n";
            break;
        case OutputFormat::csv:
            os << "claim,anchor,status,shift,ms,inputs,expected,got\n";
            for (const auto& r : reports)
                os << csv_field(r.claim) << "," << csv_field(r.anchor) << "," << r.status << "," << csv_field(shift_text(r.shift))
                   << "," << r.ms << "," << csv_field(r.inputs.dump()) << "," << csv_field(r.expected.dump()) << ","
                   << csv_field(r.got.dump()) << "\n";
            break;
        case OutputFormat::table: {
            std::size_t w = 5;
            for (const auto& r : reports) w = std::max(w, r.claim.size());
            int pass = 0;
            for (const auto& r : reports) {
                pass += r.status == "pass";
                std::string line = r.status;
                line.resize(8, ' ');
                std::string claim = r.claim;
                claim.resize(w + 2, ' ');
                os << line << claim << r.anchor;
                if (r.shift) os << "  shift " << r.shift->to_string();
                if (r.status == "fail" && r.got.contains("detail")) os << "  -- " << r.got["detail"].get<std::string>();
                os << "\n";
            }
            os << pass << "/" << reports.size() << " passed\n";
            break;
        }
    }
}

int exit_code(const std::vector<Report>& reports) {
    bool integrity = false, failed = false;
    for (const auto& r : reports) {
        integrity = integrity || r.integrity_error;
        failed = failed || r.status == "fail";
    }
    return integrity ? 3 : failed ? 1 : 0;
}

}  // namespace fusion
