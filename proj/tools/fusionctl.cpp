// fusionctl: build fusion modules, inspect kernels and filtrations, and run
// the verification suites.

#include "fusion/composition.hpp"
#include "fusion/errors.hpp"
#include "fusion/geometry.hpp"
#include "fusion/registry.hpp"
#include "fusion/submodules.hpp"
#include "fusion/suites.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace fusion;

namespace {

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

Composition valid_composition(const std::string& text) {
    Composition A = parse_composition(text);
    if (A.a.empty()) throw UsageError("--a needs at least one entry");
    require_valid(A);
    return A;
}

void print_json(const Json& j) { std::cout << j.dump() << "\n"; }

void cmd_build(const Composition& A, OutputFormat fmt, bool character_only) {
    ModulePtr M = module_for(A);
    GradedCharacter ch = M->character();
    switch (fmt) {
        case OutputFormat::json: {
            Json j{{"A", A.a}, {"dim", M->total_dim()}, {"character", to_json(ch)}};
            if (!character_only) {
                Json pieces = Json::array();
                for (auto b : M->support()) pieces.push_back({b.k, b.s, M->piece_dim(b)});
                j["pieces"] = pieces;
            }
            print_json(j);
            break;
        }
        case OutputFormat::csv:
            std::cout << "k,s,dim\n";
            for (auto b : M->support()) std::cout << b.k << "," << b.s << "," << M->piece_dim(b) << "\n";
            break;
        case OutputFormat::table:
            std::cout << "M^" << A.to_string() << "\n";
            std::cout << "dim       " << M->total_dim() << "\n";
            std::cout << "character " << ch.to_string() << "\n";
            if (!character_only) {
                std::cout << "  k  s  dim\n";
                for (auto b : M->support())
                    std::cout << "  " << b.k << "  " << b.s << "  " << M->piece_dim(b) << "\n";
            }
    }
}

void cmd_submodule(const Composition& A, int i, int j, OutputFormat fmt) {
    if (j == 0) j = i + 1;
    Submodule S = submodule_S(A, {i, j});
    Json out{{"A", A.a}, {"i", i}, {"j", j}, {"target", apply_move(A, {i, j}).a}, {"dim", S.space.dim()},
             {"character", to_json(S.space.character())}};
    if (j == i + 1) out["formula"] = kernel_dim_formula(A, i);
    if (fmt == OutputFormat::table) {
        std::cout << "S_{" << i << "," << j << "}" << A.to_string() << " = ker(M^" << A.to_string() << " -> M^"
                  << apply_move(A, {i, j}).to_string() << ")\n";
        std::cout << "dim       " << S.space.dim();
        if (j == i + 1) std::cout << "  (formula " << kernel_dim_formula(A, i) << ")";
        std::cout << "\ncharacter " << S.space.character().to_string() << "\n";
    } else if (fmt == OutputFormat::csv) {
        std::cout << "dim,character\n" << S.space.dim() << ",\"" << S.space.character().to_string() << "\"\n";
    } else {
        print_json(out);
    }
}

int cmd_filtration(const Composition& A, int i, OutputFormat fmt) {
    FiltrationReport rep = verify_filtration(A, i);
    long long total = 0;
    if (fmt == OutputFormat::json) {
        Json steps = Json::array();
        for (const auto& st : rep.steps) {
            Json s{{"ambient", st.ambient.a}, {"module", st.quotient.a}, {"dim", st.dim}, {"rule", st.rule}};
            s["shift"] = st.shift ? to_json(*st.shift) : Json(nullptr);
            steps.push_back(s);
        }
        print_json({{"A", A.a}, {"i", i}, {"steps", steps}, {"status", rep.check.ok ? "pass" : "fail"}});
    } else if (fmt == OutputFormat::csv) {
        std::cout << "step,rule,module,dim,shift\n";
        int t = 1;
        for (const auto& st : rep.steps)
            std::cout << t++ << "," << st.rule << ",\"" << st.quotient.to_string() << "\"," << st.dim << ",\""
                      << (st.shift ? st.shift->to_string() : "") << "\"\n";
    } else {
        int t = 1;
        for (const auto& st : rep.steps) {
            std::cout << t++ << "  " << st.rule << "  M^" << st.quotient.to_string() << "  dim " << st.dim;
            if (st.shift) std::cout << "  shift " << st.shift->to_string();
            std::cout << "\n";
            total += st.dim;
        }
        std::cout << "total " << total << " = dim M^" << A.to_string() << " = " << A.product() << "\n";
    }
    if (!rep.check.ok) std::cerr << rep.check.detail << "\n";
    return rep.check.ok ? 0 : 1;
}

int cmd_cohomology(const std::string& text, OutputFormat fmt) {
    std::vector<int> label;
    for (const auto& s : split_commas(text)) label.push_back(std::stoi(s));
    CohomologyResult r = cohomology_dim(label);
    long long prod = 1;
    for (int x : label) prod *= x + 1;
    if (fmt == OutputFormat::json) {
        Json chain = Json::array();
        for (const auto& st : r.chain) chain.push_back({{"state", st.state}, {"rule", st.rule}, {"added", st.added}});
        print_json({{"label", label}, {"dim", r.value}, {"product", prod}, {"chain", chain}});
    } else if (fmt == OutputFormat::csv) {
        std::cout << "state,rule,added\n";
        for (const auto& st : r.chain) std::cout << "\"" << Composition(st.state).to_string() << "\"," << st.rule << "," << st.added << "\n";
    } else {
        for (const auto& st : r.chain) {
            std::cout << "d" << Composition(st.state).to_string() << "  " << st.rule;
            if (st.added) std::cout << "  +" << st.added;
            std::cout << "\n";
        }
        std::cout << "dim H^0 = " << r.value << "  (prod (a_i+1) = " << prod << ")\n";
    }
    return r.value == prod ? 0 : 1;
}

int cmd_splitting(int n, OutputFormat fmt) {
    LaurentMatrix M = transition_matrix_En(n);
    SplittingResult s = splitting_type(M);
    auto want = expected_splitting(n);
    if (fmt == OutputFormat::json) {
        print_json({{"n", n}, {"splitting", s.exponents}, {"expected", want}, {"steps", s.steps}, {"terminated", s.terminated}});
    } else if (fmt == OutputFormat::csv) {
        std::cout << "degree\n";
        for (int e : s.exponents) std::cout << e << "\n";
    } else {
        std::cout << M.to_string();
        std::cout << "splitting:";
        for (int e : s.exponents) std::cout << " " << e;
        std::cout << "\nexpected: ";
        for (int e : want) std::cout << " " << e;
        std::cout << "\nsteps " << s.steps << (s.terminated ? "" : " (step bound reached)") << "\n";
    }
    if (!s.terminated) return 1;
    return s.exponents == want ? 0 : 1;
}

void cmd_invert(const std::string& text, OutputFormat fmt) {
    std::vector<Scalar> c;
    for (const auto& s : split_commas(text)) c.push_back(parse_scalar(s));
    TruncatedSeries y = invert_series(TruncatedSeries(c));
    if (fmt == OutputFormat::table) {
        std::cout << y.to_string() << "\n";
    } else if (fmt == OutputFormat::csv) {
        std::cout << "power,coefficient\n";
        for (int t = 0; t < y.n(); ++t) std::cout << t << "," << to_string(y.coeffs[static_cast<std::size_t>(t)]) << "\n";
    } else {
        Json arr = Json::array();
        for (const auto& x : y.coeffs) arr.push_back(to_string(x));
        print_json({{"x", text}, {"y", arr}});
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fusion modules of sl2 currents: construction and verification"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string a_text, format = "table", suite;
    int i = 0, j = 0, n = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
        sub->add_option("--cache-dir", cfg.cache_dir, "module cache directory")->envname("FUSION_CACHE_DIR");
    };

    auto* build = app.add_subcommand("build", "build M^A and print its character table");
    build->add_option("--a", a_text, "composition, e.g. 2,3,4")->required();
    common(build);
    auto* character = app.add_subcommand("character", "print the bigraded character of M^A");
    character->add_option("--a", a_text)->required();
    common(character);
    auto* submodule = app.add_subcommand("submodule", "kernel S_{i,j}(A) of M^A -> M^{A_{i,j}}");
    submodule->add_option("--a", a_text)->required();
    submodule->add_option("--i", i)->required();
    submodule->add_option("--j", j, "defaults to i+1");
    common(submodule);
    auto* filtration = app.add_subcommand("filtration", "peel S_{i,i+1}(A) into fusion modules");
    filtration->add_option("--a", a_text)->required();
    filtration->add_option("--i", i)->required();
    common(filtration);
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite)->required()->check(CLI::IsMember(suite_names()));
    verify->add_option("--max-n", cfg.max_n)->check(CLI::PositiveNumber);
    verify->add_option("--max-entry", cfg.max_entry)->check(CLI::PositiveNumber);
    verify->add_option("--n", n, "restrict geometric suites to this n")->check(CLI::PositiveNumber);
    verify->add_option("--seed", cfg.seed);
    verify->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
    verify->add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
    common(verify);
    auto* cohomology = app.add_subcommand("cohomology", "dim H^0 of O(a_1..a_n) by the recursion");
    cohomology->add_option("--a", a_text, "sorted nonnegative label")->required();
    common(cohomology);
    auto* splitting = app.add_subcommand("splitting", "transition matrix of E_n and its splitting type");
    splitting->add_option("--n", n)->required()->check(CLI::Range(2, 12));
    common(splitting);
    auto* invert = app.add_subcommand("invert", "invert a series in Q[t]/t^n");
    invert->add_option("--a", a_text, "coefficients of t^0..t^{n-1}")->required();
    common(invert);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    cfg.format = format == "json" ? OutputFormat::json : format == "csv" ? OutputFormat::csv : OutputFormat::table;
    if (n > 0) cfg.n = n;
    if (!cfg.cache_dir.empty()) registry().set_cache_dir(cfg.cache_dir);

    try {
        if (*build) cmd_build(valid_composition(a_text), cfg.format, false);
        if (*character) cmd_build(valid_composition(a_text), cfg.format, true);
        if (*submodule) cmd_submodule(valid_composition(a_text), i, j, cfg.format);
        if (*filtration) return cmd_filtration(valid_composition(a_text), i, cfg.format);
        if (*cohomology) return cmd_cohomology(a_text, cfg.format);
        if (*splitting) return cmd_splitting(n, cfg.format);
        if (*invert) cmd_invert(a_text, cfg.format);
        if (*verify) {
            auto reports = run_suite(suite, cfg);
            write_reports(std::cout, reports, cfg.format);
            return exit_code(reports);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
