#include "fusion/errors.hpp"
#include "fusion/fusion_checks.hpp"
#include "fusion/fusion_module.hpp"
#include "fusion/registry.hpp"
#include "fusion/tensor_module.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace fusion;

namespace {

long factorial(int k) {
    long r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

// Differential oracle: quotient dimensions straight from the ideal, with no
// shared code beyond monomial enumeration and rank. The generator for
// (k, z^s) is sum over monomials e^m of degree k with sum_i m_i (n-1-i) = s
// of the multinomial k!/prod m_i!; every multiple of every generator by a
// monomial is thrown into the span of its bidegree.
GradedCharacter naive_character(const Composition& A, int max_k) {
    int n = A.n();
    struct Gen {
        int k;
        int w;
        std::map<std::vector<int>, Scalar> terms;
    };
    std::vector<Gen> gens;
    for (int k = 1; k <= max_k; ++k)
        for (int s = 0; s < A.N(k); ++s) {
            Gen g{k, k * (n - 1) - s, {}};
            for (int w = 0; w <= k * (n - 1); ++w)
                for (const auto& m : enumerate_monomials(n, k, w)) {
                    int zexp = 0;
                    long denom = 1;
                    for (int i = 0; i < n; ++i) {
                        zexp += m.exps[static_cast<std::size_t>(i)] * (n - 1 - i);
                        denom *= factorial(m.exps[static_cast<std::size_t>(i)]);
                    }
                    if (zexp == s) g.terms[m.exps] = Scalar(factorial(k)) / Scalar(denom);
                }
            if (!g.terms.empty()) gens.push_back(g);
        }

    GradedCharacter out;
    for (int k = 0; k <= max_k; ++k)
        for (int w = 0; w <= k * (n - 1); ++w) {
            auto basis = enumerate_monomials(n, k, w);
            std::map<std::vector<int>, std::size_t> index;
            for (std::size_t t = 0; t < basis.size(); ++t) index[basis[t].exps] = t;
            std::vector<Vec> rows;
            for (const auto& g : gens) {
                if (g.k > k || g.w > w) continue;
                for (const auto& mult : enumerate_monomials(n, k - g.k, w - g.w)) {
                    Vec row(basis.size());
                    for (const auto& [e, c] : g.terms) {
                        std::vector<int> prod = e;
                        for (int i = 0; i < n; ++i) prod[static_cast<std::size_t>(i)] += mult.exps[static_cast<std::size_t>(i)];
                        row[index.at(prod)] += c;
                    }
                    rows.push_back(row);
                }
            }
            std::size_t r = rows.empty() ? 0 : rank(Matrix::from_rows(rows, basis.size()));
            long long d = static_cast<long long>(basis.size() - r);
            if (d > 0) out.add({k, w}, d);
        }
    return out;
}

}  // namespace

TEST_SUITE("fusion-modules") {

TEST_CASE("dimension examples") {
    CHECK(FusionModule({1, 1, 1}).total_dim() == 1);
    CHECK(FusionModule({2, 3, 4}).total_dim() == 24);
    FusionModule m({2, 2});
    CHECK(m.piece_dim({0, 0}) == 1);
    CHECK(m.piece_dim({1, 0}) == 1);
    CHECK(m.piece_dim({1, 1}) == 1);
    CHECK(m.piece_dim({2, 0}) == 1);
    CHECK(m.support().size() == 4);
    CHECK(m.lowest_h0() == -2);
}

TEST_CASE("character examples") {
    CHECK(FusionModule({1}).character().to_string() == "1");
    CHECK(FusionModule({2}).character().to_string() == "1 + u");
    CHECK(FusionModule({2, 2}).character().to_string() == "1 + u + u*q + u^2");
}

TEST_CASE("characters agree with the naive ideal-side builder") {
    for (int n = 1; n <= 3; ++n)
        for (const auto& A : sorted_compositions(n, 3)) {
            CAPTURE(A.to_string());
            GradedCharacter naive = naive_character(A, A.top_degree() + 1);
            CHECK(FusionModule(A).character() == naive);
            CHECK(naive.total() == A.product());
        }
    Composition big{2, 3, 4};
    CHECK(FusionModule(big).character() == naive_character(big, big.top_degree() + 1));
}

TEST_CASE("N_A and generators") {
    Composition A{2, 2};
    CHECK(A.N(1) == 0);
    CHECK(A.N(2) == 2);
    CHECK(A.top_degree() == 2);
    // coefficient of z^2 in (e_0 z + e_1)^2
    CHECK(power_coefficient(2, 2, 2) == Polynomial::monomial(Monomial({2, 0})));
    CHECK(power_coefficient(2, 2, 1) == Polynomial::monomial(Monomial({1, 1}), 2));
}

TEST_CASE("cyclic span examples") {
    FusionModule M({2, 3, 4});
    CHECK(cyclic_span(M, {}, {M.cyclic_vector()}).dim() == 1);
    CHECK(cyclic_span(M, M.e_operators(), {M.cyclic_vector()}).dim() == 24);
    std::vector<Operator> upper{M.e(1), M.e(2)};
    Subspace d = cyclic_span(M, upper, {M.cyclic_vector()});
    CHECK(d.dim() == 6);
    CHECK(d.character().sheared(-1) == FusionModule({2, 3}).character());
}

TEST_CASE("tensor of one-dimensional modules") {
    auto one = std::make_shared<const FusionModule>(Composition{1, 1});
    TensorModule T({one, one});
    CHECK(T.total_dim() == 1);
    auto two = std::make_shared<const FusionModule>(Composition{2, 3});
    TensorModule U({two, two});
    CHECK(U.total_dim() == 36);
    CHECK(U.character() == two->character() * two->character());
}

TEST_CASE("structural checks on a small grid") {
    for (int n = 1; n <= 3; ++n)
        for (const auto& A : sorted_compositions(n, 4)) {
            CAPTURE(A.to_string());
            CHECK(verify_e0_nilpotency(A).ok);
            if (n >= 2) CHECK(verify_demazure(A).ok);
            CHECK(verify_deletion_of_ones(A).ok);
        }
    CHECK(tensor_target({2, 3}, {2}) == Composition{2, 4});
    CHECK(verify_tensor_embedding({2, 3}, {2, 2}).ok);
    CHECK(verify_tensor_embedding({1, 3, 3}, {2}).ok);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(require_valid({2, 1}), UsageError);
    CHECK_THROWS_AS(require_valid({0, 1}), UsageError);
    CHECK_THROWS_AS(parse_composition("2,x"), UsageError);
    CHECK(parse_composition("2,3,4") == Composition{2, 3, 4});
    CHECK(sorted_compositions(4, 5).size() == 70);
    CHECK(Composition{2, 3}.padded(4) == Composition{1, 1, 2, 3});
}

TEST_CASE("serialization round trip and disk cache") {
    FusionModule M({2, 3, 3});
    auto back = FusionModule::deserialize(M.serialize());
    CHECK(back->character() == M.character());
    CHECK(back->serialize() == M.serialize());

    auto dir = std::filesystem::temp_directory_path() / "fusion-test-cache";
    std::filesystem::remove_all(dir);
    {
        ModuleRegistry reg(dir);
        CHECK(reg.get({2, 4})->total_dim() == 8);
        CHECK(reg.builds() == 1);
    }
    ModuleRegistry reg(dir);
    CHECK(reg.get({2, 4})->character() == FusionModule({2, 4}).character());
    CHECK(reg.disk_hits() == 1);
    CHECK(reg.builds() == 0);
    CHECK(ModuleRegistry::cache_key({2, 4}) != ModuleRegistry::cache_key({4, 2}));

    // a record with another format version is rebuilt, never read
    auto file = dir / (ModuleRegistry::cache_key({3}) + ".fm");
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(file);
        os << "fusion-module 2\nA 3\n";
    }
    ModuleRegistry fresh(dir);
    CHECK(fresh.get({3})->total_dim() == 3);
    std::filesystem::remove_all(dir);
}

}
