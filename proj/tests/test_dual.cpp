#include "fusion/dual.hpp"
#include "fusion/registry.hpp"

#include <doctest.h>

using namespace fusion;

TEST_SUITE("dual-functional") {

TEST_CASE("dual space examples") {
    CHECK(dual_space({2, 2}, 0).dim() == 1);
    auto one = dual_space({2, 2}, 1);
    CHECK(one.dim() == 2);
    CHECK(one.dim(0) == 1);
    CHECK(one.dim(1) == 1);
    auto two = dual_space({2, 2}, 2);
    CHECK(two.dim() == 1);
    CHECK(two.dim(2) == 1);
    CHECK(dual_space({2, 2}, 3).dim() == 0);
}

TEST_CASE("oracle character examples") {
    CHECK(oracle_character({1}).to_string() == "1");
    CHECK(oracle_character({2, 2}).to_string() == "1 + u + u*q + u^2");
    GradedCharacter c = oracle_character({2, 3, 4});
    CHECK(c.total() == 24);
    CHECK(c == module_for({2, 3, 4})->character());
}

TEST_CASE("oracle equals the quotient over a grid") {
    for (int n = 1; n <= 3; ++n)
        for (const auto& A : sorted_compositions(n, 4)) {
            CAPTURE(A.to_string());
            CHECK(oracle_character(A) == module_for(A)->character());
        }
}

TEST_CASE("count vectors") {
    // exponents in {0,1,2}, 2 variables, sum 2: {0,2} and {1,1}
    auto cv = count_vectors(3, 2, 2);
    CHECK(cv.size() == 2);
    for (const auto& c : cv) {
        int s = 0, d = 0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            s += c[j];
            d += static_cast<int>(j) * c[j];
        }
        CHECK(s == 2);
        CHECK(d == 2);
    }
}

TEST_CASE("shuffle product on monomial symmetric functions") {
    SymPoly f{2, 1, {}}, g{2, 1, {}};
    f.add({1, 0}, 1);  // 1
    g.add({0, 1}, 1);  // z
    SymPoly h = shuffle_product(f, g);
    CHECK(h.s == 2);
    SymPoly want{2, 2, {}};
    want.add({1, 1}, 1);  // z_1 + z_2
    CHECK(h == want);

    SymPoly zz = shuffle_product(g, g);
    SymPoly want2{2, 2, {}};
    want2.add({0, 2}, 2);  // 2 z_1 z_2
    CHECK(zz == want2);
}

TEST_CASE("shuffle product is commutative and bilinear on dual basis elements") {
    std::vector<SymPoly> basis;
    for (int s = 0; s <= 2; ++s)
        for (const auto& [d, b] : dual_space({2, 2}, s).by_degree)
            for (const auto& f : b) basis.push_back(f);
    REQUIRE(basis.size() == 4);
    for (const auto& f : basis)
        for (const auto& g : basis) {
            CHECK(shuffle_product(f, g) == shuffle_product(g, f));
            // products of two elements of the (2,2) space meet the constraints of (3,3)
            SymPoly h = shuffle_product(f, g);
            if (!h.is_zero()) CHECK(satisfies_constraints(scaled({2, 2}, 2), h));
        }
    SymPoly sum = basis[1];
    for (const auto& [c, x] : basis[2].coeffs) sum.add(c, x * 3);
    SymPoly lhs = shuffle_product(sum, basis[1]);
    SymPoly rhs = shuffle_product(basis[1], basis[1]);
    for (const auto& [c, x] : shuffle_product(basis[2], basis[1]).coeffs) rhs.add(c, x * 3);
    CHECK(lhs == rhs);
}

TEST_CASE("coordinate ring components") {
    CHECK(scaled({2, 3}, 2) == Composition{3, 5});
    Check a = coordinate_ring_component({2, 2}, 1, false);
    CHECK(a.ok);
    CHECK(a.got["dim"] == 4);
    Check b = coordinate_ring_component({2, 2}, 2, true);
    CHECK(b.ok);
    CHECK(b.got["dim"] == 9);
    Check c = coordinate_ring_component({2, 3}, 2, true);
    CHECK(c.ok);
    CHECK(c.got["dim"] == 15);
}

}
