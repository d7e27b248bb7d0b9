#include "fusion/errors.hpp"
#include "fusion/geometry.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace fusion;

namespace {

TruncatedSeries series(std::vector<Scalar> c) { return TruncatedSeries(std::move(c)); }

Scalar frac(int num, int den) {
    Scalar x(num, den);
    x.canonicalize();
    return x;
}

// Derivative of x -> x^{-1} applied to v, written from d(1/x) = -dx / x^2.
std::vector<Scalar> push_oracle(const std::vector<Scalar>& x, const std::vector<Scalar>& v) {
    std::size_t n = x.size();
    std::vector<Scalar> y(n);
    y[0] = 1 / x[0];
    for (std::size_t k = 1; k < n; ++k) {
        Scalar acc = 0;
        for (std::size_t j = 1; j <= k; ++j) acc += x[j] * y[k - j];
        y[k] = -acc / x[0];
    }
    std::vector<Scalar> y2(n), w(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; a + b < n; ++b) y2[a + b] += y[a] * y[b];
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; a + b < n; ++b) w[a + b] -= y2[a] * v[b];
    return w;
}

// dim of sections of the twisted bundle: vectors a of polynomials in 1/y0 of
// degree <= bound such that y0^twist M a has no negative powers of y0.
long long h0_oracle(const LaurentMatrix& M, int twist, int bound) {
    std::size_t r = M.size();
    std::size_t unknowns = r * static_cast<std::size_t>(bound + 1);
    std::map<std::pair<std::size_t, int>, Vec> rows;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (const auto& [p, c] : M(i, j).terms())
                for (int d = 0; d <= bound; ++d) {
                    int power = twist + p - d;
                    if (power >= 0) continue;
                    auto& row = rows[{i, power}];
                    if (row.empty()) row.resize(unknowns);
                    row[j * static_cast<std::size_t>(bound + 1) + static_cast<std::size_t>(d)] += c;
                }
    std::vector<Vec> list;
    for (auto& [key, row] : rows) list.push_back(row);
    std::size_t rk = list.empty() ? 0 : rank(Matrix::from_rows(list, unknowns));
    return static_cast<long long>(unknowns - rk);
}

long long h0_of_splitting(const std::vector<int>& d, int twist) {
    long long s = 0;
    for (int x : d) s += std::max(0, x + twist + 1);
    return s;
}

LaurentMatrix elementary(std::size_t n, std::size_t i, std::size_t j, int power, const Scalar& c) {
    LaurentMatrix E = LaurentMatrix::diagonal(std::vector<int>(n, 0));
    E(i, j) = E(i, j) + LaurentPoly::monomial(power, c);
    return E;
}

std::vector<std::string> rows_of(const LaurentMatrix& M) {
    std::vector<std::string> out;
    std::string text = M.to_string();
    std::size_t start = 0;
    for (std::size_t p; (p = text.find('\n', start)) != std::string::npos; start = p + 1)
        out.push_back(text.substr(start, p - start));
    return out;
}

}  // namespace

TEST_SUITE("schubert-geometry") {

TEST_CASE("series inversion examples") {
    CHECK(invert_series(series({1})) == series({1}));
    CHECK(invert_series(series({1, 1, 0})) == series({1, -1, 1}));
    CHECK(invert_series(series({2, 0})) == series({Scalar(1, 2), 0}));
    CHECK_THROWS_AS(invert_series(series({0, 1})), UsageError);
}

TEST_CASE("series inversion is an involution and a true inverse") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5), len(1, 7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Scalar> c(static_cast<std::size_t>(len(rng)));
        for (auto& x : c) x = frac(num(rng), den(rng));
        if (c[0] == 0) c[0] = 1;
        TruncatedSeries x = series(c);
        TruncatedSeries y = invert_series(x);
        CHECK(invert_series(y) == x);
        std::vector<Scalar> one(c.size());
        one[0] = 1;
        CHECK(x * y == series(one));
    }
}

TEST_CASE("standard fields and brackets") {
    auto s1 = standard_fields(1);
    CHECK(s1.all().size() == 3);
    CHECK(bracket(s1.e[0], s1.f[0]).comps == s1.h[0].comps);

    auto s3 = standard_fields(3);
    CHECK(s3.all().size() == 11);
    // [L_1, e_1] = -e_2
    CHECK(bracket(s3.L[1], s3.e[1]).comps == (Scalar(-1) * s3.e[2]).comps);
    // [L_1, L_1] = 0 and [e_0, e_2] = 0
    CHECK(bracket(s3.L[1], s3.L[1]).is_zero());
    CHECK(bracket(s3.e[0], s3.e[2]).is_zero());
}

TEST_CASE("vector field algebra closes for n = 1..6") {
    for (int n = 1; n <= 6; ++n) {
        CAPTURE(n);
        Check c = verify_vect_algebra(n);
        CHECK(c.ok);
        CHECK(c.got["dim"] == 4 * n - 1);
        CHECK(c.got["non_integral"] == 0);
    }
}

TEST_CASE("pushforward agrees with the test oracle") {
    for (int n = 1; n <= 5; ++n)
        for (int t = 0; t < 5; ++t) {
            auto x = random_point(n, 3, t);
            auto v = random_point(n, 4, t);
            CHECK(pushforward_at(x, v) == push_oracle(x, v));
        }
}

TEST_CASE("chart identity for f'_1 at n = 2") {
    std::vector<Scalar> x{2, 3};
    auto y = invert_series(series(x)).coeffs;
    CHECK(y == std::vector<Scalar>{Scalar(1, 2), Scalar(-3, 4)});
    PolyVectorField f1 = primed_field('f', 1, 2);
    auto lhs = push_oracle(x, f1.eval(x));
    auto rhs = f1.eval(y);
    for (auto& r : rhs) r *= -1 / (y[0] * y[0]);
    CHECK(lhs == rhs);
}

TEST_CASE("chart identities hold at sampled points") {
    for (int n = 2; n <= 5; ++n) {
        CAPTURE(n);
        CHECK(pushforward_check(n, {10, 5}).ok);
    }
}

TEST_CASE("jacobian determinant") {
    CHECK(jacobian_determinant({1, 1}) == 1);
    CHECK_THROWS_AS(jacobian_determinant({0, 1}), UsageError);
    for (int n = 1; n <= 6; ++n) {
        CHECK(jacobian_identity(n).ok);
        for (int t = 0; t < 5; ++t) {
            auto x = random_point(n, 9, t);
            // columns of the Jacobian are the images of the unit vectors
            Matrix J(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                std::vector<Scalar> unit(static_cast<std::size_t>(n));
                unit[static_cast<std::size_t>(j)] = 1;
                auto col = push_oracle(x, unit);
                for (int i = 0; i < n; ++i) J(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = col[static_cast<std::size_t>(i)];
            }
            Scalar want = 1;
            for (int k = 0; k < 2 * n; ++k) want /= x[0];
            if (n % 2) want = -want;
            CHECK(determinant(J) == want);
            CHECK(jacobian_determinant(x) == want);
        }
    }
}

TEST_CASE("golden E_3 transition matrix") {
    LaurentMatrix M = transition_matrix_En(3);
    std::vector<std::string> want{
        "e'1: -y0^2 | 0 | 0 | 0 | 0 | 0 | 0",
        "e'2: 0 | -y0^2 | 0 | 0 | 0 | 0 | 0",
        "h'1: 0 | 0 | 1 | 0 | 0 | 0 | 0",
        "h'2: y0 | 0 | 0 | 1 | 0 | 0 | 0",
        "L'1: 0 | 0 | 0 | 0 | 1 | 0 | 0",
        "f'1: 0 | 0 | 0 | 0 | 0 | -y0^-2 | 0",
        "f'2: 0 | 0 | 2*y0^-1 | 0 | y0^-1 | 0 | -y0^-2",
    };
    CHECK(rows_of(M) == want);
    CHECK(M.determinant() == LaurentPoly::monomial(0, 1));

    LaurentMatrix T = displayed_transition_En(3);
    std::size_t differ = 0;
    for (std::size_t r = 0; r < 7; ++r)
        for (std::size_t c = 0; c < 7; ++c)
            if (!(M(r, c) == T(r, c))) {
                ++differ;
                CHECK(r == 6);
                CHECK(c == 2);
                CHECK(T(r, c) == LaurentPoly::monomial(-1, -2));
            }
    CHECK(differ == 1);
}

TEST_CASE("derived and displayed matrices differ only in the h' -> f' entries") {
    CHECK(verify_transition(2).ok);
    for (int n = 3; n <= 5; ++n) {
        Check c = verify_transition(n);
        CHECK_FALSE(c.ok);
        CHECK(c.got["mismatches"] == n - 2);
        CHECK(c.got["size"] == 4 * n - 5);
    }
}

TEST_CASE("splitting of diagonal and small cases") {
    auto d = splitting_type(LaurentMatrix::diagonal({2, 0, -2}));
    CHECK(d.terminated);
    CHECK(d.exponents == std::vector<int>{2, 0, -2});
    CHECK(splitting_type(transition_matrix_En(2)).exponents == std::vector<int>{2, 0, -2});
    CHECK(splitting_type(transition_matrix_En(3)).exponents == std::vector<int>{2, 1, 1, 0, -1, -1, -2});
    CHECK(verify_splitting(2).ok);
    CHECK(verify_splitting(3).ok);
}

TEST_CASE("splitting of E_4 and E_5 as computed") {
    // frozen from the symbolic derivation; independently confirmed by h0_oracle below
    CHECK(splitting_type(transition_matrix_En(4)).exponents == std::vector<int>{2, 1, 1, 0, 0, 0, 0, 0, -1, -1, -2});
    CHECK(splitting_type(transition_matrix_En(5)).exponents ==
          std::vector<int>{2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, -2});
    CHECK(expected_splitting(4) == std::vector<int>{2, 1, 1, 1, 0, 0, 0, -1, -1, -1, -2});
}

TEST_CASE("section counts confirm the computed splitting") {
    for (int n = 2; n <= 5; ++n) {
        CAPTURE(n);
        LaurentMatrix M = transition_matrix_En(n);
        auto s = splitting_type(M).exponents;
        for (int k = -3; k <= 1; ++k) {
            CAPTURE(k);
            long long oracle = h0_oracle(M, k, 6);
            CHECK(oracle == h0_of_splitting(s, k));
            CHECK(section_dimension(M, k, 6) == oracle);
        }
        CHECK(h0_oracle(M, 0, 6) == 4 * n - 4);
    }
    // the twist that separates the computed type from the stated one
    CHECK(h0_oracle(transition_matrix_En(4), -1, 6) == 4);
    CHECK(h0_of_splitting(expected_splitting(4), -1) == 5);
    CHECK(h0_oracle(transition_matrix_En(5), -1, 6) == 4);
    CHECK(h0_of_splitting(expected_splitting(5), -1) == 6);
    // the displayed table carries the same bundle
    CHECK(h0_oracle(displayed_transition_En(4), -1, 6) == 4);
}

TEST_CASE("splitting is recovered from random elementary disguises") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2), size(2, 6), expo(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = static_cast<std::size_t>(size(rng));
        std::vector<int> d(n);
        for (auto& x : d) x = expo(rng);
        LaurentMatrix M = LaurentMatrix::diagonal(d);
        std::uniform_int_distribution<std::size_t> pos(0, n - 1);
        for (int op = 0; op < 6; ++op) {
            std::size_t i = pos(rng), j = pos(rng);
            if (i == j) continue;
            Scalar c = coef(rng);
            if (c == 0) continue;
            // rows over Q[y0] on the left, columns over Q[1/y0] on the right
            if (op % 2 == 0)
                M = elementary(n, i, j, deg(rng), c) * M;
            else
                M = M * elementary(n, i, j, -deg(rng), c);
        }
        std::sort(d.rbegin(), d.rend());
        SplittingResult s = splitting_type(M);
        CAPTURE(M.to_string());
        CHECK(s.terminated);
        CHECK(s.exponents == d);
        CHECK(std::accumulate(s.exponents.begin(), s.exponents.end(), 0) == s.det_degree);
        CHECK(M.determinant().low() == s.det_degree);
    }
}

TEST_CASE("splitting rejects a non-monomial determinant") {
    LaurentMatrix M(1);
    M(0, 0) = LaurentPoly::monomial(0) + LaurentPoly::monomial(1);
    CHECK_THROWS_AS(splitting_type(M), UsageError);
}

TEST_CASE("step bound is reported, not hidden") {
    SplittingResult s = splitting_type(transition_matrix_En(4), 2);
    CHECK_FALSE(s.terminated);
    CHECK(s.steps == 2);
    CHECK(s.exponents.empty());
    CHECK(splitting_type(LaurentMatrix::diagonal({1, -1}), 0).terminated);
}

TEST_CASE("cohomology recursion examples") {
    CHECK(cohomology_dim({0, 0, 0}).value == 1);
    CHECK(cohomology_dim({}).value == 1);
    auto d11 = cohomology_dim({1, 1});
    CHECK(d11.value == 4);
    auto d234 = cohomology_dim({2, 3, 4});
    CHECK(d234.value == 60);
    REQUIRE(d234.chain.size() == 17);
    CHECK(d234.chain[0].rule == "R1");
    CHECK(d234.chain[0].added == 12);
    CHECK(d234.chain[1].state == std::vector<int>{2, 3, 3});
    CHECK(d234.chain.back().rule == "base");
    CHECK_THROWS_AS(cohomology_dim({2, 1}), UsageError);
    CHECK_THROWS_AS(cohomology_dim({-1, 0}), UsageError);
}

TEST_CASE("cohomology recursion equals the product on the grid") {
    for (int n = 1; n <= 4; ++n) {
        std::vector<int> a(static_cast<std::size_t>(n), 0);
        std::function<void(int, int)> rec = [&](int pos, int lo) {
            if (pos == n) {
                long long prod = 1;
                for (int x : a) prod *= x + 1;
                CHECK(cohomology_dim(a).value == prod);
                return;
            }
            for (int v = lo; v <= 4; ++v) {
                a[static_cast<std::size_t>(pos)] = v;
                rec(pos + 1, v);
            }
        };
        rec(0, 0);
    }
}

TEST_CASE("pullback labels") {
    auto l = pullback_degree({2, 3, 4});
    CHECK(l.c == std::vector<int>{1, 2, 3});
    CHECK(l.b == std::vector<int>{6, 3, 1});
    CHECK(pullback_degree({1, 1, 1}).c == std::vector<int>{0, 0, 0});
    CHECK(pullback_degree({2, 2}).c == std::vector<int>{1, 1});
    CHECK(verify_pullback({2, 3, 4}).ok);
    CHECK(verify_pullback({2, 2}).ok);
}

}
