#include "fusion/dual.hpp"

#include "fusion/errors.hpp"

#include <functional>

namespace fusion {

namespace {

mpz_class factorial(int k) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    return f;
}

mpz_class binomial(int a, int b) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    return r;
}

int weight(const CountVector& c) {
    int w = 0;
    for (std::size_t j = 0; j < c.size(); ++j) w += static_cast<int>(j) * c[j];
    return w;
}

// Number of distinct orderings of the multiset c.
mpz_class arrangements(const CountVector& c) {
    int total = 0;
    for (int x : c) total += x;
    mpz_class r = factorial(total);
    for (int x : c) r /= factorial(x);
    return r;
}

// Visits every mu <= c (componentwise) with |mu| = size.
void for_each_sub(const CountVector& c, int size, const std::function<void(const CountVector&)>& f) {
    CountVector mu(c.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
        if (j == c.size()) {
            if (left == 0) f(mu);
            return;
        }
        for (int x = std::min(left, c[j]); x >= 0; --x) {
            mu[j] = x;
            rec(j + 1, left - x);
        }
        mu[j] = 0;
    };
    rec(0, size);
}

// Constraint rows for degree d, keyed by (i, nu), over the columns `basis`.
std::map<std::pair<int, CountVector>, Vec> constraint_rows(const Composition& A, const std::vector<CountVector>& basis,
                                                           int s) {
    std::map<std::pair<int, CountVector>, Vec> rows;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const CountVector& c = basis[col];
        for (int i = 1; i <= s; ++i) {
            int cut = A.N(i);
            if (cut == 0) continue;
            for_each_sub(c, i, [&](const CountVector& mu) {
                if (weight(mu) >= cut) return;
                CountVector nu(c.size());
                for (std::size_t j = 0; j < c.size(); ++j) nu[j] = c[j] - mu[j];
                auto [it, inserted] = rows.try_emplace({i, nu}, Vec(basis.size()));
                it->second[col] += Scalar(arrangements(mu));
            });
        }
    }
    return rows;
}

}  // namespace

void SymPoly::add(const CountVector& c, const Scalar& x) {
    if (sgn(x) == 0) return;
    auto [it, inserted] = coeffs.try_emplace(c, x);
    if (!inserted) {
        it->second += x;
        if (sgn(it->second) == 0) coeffs.erase(it);
    }
}

int SymPoly::degree() const {
    int d = -2;
    for (const auto& [c, x] : coeffs) {
        int w = weight(c);
        if (d == -2)
            d = w;
        else if (d != w)
            return -1;
    }
    return d == -2 ? 0 : d;
}

std::vector<CountVector> count_vectors(int n, int s, int d) {
    std::vector<CountVector> out;
    CountVector c(static_cast<std::size_t>(n), 0);
    std::function<void(int, int, int)> rec = [&](int j, int left, int wleft) {
        if (j == n - 1) {
            if (left * (n - 1) == wleft) {
                c[static_cast<std::size_t>(j)] = left;
                out.push_back(c);
                c[static_cast<std::size_t>(j)] = 0;
            }
            return;
        }
        for (int x = left; x >= 0; --x) {
            int wl = wleft - x * j;
            if (wl < 0) continue;
            c[static_cast<std::size_t>(j)] = x;
            rec(j + 1, left - x, wl);
        }
        c[static_cast<std::size_t>(j)] = 0;
    };
    if (s < 0 || d < 0 || d > s * (n - 1)) return out;
    rec(0, s, d);
    return out;
}

bool satisfies_constraints(const Composition& A, const SymPoly& f) {
    if (f.n != A.n()) throw UsageError("symmetric polynomial has the wrong degree bound");
    std::map<int, std::vector<CountVector>> cols_by_degree;
    for (const auto& [c, x] : f.coeffs) cols_by_degree[weight(c)].push_back(c);
    for (const auto& [d, cols] : cols_by_degree) {
        auto rows = constraint_rows(A, cols, f.s);
        for (const auto& [key, row] : rows) {
            Scalar acc;
            for (std::size_t t = 0; t < cols.size(); ++t) acc += row[t] * f.coeffs.at(cols[t]);
            if (sgn(acc) != 0) return false;
        }
    }
    return true;
}

std::size_t SymPolySpace::dim() const {
    std::size_t t = 0;
    for (const auto& [d, b] : by_degree) t += b.size();
    return t;
}

std::size_t SymPolySpace::dim(int d) const {
    auto it = by_degree.find(d);
    return it == by_degree.end() ? 0 : it->second.size();
}

SymPolySpace dual_space(const Composition& A, int s) {
    require_valid(A);
    if (A.n() == 0) throw UsageError("empty composition");
    SymPolySpace space;
    space.A = A;
    space.s = s;
    space.n = A.n();
    const int n = A.n();
    for (int d = 0; d <= s * (n - 1); ++d) {
        std::vector<CountVector> basis = count_vectors(n, s, d);
        if (basis.empty()) continue;
        auto rows = constraint_rows(A, basis, s);
        std::vector<Vec> sol;
        if (rows.empty()) {
            for (std::size_t c = 0; c < basis.size(); ++c) {
                Vec v(basis.size());
                v[c] = 1;
                sol.push_back(std::move(v));
            }
        } else {
            std::vector<Vec> rv;
            for (auto& [k, r] : rows) rv.push_back(std::move(r));
            sol = kernel_basis(Matrix::from_rows(rv, basis.size()));
        }
        for (const Vec& v : sol) {
            SymPoly f;
            f.n = n;
            f.s = s;
            for (std::size_t c = 0; c < v.size(); ++c) f.add(basis[c], v[c]);
            space.by_degree[d].push_back(std::move(f));
        }
    }
    return space;
}

GradedCharacter oracle_character(const Composition& A) {
    require_valid(A);
    GradedCharacter ch;
    const int n = A.n();
    for (int s = 0; s <= A.top_degree() + 1; ++s) {
        SymPolySpace sp = dual_space(A, s);
        for (const auto& [d, b] : sp.by_degree) ch.add({s, s * (n - 1) - d}, static_cast<long long>(b.size()));
    }
    return ch;
}

SymPoly shuffle_product(const SymPoly& f, const SymPoly& g) {
    if (f.n != g.n) throw UsageError("shuffle of polynomials with different degree bounds");
    SymPoly h;
    h.n = f.n;
    h.s = f.s + g.s;
    for (const auto& [a, x] : f.coeffs)
        for (const auto& [b, y] : g.coeffs) {
            CountVector c(a.size());
            mpz_class mult = 1;
            for (std::size_t j = 0; j < a.size(); ++j) {
                c[j] = a[j] + b[j];
                mult *= binomial(c[j], a[j]);
            }
            h.add(c, x * y * Scalar(mult));
        }
    return h;
}

Composition scaled(const Composition& A, int k) {
    if (k < 1) throw UsageError("scaled composition needs k >= 1");
    Composition B = A;
    for (int& x : B.a) x = k * x - k + 1;
    return B;
}

Check coordinate_ring_component(const Composition& A, int k, bool check_generation) {
    require_valid(A);
    Composition Ak = scaled(A, k);
    Check c;
    GradedCharacter ch = oracle_character(Ak);
    c.expected["dim"] = Ak.product();
    c.got["dim"] = ch.total();
    c.require(ch.total() == Ak.product(), "component dimension differs from prod (k a_i - k + 1)");
    if (!check_generation) return c;

    std::vector<SymPoly> degree_one;
    for (int s = 0; s <= A.top_degree(); ++s) {
        SymPolySpace sp = dual_space(A, s);
        for (auto& [d, b] : sp.by_degree)
            for (auto& f : b) degree_one.push_back(f);
    }
    // Products of k elements, unordered (the shuffle product is commutative).
    std::map<std::pair<int, int>, RowSpace> spans;  // (s, d) -> span
    std::size_t products = 0;
    bool closed = true;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    std::function<void(int, std::size_t)> rec = [&](int depth, std::size_t from) {
        if (depth == k) {
            SymPoly h = degree_one[idx[0]];
            for (int t = 1; t < k; ++t) h = shuffle_product(h, degree_one[idx[static_cast<std::size_t>(t)]]);
            ++products;
            if (h.is_zero()) return;
            if (!satisfies_constraints(Ak, h)) closed = false;
            int d = h.degree();
            auto basis = count_vectors(A.n(), h.s, d);
            Vec v(basis.size());
            for (std::size_t t = 0; t < basis.size(); ++t) {
                auto it = h.coeffs.find(basis[t]);
                if (it != h.coeffs.end()) v[t] = it->second;
            }
            auto [it, inserted] = spans.try_emplace({h.s, d}, RowSpace(basis.size()));
            it->second.insert(std::move(v));
            return;
        }
        for (std::size_t t = from; t < degree_one.size(); ++t) {
            idx[static_cast<std::size_t>(depth)] = t;
            rec(depth + 1, t);
        }
    };
    rec(0, 0);
    std::size_t rank = 0;
    for (const auto& [key, rs] : spans) rank += rs.rank();
    c.got["products"] = products;
    c.got["span_dim"] = rank;
    c.require(closed, "a shuffle product violates the constraints of A(k)");
    c.require(static_cast<long long>(rank) == Ak.product(), "shuffle products do not span the component");
    return c;
}

}  // namespace fusion
