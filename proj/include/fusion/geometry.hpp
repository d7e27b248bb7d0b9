#pragma once

// Coordinates on the two big cells of the Schubert variety: series
// inversion, polynomial vector fields, the transition matrix of the
// fiberwise tangent bundle over P^1 and its splitting, and the H^0
// dimension recursion.

#include "fusion/check.hpp"
#include "fusion/composition.hpp"
#include "fusion/linalg.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fusion {

// Element of Q[t]/t^n, coefficients of t^0..t^{n-1}.
struct TruncatedSeries {
    std::vector<Scalar> coeffs;

    TruncatedSeries() = default;
    explicit TruncatedSeries(std::vector<Scalar> c) : coeffs(std::move(c)) {}
    int n() const { return static_cast<int>(coeffs.size()); }
    TruncatedSeries operator*(const TruncatedSeries& other) const;
    bool operator==(const TruncatedSeries&) const = default;
    std::string to_string() const;
};

// y with x y = 1 mod t^n; UsageError if x_0 = 0.
TruncatedSeries invert_series(const TruncatedSeries& x);

// Polynomial in x_0..x_{n-1}, Laurent in x_0.
class CellPoly {
public:
    using Exps = std::vector<int>;

    explicit CellPoly(int n = 0) : n_(n) {}
    static CellPoly constant(int n, const Scalar& c);
    static CellPoly variable(int n, int j);
    static CellPoly monomial(Exps e, const Scalar& c = 1);

    int nvars() const { return n_; }
    const std::map<Exps, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exps& e, const Scalar& c);
    CellPoly& operator+=(const CellPoly& o);
    CellPoly& operator-=(const CellPoly& o);
    CellPoly& operator*=(const Scalar& c);
    friend CellPoly operator+(CellPoly a, const CellPoly& b) { return a += b; }
    friend CellPoly operator-(CellPoly a, const CellPoly& b) { return a -= b; }
    friend CellPoly operator*(CellPoly a, const Scalar& c) { return a *= c; }
    friend CellPoly operator*(const CellPoly& a, const CellPoly& b);

    CellPoly derivative(int j) const;
    // Exact value; UsageError if x_0 = 0 meets a negative power.
    Scalar eval(const std::vector<Scalar>& x) const;
    // Substitutes x_j -> images[j]; images[0] must be a single term when a
    // negative power of x_0 occurs.
    CellPoly substitute(const std::vector<CellPoly>& images) const;
    std::string to_string(const std::string& var = "x") const;

    bool operator==(const CellPoly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

private:
    int n_;
    std::map<Exps, Scalar> terms_;
};

// sum_j comps[j] d/dx_j.
struct PolyVectorField {
    int n = 0;
    std::string name;
    std::vector<CellPoly> comps;

    static PolyVectorField zero(int n, std::string name = "0");
    bool is_zero() const;
    PolyVectorField& operator+=(const PolyVectorField& o);
    PolyVectorField& operator-=(const PolyVectorField& o);
    friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
    friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
    friend PolyVectorField operator*(const Scalar& c, PolyVectorField v);
    friend PolyVectorField operator*(const CellPoly& f, PolyVectorField v);
    std::vector<Scalar> eval(const std::vector<Scalar>& x) const;
    std::string to_string(const std::string& var = "x") const;
};

PolyVectorField bracket(const PolyVectorField& V, const PolyVectorField& W);

struct StandardFields {
    int n = 0;
    std::vector<PolyVectorField> e, h, f;  // i = 0..n-1
    std::vector<PolyVectorField> L;        // i = 0..n-2
    // e_0.., h_0.., f_0.., L_0.. in that order.
    std::vector<PolyVectorField> all() const;
};

StandardFields standard_fields(int n);

// Fields tangent to the fibres of the projection to P^1, in n variables.
// kind is one of 'e', 'h', 'f', 'L'. Indices outside 1..n-1 (1..n-2 for L)
// give the zero field, except e'_0 = d/dx_0.
PolyVectorField primed_field(char kind, int i, int n);

// Independence, bracket closure with integral structure constants, and the
// sl2 (x) C[t]/t^n and L relations.
Check verify_vect_algebra(int n);

// Exact pushforward of a tangent vector at x under x -> x^{-1}.
std::vector<Scalar> pushforward_at(const std::vector<Scalar>& x, const std::vector<Scalar>& v);

struct SampleConfig {
    int samples = 20;
    std::uint64_t seed = 1;
};

// Random rational point with x_0 != 0.
std::vector<Scalar> random_point(int n, std::uint64_t seed, int index);

// Coordinate change identities between the two cells, at random points.
Check pushforward_check(int n, const SampleConfig& cfg = {});

// det d(x^{-1})/dx = (-1)^n x_0^{-2n} at random points.
Check jacobian_identity(int n, const SampleConfig& cfg = {});
// The Jacobian determinant at one point; UsageError if x_0 = 0.
Scalar jacobian_determinant(const std::vector<Scalar>& x);

// Laurent polynomial in y_0.
class LaurentPoly {
public:
    LaurentPoly() = default;
    static LaurentPoly monomial(int d, const Scalar& c = 1);
    const std::map<int, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    int low() const { return terms_.begin()->first; }
    int high() const { return terms_.rbegin()->first; }
    Scalar coeff(int d) const;

    void add_term(int d, const Scalar& c);
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    // Exact quotient; IntegrityError if b does not divide a.
    friend LaurentPoly divide_exact(const LaurentPoly& a, const LaurentPoly& b);
    std::string to_string() const;
    bool operator==(const LaurentPoly&) const = default;

private:
    std::map<int, Scalar> terms_;
};

class LaurentMatrix {
public:
    LaurentMatrix() = default;
    explicit LaurentMatrix(std::size_t n) : n_(n), data_(n * n) {}
    static LaurentMatrix diagonal(const std::vector<int>& exps);

    std::size_t size() const { return n_; }
    LaurentPoly& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    const LaurentPoly& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
    LaurentMatrix operator*(const LaurentMatrix& o) const;
    bool operator==(const LaurentMatrix& o) const { return n_ == o.n_ && data_ == o.data_; }

    LaurentPoly determinant() const;
    std::string to_string() const;

    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;

private:
    std::size_t n_ = 0;
    std::vector<LaurentPoly> data_;
};

// Transition matrix of E_n: column c holds the coefficients of the x-chart
// field c in the y-chart basis. Order e'_1.., h'_1.., L'_1.., f'_1..; size 4n-5.
// Derived by exact symbolic pushforward.
LaurentMatrix transition_matrix_En(int n);
// The displayed table, read with its ellipses continued diagonally.
LaurentMatrix displayed_transition_En(int n);
// Labels of the basis in the order above.
std::vector<std::string> fibre_basis_labels(int n);

// Entrywise comparison of the derived and displayed matrices.
Check verify_transition(int n);

struct SplittingResult {
    std::vector<int> exponents;  // descending
    int steps = 0;
    bool terminated = false;
    int det_degree = 0;
};

// Row operations over Q[y_0] until the leading-coefficient matrix of the
// rows is invertible; the remaining factor is then certified to lie in
// GL(Q[y_0^{-1}]), which the column operations remove.
SplittingResult splitting_type(const LaurentMatrix& M, int step_bound = 10000);

// dim of { a in Q[1/y0]^r of degree <= bound : y0^twist M a is polynomial in y0 },
// i.e. dim H^0 of the twisted bundle once bound is large enough.
long long section_dimension(const LaurentMatrix& M, int twist, int bound);

// splitting_type(E_n) against {2, 1^{n-1}, 0^{2n-5}, -1^{n-1}, -2} ({2,0,-2} for n = 2).
Check verify_splitting(int n);
std::vector<int> expected_splitting(int n);

struct CohomologyStep {
    std::vector<int> state;
    std::string rule;  // "R1", "R2" or "base"
    long long added = 0;
};

struct CohomologyResult {
    long long value = 0;
    std::vector<CohomologyStep> chain;
};

// d(a) by the decrement/swap recursion; IntegrityError if it gets stuck.
CohomologyResult cohomology_dim(const std::vector<int>& a);
Check verify_cohomology(const std::vector<int>& a);

struct BundleLabel {
    std::vector<int> c;  // (b_{n-1}, b_{n-2} - b_{n-1}, ..., b_0 - b_1)
    std::vector<int> b;  // restriction degrees b_0..b_{n-1}
};

BundleLabel pullback_degree(const Composition& A);
// dim H^0 of the pullback of O(1) against prod a_i.
Check verify_pullback(const Composition& A);

}  // namespace fusion
