#pragma once

// Exact rational arithmetic, sparse polynomials in e_0..e_{n-1} and
// deterministic row reduction.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fusion {

using Scalar = mpq_class;
using Vec = std::vector<Scalar>;

Scalar parse_scalar(std::string_view text);
std::string to_string(const Scalar& x);

bool is_zero(const Vec& v);

// Monomial e_0^{exps[0]} ... e_{n-1}^{exps[n-1]}.
struct Monomial {
    std::vector<int> exps;

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exps(std::move(e)) {}
    static Monomial one(int n) { return Monomial(std::vector<int>(static_cast<std::size_t>(n), 0)); }
    static Monomial variable(int n, int j);

    int nvars() const { return static_cast<int>(exps.size()); }
    int degree() const;
    // Sum of subscripts, the t-weight.
    int weight() const;
    Monomial operator*(const Monomial& other) const;
    // Largest index j with exps[j] > 0, or -1 for the constant monomial.
    int last_variable() const;
    std::string to_string() const;

    bool operator==(const Monomial&) const = default;
};

// Global order: degree ascending, then exponent vectors lexicographically
// descending with e_0 most significant. Within a bidegree this lists
// e_0-heavy monomials first.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

// All monomials in n variables with degree k and weight s, in MonomialOrder.
std::vector<Monomial> enumerate_monomials(int n, int k, int s);

class Polynomial {
public:
    using Terms = std::map<Monomial, Scalar, MonomialOrder>;

    explicit Polynomial(int n = 0) : n_(n) {}
    static Polynomial constant(int n, const Scalar& c);
    static Polynomial variable(int n, int j);
    static Polynomial monomial(const Monomial& m, const Scalar& c = 1);

    int nvars() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Monomial& m, const Scalar& c);
    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Scalar& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Scalar& c) { return a *= c; }
    Polynomial pow(int e) const;

    // Bidegree (k, s) shared by every term, if any.
    std::optional<std::pair<int, int>> bidegree() const;
    // Substitutes e_i -> e_{i+offset} into a ring with target_n variables.
    Polynomial shift_indices(int offset, int target_n) const;
    std::string to_string() const;

    bool operator==(const Polynomial& other) const { return n_ == other.n_ && terms_ == other.terms_; }

private:
    int n_;
    Terms terms_;
};

// Dense row-major matrix over the rationals. Columns may carry monomial labels.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    Vec row_vec(std::size_t r) const;
    Vec column(std::size_t c) const;

    Vec apply(const Vec& x) const;
    Matrix operator*(const Matrix& other) const;
    Matrix transpose() const;
    bool operator==(const Matrix& other) const = default;

    std::vector<Monomial> column_labels;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

struct RrefResult {
    std::size_t rank = 0;
    Matrix reduced;
    std::vector<std::size_t> pivots;
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);
std::vector<Vec> kernel_basis(const Matrix& m);
Scalar determinant(Matrix m);

// Incrementally maintained reduced row-echelon basis of a subspace of Q^dim.
// Rows stay fully reduced, so the basis is canonical for the subspace.
class RowSpace {
public:
    explicit RowSpace(std::size_t dim = 0) : dim_(dim) {}

    std::size_t ambient_dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    bool full() const { return rows_.size() == dim_; }

    // Reduces v against the basis; true if v was independent and got added.
    bool insert(Vec v);
    // v minus its projection onto pivot coordinates; zero iff v is in the span.
    Vec reduce(Vec v) const;
    bool contains(const Vec& v) const { return is_zero(reduce(v)); }
    // Coordinates of v in the basis() rows; nullopt if v is not in the span.
    std::optional<Vec> coordinates(const Vec& v) const;

    // Basis rows sorted by pivot column.
    std::vector<Vec> basis() const;
    std::vector<std::size_t> pivots() const;
    // Columns that are not pivots, ascending.
    std::vector<std::size_t> free_columns() const;

    bool operator==(const RowSpace& other) const;

private:
    std::size_t dim_;
    std::map<std::size_t, Vec> rows_;  // pivot column -> row with 1 at pivot
};

}  // namespace fusion
