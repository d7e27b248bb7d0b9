#include "fusion/linalg.hpp"

#include "fusion/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fusion {

Scalar parse_scalar(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw UsageError("empty rational literal");
    Scalar x;
    if (x.set_str(s, 10) != 0) throw UsageError("bad rational literal: " + s);
    if (x.get_den() == 0) throw UsageError("zero denominator: " + s);
    x.canonicalize();
    return x;
}

std::string to_string(const Scalar& x) { return x.get_str(); }

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return sgn(x) == 0; });
}

Monomial Monomial::variable(int n, int j) {
    Monomial m = one(n);
    m.exps[static_cast<std::size_t>(j)] = 1;
    return m;
}

int Monomial::degree() const { return std::accumulate(exps.begin(), exps.end(), 0); }

int Monomial::weight() const {
    int w = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) w += static_cast<int>(i) * exps[i];
    return w;
}

Monomial Monomial::operator*(const Monomial& other) const {
    if (other.exps.size() != exps.size()) throw UsageError("variable count mismatch in monomial product");
    Monomial r(exps);
    for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += other.exps[i];
    return r;
}

int Monomial::last_variable() const {
    for (int j = nvars() - 1; j >= 0; --j)
        if (exps[static_cast<std::size_t>(j)] > 0) return j;
    return -1;
}

std::string Monomial::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] == 0) continue;
        if (!first) out << '*';
        first = false;
        out << 'e' << i;
        if (exps[i] > 1) out << '^' << exps[i];
    }
    if (first) out << '1';
    return out.str();
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.exps > b.exps;
}

namespace {

void enumerate_rec(int n, int var, int k, int s, std::vector<int>& cur, std::vector<Monomial>& out) {
    if (var == n - 1) {
        // Remaining k copies of e_{n-1} must carry weight exactly s.
        if (static_cast<long>(k) * (n - 1) == s) {
            cur[static_cast<std::size_t>(var)] = k;
            out.emplace_back(cur);
            cur[static_cast<std::size_t>(var)] = 0;
        }
        return;
    }
    // Largest exponents first gives lex-descending order.
    for (int c = k; c >= 0; --c) {
        int rest_k = k - c;
        int rest_s = s - c * var;
        if (rest_s < 0) continue;
        // Remaining variables have subscripts var+1..n-1.
        if (rest_s < rest_k * (var + 1) || rest_s > rest_k * (n - 1)) continue;
        cur[static_cast<std::size_t>(var)] = c;
        enumerate_rec(n, var + 1, rest_k, rest_s, cur, out);
        cur[static_cast<std::size_t>(var)] = 0;
    }
}

}  // namespace

std::vector<Monomial> enumerate_monomials(int n, int k, int s) {
    if (n < 1 || k < 0 || s < 0) throw UsageError("enumerate_monomials: bad arguments");
    std::vector<Monomial> out;
    if (s > (n - 1) * k) return out;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    enumerate_rec(n, 0, k, s, cur, out);
    return out;
}

Polynomial Polynomial::constant(int n, const Scalar& c) {
    Polynomial p(n);
    p.add_term(Monomial::one(n), c);
    return p;
}

Polynomial Polynomial::variable(int n, int j) {
    Polynomial p(n);
    p.add_term(Monomial::variable(n, j), 1);
    return p;
}

Polynomial Polynomial::monomial(const Monomial& m, const Scalar& c) {
    Polynomial p(m.nvars());
    p.add_term(m, c);
    return p;
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
    if (m.nvars() != n_) throw UsageError("variable count mismatch in polynomial");
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Scalar& c) {
    if (sgn(c) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.n_ != b.n_) throw UsageError("variable count mismatch in polynomial product");
    Polynomial r(a.n_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial Polynomial::pow(int e) const {
    Polynomial r = constant(n_, 1);
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

std::optional<std::pair<int, int>> Polynomial::bidegree() const {
    std::optional<std::pair<int, int>> bd;
    for (const auto& [m, c] : terms_) {
        std::pair<int, int> here{m.degree(), m.weight()};
        if (bd && *bd != here) return std::nullopt;
        bd = here;
    }
    return bd;
}

Polynomial Polynomial::shift_indices(int offset, int target_n) const {
    Polynomial r(target_n);
    for (const auto& [m, c] : terms_) {
        std::vector<int> e(static_cast<std::size_t>(target_n), 0);
        for (int i = 0; i < m.nvars(); ++i) {
            int exp = m.exps[static_cast<std::size_t>(i)];
            if (exp == 0) continue;
            int j = i + offset;
            if (j < 0 || j >= target_n) throw UsageError("shift_indices: index out of range");
            e[static_cast<std::size_t>(j)] = exp;
        }
        r.add_term(Monomial(std::move(e)), c);
    }
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Scalar mag = abs(c);
        if (first) {
            if (sgn(c) < 0) out << '-';
        } else {
            out << (sgn(c) < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = mag == 1;
        bool constant = m.degree() == 0;
        if (!unit || constant) out << mag.get_str();
        if (!constant) {
            if (!unit) out << '*';
            out << m.to_string();
        }
    }
    return out.str();
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw UsageError("from_rows: ragged input");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

Vec Matrix::row_vec(std::size_t r) const {
    auto s = row(r);
    return Vec(s.begin(), s.end());
}

Vec Matrix::column(std::size_t c) const {
    Vec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

Vec Matrix::apply(const Vec& x) const {
    if (x.size() != cols_) throw UsageError("matrix-vector size mismatch");
    Vec y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (sgn(x[c]) != 0 && sgn((*this)(r, c)) != 0) y[r] += (*this)(r, c) * x[c];
    return y;
}

Matrix Matrix::operator*(const Matrix& other) const {
    if (cols_ != other.rows_) throw UsageError("matrix product size mismatch");
    Matrix p(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& a = (*this)(i, k);
            if (sgn(a) == 0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j)
                if (sgn(other(k, j)) != 0) p(i, j) += a * other(k, j);
        }
    return p;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

RrefResult rref(const Matrix& m) {
    RrefResult res;
    res.reduced = m;
    Matrix& a = res.reduced;
    std::size_t lead_row = 0;
    for (std::size_t col = 0; col < a.cols() && lead_row < a.rows(); ++col) {
        std::size_t pr = lead_row;
        while (pr < a.rows() && sgn(a(pr, col)) == 0) ++pr;
        if (pr == a.rows()) continue;
        if (pr != lead_row)
            for (std::size_t c = 0; c < a.cols(); ++c) swap(a(pr, c), a(lead_row, c));
        Scalar inv = 1 / a(lead_row, col);
        for (std::size_t c = col; c < a.cols(); ++c) a(lead_row, c) *= inv;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == lead_row || sgn(a(r, col)) == 0) continue;
            Scalar f = a(r, col);
            for (std::size_t c = col; c < a.cols(); ++c)
                if (sgn(a(lead_row, c)) != 0) a(r, c) -= f * a(lead_row, c);
        }
        res.pivots.push_back(col);
        ++lead_row;
    }
    res.rank = res.pivots.size();
    return res;
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

std::vector<Vec> kernel_basis(const Matrix& m) {
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : r.pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

Scalar determinant(Matrix a) {
    if (a.rows() != a.cols()) throw UsageError("determinant of non-square matrix");
    std::size_t n = a.rows();
    Scalar det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pr = col;
        while (pr < n && sgn(a(pr, col)) == 0) ++pr;
        if (pr == n) return 0;
        if (pr != col) {
            for (std::size_t c = 0; c < n; ++c) swap(a(pr, c), a(col, c));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (sgn(a(r, col)) == 0) continue;
            Scalar f = a(r, col) / a(col, col);
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

Vec RowSpace::reduce(Vec v) const {
    if (v.size() != dim_) throw UsageError("RowSpace: dimension mismatch");
    for (const auto& [p, row] : rows_) {
        if (sgn(v[p]) == 0) continue;
        Scalar f = v[p];
        for (std::size_t c = p; c < dim_; ++c)
            if (sgn(row[c]) != 0) v[c] -= f * row[c];
    }
    return v;
}

bool RowSpace::insert(Vec v) {
    v = reduce(std::move(v));
    std::size_t p = 0;
    while (p < dim_ && sgn(v[p]) == 0) ++p;
    if (p == dim_) return false;
    Scalar inv = 1 / v[p];
    for (std::size_t c = p; c < dim_; ++c) v[c] *= inv;
    for (auto& [q, row] : rows_) {
        if (sgn(row[p]) == 0) continue;
        Scalar f = row[p];
        for (std::size_t c = p; c < dim_; ++c)
            if (sgn(v[c]) != 0) row[c] -= f * v[c];
    }
    rows_.emplace(p, std::move(v));
    return true;
}

std::optional<Vec> RowSpace::coordinates(const Vec& v) const {
    if (!contains(v)) return std::nullopt;
    Vec coords;
    coords.reserve(rows_.size());
    for (const auto& [p, row] : rows_) coords.push_back(v[p]);
    return coords;
}

std::vector<Vec> RowSpace::basis() const {
    std::vector<Vec> out;
    out.reserve(rows_.size());
    for (const auto& [p, row] : rows_) out.push_back(row);
    return out;
}

std::vector<std::size_t> RowSpace::pivots() const {
    std::vector<std::size_t> out;
    for (const auto& [p, row] : rows_) out.push_back(p);
    return out;
}

std::vector<std::size_t> RowSpace::free_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < dim_; ++c)
        if (!rows_.count(c)) out.push_back(c);
    return out;
}

bool RowSpace::operator==(const RowSpace& other) const {
    return dim_ == other.dim_ && rows_ == other.rows_;
}

}  // namespace fusion
