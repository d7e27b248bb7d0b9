#include "fusion/geometry.hpp"

#include "fusion/errors.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace fusion {

// ---- truncated series ----

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& other) const {
    if (n() != other.n()) throw UsageError("series of different truncation orders");
    std::vector<Scalar> out(coeffs.size());
    for (int i = 0; i < n(); ++i)
        for (int j = 0; i + j < n(); ++j) out[static_cast<std::size_t>(i + j)] += coeffs[static_cast<std::size_t>(i)] * other.coeffs[static_cast<std::size_t>(j)];
    return TruncatedSeries(std::move(out));
}

std::string TruncatedSeries::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << fusion::to_string(coeffs[i]);
    os << "]";
    return os.str();
}

TruncatedSeries invert_series(const TruncatedSeries& x) {
    if (x.n() == 0) throw UsageError("empty series");
    if (sgn(x.coeffs[0]) == 0) throw UsageError("series with zero constant term is not invertible");
    std::vector<Scalar> y(x.coeffs.size());
    y[0] = 1 / x.coeffs[0];
    for (int k = 1; k < x.n(); ++k) {
        Scalar acc;
        for (int j = 1; j <= k; ++j) acc += x.coeffs[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k - j)];
        y[static_cast<std::size_t>(k)] = -acc * y[0];
    }
    return TruncatedSeries(std::move(y));
}

// ---- cell polynomials ----

CellPoly CellPoly::constant(int n, const Scalar& c) {
    CellPoly p(n);
    p.add_term(Exps(static_cast<std::size_t>(n), 0), c);
    return p;
}

CellPoly CellPoly::variable(int n, int j) {
    Exps e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(j)] = 1;
    return monomial(std::move(e));
}

CellPoly CellPoly::monomial(Exps e, const Scalar& c) {
    CellPoly p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
}

void CellPoly::add_term(const Exps& e, const Scalar& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

CellPoly& CellPoly::operator+=(const CellPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

CellPoly& CellPoly::operator-=(const CellPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

CellPoly& CellPoly::operator*=(const Scalar& c) {
    if (sgn(c) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, x] : terms_) x *= c;
    return *this;
}

CellPoly operator*(const CellPoly& a, const CellPoly& b) {
    CellPoly out(std::max(a.n_, b.n_));
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            CellPoly::Exps e = ea;
            for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
            out.add_term(e, ca * cb);
        }
    return out;
}

CellPoly CellPoly::derivative(int j) const {
    CellPoly out(n_);
    for (const auto& [e, c] : terms_) {
        int p = e[static_cast<std::size_t>(j)];
        if (p == 0) continue;
        Exps d = e;
        d[static_cast<std::size_t>(j)] -= 1;
        out.add_term(d, c * p);
    }
    return out;
}

namespace {

Scalar power(const Scalar& x, int p) {
    if (p < 0) {
        if (sgn(x) == 0) throw UsageError("negative power of zero (point outside the chart)");
        return 1 / power(x, -p);
    }
    Scalar r = 1;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

}  // namespace

Scalar CellPoly::eval(const std::vector<Scalar>& x) const {
    if (static_cast<int>(x.size()) != n_) throw UsageError("point has the wrong number of coordinates");
    Scalar acc;
    for (const auto& [e, c] : terms_) {
        Scalar t = c;
        for (std::size_t j = 0; j < e.size(); ++j) t *= power(x[j], e[j]);
        acc += t;
    }
    return acc;
}

CellPoly CellPoly::substitute(const std::vector<CellPoly>& images) const {
    if (static_cast<int>(images.size()) != n_) throw UsageError("substitution needs one image per variable");
    int m = images.empty() ? 0 : images[0].nvars();
    std::vector<std::map<int, CellPoly>> cache(images.size());
    auto pw = [&](std::size_t j, int p) -> const CellPoly& {
        auto it = cache[j].find(p);
        if (it != cache[j].end()) return it->second;
        CellPoly r = CellPoly::constant(m, 1);
        if (p < 0) {
            const CellPoly& base = images[j];
            if (base.terms_.size() != 1) throw UsageError("negative power of a non-monomial image");
            auto [e, c] = *base.terms_.begin();
            Exps inv = e;
            for (int& k : inv) k = -k;
            CellPoly b = CellPoly::monomial(inv, 1 / c);
            for (int i = 0; i < -p; ++i) r = r * b;
        } else {
            for (int i = 0; i < p; ++i) r = r * images[j];
        }
        return cache[j].emplace(p, std::move(r)).first->second;
    };
    CellPoly out(m);
    for (const auto& [e, c] : terms_) {
        CellPoly t = CellPoly::constant(m, c);
        for (std::size_t j = 0; j < e.size(); ++j)
            if (e[j] != 0) t = t * pw(j, e[j]);
        out += t;
    }
    return out;
}

std::string CellPoly::to_string(const std::string& var) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        std::ostringstream mono;
        bool any = false;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (e[j] == 0) continue;
            mono << (any ? "*" : "") << var << j;
            if (e[j] != 1) mono << "^" << e[j];
            any = true;
        }
        Scalar a = abs(c);
        os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
        if (!any)
            os << fusion::to_string(a);
        else if (a == 1)
            os << mono.str();
        else
            os << fusion::to_string(a) << "*" << mono.str();
        first = false;
    }
    return os.str();
}

// ---- vector fields ----

PolyVectorField PolyVectorField::zero(int n, std::string name) {
    PolyVectorField v;
    v.n = n;
    v.name = std::move(name);
    v.comps.assign(static_cast<std::size_t>(n), CellPoly(n));
    return v;
}

bool PolyVectorField::is_zero() const {
    return std::all_of(comps.begin(), comps.end(), [](const CellPoly& p) { return p.is_zero(); });
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& o) {
    for (std::size_t j = 0; j < comps.size(); ++j) comps[j] += o.comps[j];
    return *this;
}

PolyVectorField& PolyVectorField::operator-=(const PolyVectorField& o) {
    for (std::size_t j = 0; j < comps.size(); ++j) comps[j] -= o.comps[j];
    return *this;
}

PolyVectorField operator*(const Scalar& c, PolyVectorField v) {
    for (auto& p : v.comps) p *= c;
    return v;
}

PolyVectorField operator*(const CellPoly& f, PolyVectorField v) {
    for (auto& p : v.comps) p = f * p;
    return v;
}

std::vector<Scalar> PolyVectorField::eval(const std::vector<Scalar>& x) const {
    std::vector<Scalar> out;
    out.reserve(comps.size());
    for (const auto& p : comps) out.push_back(p.eval(x));
    return out;
}

std::string PolyVectorField::to_string(const std::string& var) const {
    std::ostringstream os;
    bool any = false;
    for (std::size_t j = 0; j < comps.size(); ++j) {
        if (comps[j].is_zero()) continue;
        os << (any ? " + " : "") << "(" << comps[j].to_string(var) << ")d" << var << j;
        any = true;
    }
    return any ? os.str() : "0";
}

PolyVectorField bracket(const PolyVectorField& V, const PolyVectorField& W) {
    if (V.n != W.n) throw UsageError("bracket of fields on different cells");
    PolyVectorField out = PolyVectorField::zero(V.n, "[" + V.name + "," + W.name + "]");
    for (int k = 0; k < V.n; ++k) {
        CellPoly& c = out.comps[static_cast<std::size_t>(k)];
        for (int i = 0; i < V.n; ++i) {
            c += V.comps[static_cast<std::size_t>(i)] * W.comps[static_cast<std::size_t>(k)].derivative(i);
            c -= W.comps[static_cast<std::size_t>(i)] * V.comps[static_cast<std::size_t>(k)].derivative(i);
        }
    }
    return out;
}

std::vector<PolyVectorField> StandardFields::all() const {
    std::vector<PolyVectorField> out;
    for (const auto* group : {&e, &h, &f, &L}) out.insert(out.end(), group->begin(), group->end());
    return out;
}

namespace {

CellPoly var(int n, int j) { return CellPoly::variable(n, j); }

// sum_{a+b=j} x_a x_b over a, b >= lo.
CellPoly convolution_square(int n, int j, int lo) {
    CellPoly p(n);
    for (int a = lo; a <= j - lo; ++a) {
        int b = j - a;
        if (a >= n || b >= n) continue;
        p += var(n, a) * var(n, b);
    }
    return p;
}

}  // namespace

StandardFields standard_fields(int n) {
    if (n < 1) throw UsageError("standard_fields needs n >= 1");
    StandardFields s;
    s.n = n;
    for (int i = 0; i < n; ++i) {
        PolyVectorField e = PolyVectorField::zero(n, "e" + std::to_string(i));
        e.comps[static_cast<std::size_t>(i)] = CellPoly::constant(n, 1);
        s.e.push_back(e);

        PolyVectorField h = PolyVectorField::zero(n, "h" + std::to_string(i));
        for (int j = 0; j <= n - i - 1; ++j) h.comps[static_cast<std::size_t>(i + j)] += var(n, j) * Scalar(-2);
        s.h.push_back(h);

        PolyVectorField f = PolyVectorField::zero(n, "f" + std::to_string(i));
        for (int j = 0; j <= n - 1 - i; ++j) f.comps[static_cast<std::size_t>(i + j)] -= convolution_square(n, j, 0);
        s.f.push_back(f);
    }
    for (int i = 0; i <= n - 2; ++i) {
        PolyVectorField L = PolyVectorField::zero(n, "L" + std::to_string(i));
        for (int j = 1; j <= n - i - 1; ++j) L.comps[static_cast<std::size_t>(i + j)] += var(n, j) * Scalar(j);
        s.L.push_back(L);
    }
    return s;
}

PolyVectorField primed_field(char kind, int i, int n) {
    PolyVectorField v = PolyVectorField::zero(n, std::string(1, kind) + "'" + std::to_string(i));
    switch (kind) {
        case 'e':
            if (i >= 0 && i <= n - 1) v.comps[static_cast<std::size_t>(i)] = CellPoly::constant(n, 1);
            break;
        case 'h':
            if (i >= 1 && i <= n - 1)
                for (int j = 1; j <= n - i; ++j) v.comps[static_cast<std::size_t>(i + j - 1)] += var(n, j) * Scalar(-2);
            break;
        case 'f':
            if (i >= 1 && i <= n - 1)
                for (int j = 1; j <= n - i; ++j) v.comps[static_cast<std::size_t>(i + j - 1)] -= convolution_square(n, j + 1, 1);
            break;
        case 'L':
            if (i >= 1 && i <= n - 2)
                for (int j = 1; j <= n - i - 1; ++j) v.comps[static_cast<std::size_t>(i + j)] += var(n, j + 1) * Scalar(j);
            break;
        default:
            throw UsageError(std::string("unknown field kind ") + kind);
    }
    return v;
}

namespace {

// Coordinates of fields as vectors indexed by (component, exponent vector).
class FieldCoordinates {
public:
    void add_support(const PolyVectorField& v) {
        for (std::size_t k = 0; k < v.comps.size(); ++k)
            for (const auto& [e, c] : v.comps[k].terms()) index_.try_emplace({k, e}, index_.size());
    }
    std::size_t dim() const { return index_.size(); }
    // nullopt if v has a term outside the recorded support.
    std::optional<Vec> vec(const PolyVectorField& v) const {
        Vec out(index_.size());
        for (std::size_t k = 0; k < v.comps.size(); ++k)
            for (const auto& [e, c] : v.comps[k].terms()) {
                auto it = index_.find({k, e});
                if (it == index_.end()) return std::nullopt;
                out[it->second] = c;
            }
        return out;
    }

private:
    std::map<std::pair<std::size_t, CellPoly::Exps>, std::size_t> index_;
};

// Coefficients of target in the (independent) columns, or nullopt.
std::optional<Vec> solve_combination(const std::vector<Vec>& cols, const Vec& target) {
    std::size_t dim = target.size();
    Matrix m(dim, cols.size() + 1);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < dim; ++r) m(r, c) = cols[c][r];
    for (std::size_t r = 0; r < dim; ++r) m(r, cols.size()) = target[r];
    RrefResult rr = rref(m);
    Vec x(cols.size());
    for (std::size_t t = 0; t < rr.pivots.size(); ++t) {
        std::size_t p = rr.pivots[t];
        if (p == cols.size()) return std::nullopt;
        x[p] = rr.reduced(t, cols.size());
    }
    return x;
}

bool is_integer(const Scalar& x) { return x.get_den() == 1; }

// sl2 bracket of kinds, as (coefficient, kind) with kind 0 meaning zero.
std::pair<int, char> sl2_bracket(char a, char b) {
    if (a == b) return {0, 0};
    if (a == 'e' && b == 'h') return {-2, 'e'};
    if (a == 'h' && b == 'e') return {2, 'e'};
    if (a == 'e' && b == 'f') return {1, 'h'};
    if (a == 'f' && b == 'e') return {-1, 'h'};
    if (a == 'h' && b == 'f') return {-2, 'f'};
    return {2, 'f'};  // [f, h]
}

}  // namespace

Check verify_vect_algebra(int n) {
    StandardFields s = standard_fields(n);
    std::vector<PolyVectorField> basis = s.all();
    struct Tag {
        char kind;
        int index;
    };
    std::vector<Tag> tags;
    for (const auto* group : {&s.e, &s.h, &s.f, &s.L}) {
        char kind = group == &s.e ? 'e' : group == &s.h ? 'h' : group == &s.f ? 'f' : 'L';
        for (std::size_t i = 0; i < group->size(); ++i) tags.push_back({kind, static_cast<int>(i)});
    }
    auto lookup = [&](char kind, int index) -> std::optional<std::size_t> {
        for (std::size_t t = 0; t < tags.size(); ++t)
            if (tags[t].kind == kind && tags[t].index == index) return t;
        return std::nullopt;
    };

    std::vector<std::vector<PolyVectorField>> brackets(basis.size());
    FieldCoordinates coords;
    for (const auto& v : basis) coords.add_support(v);
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b) {
            brackets[a].push_back(bracket(basis[a], basis[b]));
            coords.add_support(brackets[a].back());
        }

    Check c;
    std::vector<Vec> cols;
    for (const auto& v : basis) cols.push_back(*coords.vec(v));
    std::size_t r = rank(Matrix::from_rows(cols, coords.dim()));
    c.expected["dim"] = 4 * n - 1;
    c.got["dim"] = r;
    c.require(static_cast<int>(r) == 4 * n - 1, "standard fields are linearly dependent");

    int closed = 0, relation_failures = 0, non_integral = 0;
    Json residuals = Json::array();
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const PolyVectorField& br = brackets[a][b];
            auto coeff = solve_combination(cols, *coords.vec(br));
            if (!coeff) {
                if (residuals.size() < 5) residuals.push_back(br.name + " = " + br.to_string());
                continue;
            }
            ++closed;
            if (!std::all_of(coeff->begin(), coeff->end(), is_integer)) ++non_integral;

            // Expected expansion.
            Vec want(basis.size());
            Tag x = tags[a], y = tags[b];
            int sum = x.index + y.index;
            if (x.kind != 'L' && y.kind != 'L') {
                auto [k, z] = sl2_bracket(x.kind, y.kind);
                if (z != 0 && sum < n) want[*lookup(z, sum)] = k;
            } else if (x.kind == 'L' && y.kind != 'L') {
                if (sum < n) want[*lookup(y.kind, sum)] = -y.index;
            } else if (x.kind != 'L' && y.kind == 'L') {
                if (sum < n) want[*lookup(x.kind, sum)] = x.index;
            } else {
                if (auto t = lookup('L', sum)) want[*t] = x.index - y.index;
            }
            if (want != *coeff) {
                ++relation_failures;
                if (residuals.size() < 5) residuals.push_back("[" + basis[a].name + "," + basis[b].name + "] = " + br.to_string());
            }
        }
    int total = static_cast<int>(basis.size() * basis.size());
    c.got["brackets"] = total;
    c.got["closed"] = closed;
    c.got["relation_failures"] = relation_failures;
    c.got["non_integral"] = non_integral;
    if (!residuals.empty()) c.got["residuals"] = residuals;
    c.require(closed == total, "span of the standard fields is not closed under bracket");
    c.require(non_integral == 0, "non-integral structure constant");
    c.require(relation_failures == 0, "structure constants differ from the current algebra relations");
    return c;
}

// ---- coordinate change ----

std::vector<Scalar> pushforward_at(const std::vector<Scalar>& x, const std::vector<Scalar>& v) {
    TruncatedSeries y = invert_series(TruncatedSeries(x));
    TruncatedSeries w = (y * y) * TruncatedSeries(v);
    for (auto& c : w.coeffs) c = -c;
    return w.coeffs;
}

std::vector<Scalar> random_point(int n, std::uint64_t seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 6);
    std::vector<Scalar> x(static_cast<std::size_t>(n));
    for (auto& c : x) {
        c = Scalar(num(rng), den(rng));
        c.canonicalize();
    }
    while (sgn(x[0]) == 0) {
        x[0] = Scalar(num(rng), den(rng));
        x[0].canonicalize();
    }
    return x;
}

Scalar jacobian_determinant(const std::vector<Scalar>& x) {
    const int n = static_cast<int>(x.size());
    if (n == 0 || sgn(x[0]) == 0) throw UsageError("jacobian needs x_0 != 0");
    Matrix J(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<Scalar> e(static_cast<std::size_t>(n));
        e[static_cast<std::size_t>(i)] = 1;
        auto col = pushforward_at(x, e);
        for (int r = 0; r < n; ++r) J(static_cast<std::size_t>(r), static_cast<std::size_t>(i)) = col[static_cast<std::size_t>(r)];
    }
    return determinant(J);
}

Check jacobian_identity(int n, const SampleConfig& cfg) {
    if (n < 1) throw UsageError("jacobian_identity needs n >= 1");
    Check c;
    int good = 0;
    for (int t = 0; t < cfg.samples; ++t) {
        auto x = random_point(n, cfg.seed, t);
        Scalar got = jacobian_determinant(x);
        Scalar want = power(x[0], -2 * n) * (n % 2 ? -1 : 1);
        if (got == want) {
            ++good;
        } else if (c.ok) {
            Json pt = Json::array();
            for (const auto& v : x) pt.push_back(to_string(v));
            c.got["point"] = pt;
            c.got["det"] = to_string(got);
            c.expected["det"] = to_string(want);
            c.fail("jacobian determinant differs from (-1)^n x_0^(-2n)");
        }
    }
    c.expected["samples"] = cfg.samples;
    c.got["samples_agreeing"] = good;
    return c;
}

// ---- one-variable Laurent polynomials ----

LaurentPoly LaurentPoly::monomial(int d, const Scalar& c) {
    LaurentPoly p;
    p.add_term(d, c);
    return p;
}

Scalar LaurentPoly::coeff(int d) const {
    auto it = terms_.find(d);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void LaurentPoly::add_term(int d, const Scalar& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(d, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (const auto& [d, c] : o.terms_) add_term(d, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (const auto& [d, c] : o.terms_) add_term(d, -c);
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [da, ca] : a.terms_)
        for (const auto& [db, cb] : b.terms_) out.add_term(da + db, ca * cb);
    return out;
}

LaurentPoly divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw UsageError("division by the zero Laurent polynomial");
    LaurentPoly q, r = a;
    while (!r.is_zero()) {
        int d = r.low() - b.low();
        if (r.high() - b.high() < d) throw IntegrityError("inexact Laurent division");
        LaurentPoly m = LaurentPoly::monomial(d, r.terms_.begin()->second / b.terms_.begin()->second);
        q += m;
        r -= m * b;
    }
    return q;
}

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        auto [d, c] = *it;
        Scalar a = abs(c);
        os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
        if (d == 0) {
            os << fusion::to_string(a);
        } else {
            if (a != 1) os << fusion::to_string(a) << "*";
            os << "y0";
            if (d != 1) os << "^" << d;
        }
        first = false;
    }
    return os.str();
}

LaurentMatrix LaurentMatrix::diagonal(const std::vector<int>& exps) {
    LaurentMatrix m(exps.size());
    for (std::size_t i = 0; i < exps.size(); ++i) m(i, i) = LaurentPoly::monomial(exps[i]);
    return m;
}

LaurentMatrix LaurentMatrix::operator*(const LaurentMatrix& o) const {
    if (n_ != o.n_) throw UsageError("matrix size mismatch");
    LaurentMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            if ((*this)(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < n_; ++j) out(i, j) += (*this)(i, k) * o(k, j);
        }
    return out;
}

LaurentPoly LaurentMatrix::determinant() const {
    // Bareiss elimination; every division is exact.
    if (n_ == 0) return LaurentPoly::monomial(0);
    std::vector<LaurentPoly> a = data_;
    auto at = [&](std::size_t r, std::size_t c) -> LaurentPoly& { return a[r * n_ + c]; };
    LaurentPoly prev = LaurentPoly::monomial(0);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
        if (at(k, k).is_zero()) {
            std::size_t p = k + 1;
            while (p < n_ && at(p, k).is_zero()) ++p;
            if (p == n_) return {};
            for (std::size_t c = 0; c < n_; ++c) std::swap(at(k, c), at(p, c));
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n_; ++i) {
            for (std::size_t j = k + 1; j < n_; ++j) at(i, j) = divide_exact(at(k, k) * at(i, j) - at(i, k) * at(k, j), prev);
            at(i, k) = {};
        }
        prev = at(k, k);
    }
    LaurentPoly d = at(n_ - 1, n_ - 1);
    if (negate) d = LaurentPoly{} - d;
    return d;
}

std::string LaurentMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < n_; ++r) {
        if (r < row_labels.size()) os << row_labels[r] << ":";
        for (std::size_t c = 0; c < n_; ++c) os << (c ? " | " : " ") << (*this)(r, c).to_string();
        os << "\n";
    }
    return os.str();
}

// ---- transition matrix ----

namespace {

struct FibreBasisEntry {
    char kind;
    int index;
};

std::vector<FibreBasisEntry> fibre_basis(int n) {
    std::vector<FibreBasisEntry> out;
    for (int i = 1; i <= n - 1; ++i) out.push_back({'e', i});
    for (int i = 1; i <= n - 1; ++i) out.push_back({'h', i});
    for (int i = 1; i <= n - 2; ++i) out.push_back({'L', i});
    for (int i = 1; i <= n - 1; ++i) out.push_back({'f', i});
    return out;
}

std::optional<std::size_t> fibre_position(int n, char kind, int i) {
    auto b = fibre_basis(n);
    for (std::size_t t = 0; t < b.size(); ++t)
        if (b[t].kind == kind && b[t].index == i) return t;
    return std::nullopt;
}

// x_j as functions of y on the overlap.
std::vector<CellPoly> inverse_coordinates(int n) {
    std::vector<CellPoly> x(static_cast<std::size_t>(n), CellPoly(n));
    CellPoly::Exps e(static_cast<std::size_t>(n), 0);
    e[0] = -1;
    x[0] = CellPoly::monomial(e);
    for (int k = 1; k < n; ++k) {
        CellPoly acc(n);
        for (int j = 1; j <= k; ++j) acc += var(n, j) * x[static_cast<std::size_t>(k - j)];
        x[static_cast<std::size_t>(k)] = (acc * x[0]) * Scalar(-1);
    }
    return x;
}

// Symbolic pushforward of an x-chart field to the y-chart.
PolyVectorField push_symbolic(const PolyVectorField& V, const std::vector<CellPoly>& xs) {
    const int n = V.n;
    std::vector<CellPoly> v;
    for (const auto& p : V.comps) v.push_back(p.substitute(xs));
    std::vector<CellPoly> ysq(static_cast<std::size_t>(n), CellPoly(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) ysq[static_cast<std::size_t>(i + j)] += var(n, i) * var(n, j);
    PolyVectorField W = PolyVectorField::zero(n, V.name);
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j)
            W.comps[static_cast<std::size_t>(i + j)] -= ysq[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    return W;
}

}  // namespace

std::vector<std::string> fibre_basis_labels(int n) {
    std::vector<std::string> out;
    for (const auto& b : fibre_basis(n)) out.push_back(std::string(1, b.kind) + "'" + std::to_string(b.index));
    return out;
}

LaurentMatrix transition_matrix_En(int n) {
    if (n < 2) throw UsageError("transition matrix needs n >= 2");
    auto basis = fibre_basis(n);
    const std::size_t r = basis.size();
    std::vector<PolyVectorField> fields;
    FieldCoordinates coords;
    for (const auto& b : basis) {
        fields.push_back(primed_field(b.kind, b.index, n));
        coords.add_support(fields.back());
    }
    std::vector<Vec> cols;
    for (const auto& f : fields) cols.push_back(*coords.vec(f));

    auto xs = inverse_coordinates(n);
    LaurentMatrix M(r);
    for (std::size_t c = 0; c < r; ++c) {
        PolyVectorField W = push_symbolic(fields[c], xs);
        if (!W.comps[0].is_zero()) throw IntegrityError("pushed field is not tangent to the fibre");
        // Split by the power of y_0; each slice is a y_0-free field.
        std::map<int, PolyVectorField> slices;
        for (int k = 0; k < n; ++k)
            for (const auto& [e, x] : W.comps[static_cast<std::size_t>(k)].terms()) {
                auto [it, ins] = slices.try_emplace(e[0], PolyVectorField::zero(n));
                CellPoly::Exps f = e;
                f[0] = 0;
                it->second.comps[static_cast<std::size_t>(k)].add_term(f, x);
            }
        for (const auto& [p, slice] : slices) {
            auto v = coords.vec(slice);
            auto coeff = v ? solve_combination(cols, *v) : std::nullopt;
            if (!coeff) throw IntegrityError("pushforward of " + fields[c].name + " leaves the span of the fibre basis");
            for (std::size_t t = 0; t < r; ++t) M(t, c).add_term(p, (*coeff)[t]);
        }
    }
    M.row_labels = M.col_labels = fibre_basis_labels(n);
    return M;
}

LaurentMatrix displayed_transition_En(int n) {
    if (n < 3) throw UsageError("the displayed table covers n >= 3");
    auto basis = fibre_basis(n);
    LaurentMatrix M(basis.size());
    auto put = [&](char rk, int ri, std::size_t col, int d, const Scalar& c) {
        if (auto row = fibre_position(n, rk, ri)) M(*row, col).add_term(d, c);
    };
    for (std::size_t col = 0; col < basis.size(); ++col) {
        auto [kind, i] = basis[col];
        switch (kind) {
            case 'e':
                put('e', i, col, 2, -1);
                put('h', i + 1, col, 1, 1);
                put('f', i + 2, col, 0, 1);
                break;
            case 'h':
                put('h', i, col, 0, 1);
                put('f', i + 1, col, -1, -2);
                break;
            case 'L':
                put('L', i, col, 0, 1);
                put('f', i + 1, col, -1, 1);
                break;
            default:
                put('f', i, col, -2, -1);
        }
    }
    M.row_labels = M.col_labels = fibre_basis_labels(n);
    return M;
}

Check verify_transition(int n) {
    Check c;
    LaurentMatrix D = transition_matrix_En(n);
    LaurentPoly det = D.determinant();
    c.got["size"] = D.size();
    c.expected["size"] = 4 * n - 5;
    c.got["det"] = det.to_string();
    c.require(static_cast<int>(D.size()) == 4 * n - 5, "fibre basis has the wrong size");
    c.require(det.is_monomial(), "determinant is not a unit times a power of y0");
    if (n < 3) return c;
    LaurentMatrix T = displayed_transition_En(n);
    Json diffs = Json::array();
    for (std::size_t r = 0; r < D.size(); ++r)
        for (std::size_t col = 0; col < D.size(); ++col)
            if (!(D(r, col) == T(r, col)))
                diffs.push_back({{"row", D.row_labels[r]},
                                 {"col", D.col_labels[col]},
                                 {"derived", D(r, col).to_string()},
                                 {"table", T(r, col).to_string()}});
    c.expected["mismatches"] = 0;
    c.got["mismatches"] = diffs.size();
    if (!diffs.empty()) c.got["differences"] = diffs;
    c.require(diffs.empty(), "derived transition matrix differs from the displayed table");
    return c;
}

// ---- splitting ----

SplittingResult splitting_type(const LaurentMatrix& M, int step_bound) {
    const std::size_t r = M.size();
    LaurentPoly det = M.determinant();
    if (!det.is_monomial()) throw UsageError("splitting needs det = unit * y0^d");
    SplittingResult res;
    res.det_degree = det.low();

    LaurentMatrix Q = M;
    auto row_degree = [&](std::size_t i) {
        int d = 0;
        bool any = false;
        for (std::size_t j = 0; j < r; ++j)
            if (!Q(i, j).is_zero()) {
                d = any ? std::max(d, Q(i, j).high()) : Q(i, j).high();
                any = true;
            }
        return d;
    };
    std::vector<int> deg(r);
    while (true) {
        Matrix lc(r, r);
        for (std::size_t i = 0; i < r; ++i) {
            deg[i] = row_degree(i);
            for (std::size_t j = 0; j < r; ++j) lc(i, j) = Q(i, j).coeff(deg[i]);
        }
        // A left dependency among the leading rows.
        auto ker = kernel_basis(lc.transpose());
        if (ker.empty()) break;
        if (res.steps >= step_bound) return res;
        const Vec& alpha = ker.front();
        std::size_t pivot = r;
        for (std::size_t i = 0; i < r; ++i)
            if (sgn(alpha[i]) != 0 && (pivot == r || deg[i] > deg[pivot])) pivot = i;
        // row_pivot += sum (alpha_i / alpha_pivot) y0^{deg_pivot - deg_i} row_i
        for (std::size_t i = 0; i < r; ++i) {
            if (i == pivot || sgn(alpha[i]) == 0) continue;
            LaurentPoly m = LaurentPoly::monomial(deg[pivot] - deg[i], alpha[i] / alpha[pivot]);
            for (std::size_t j = 0; j < r; ++j) Q(pivot, j) += m * Q(i, j);
        }
        ++res.steps;
    }
    // Q = diag(y0^deg) B with B polynomial in y0^{-1} and det B a nonzero constant.
    LaurentMatrix B(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            B(i, j) = Q(i, j) * LaurentPoly::monomial(-deg[i]);
            if (!B(i, j).is_zero() && B(i, j).high() > 0) throw IntegrityError("column factor is not polynomial in 1/y0");
        }
    LaurentPoly dB = B.determinant();
    if (!dB.is_monomial() || dB.low() != 0) throw IntegrityError("column factor is not invertible over Q[1/y0]");
    res.terminated = true;
    res.exponents = deg;
    std::sort(res.exponents.rbegin(), res.exponents.rend());
    return res;
}

long long section_dimension(const LaurentMatrix& M, int twist, int bound) {
    const std::size_t r = M.size();
    const std::size_t per = static_cast<std::size_t>(bound) + 1;
    const std::size_t unknowns = r * per;
    // One equation per (row, negative power of y0).
    std::map<std::pair<std::size_t, int>, Vec> eqs;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t c = 0; c < r; ++c)
            for (const auto& [d, x] : M(i, c).terms())
                for (int j = 0; j <= bound; ++j) {
                    int p = twist + d - j;
                    if (p >= 0) continue;
                    auto [it, ins] = eqs.try_emplace({i, p}, Vec(unknowns));
                    it->second[c * per + static_cast<std::size_t>(j)] += x;
                }
    if (eqs.empty()) return static_cast<long long>(unknowns);
    std::vector<Vec> rows;
    for (auto& [k, v] : eqs) rows.push_back(std::move(v));
    return static_cast<long long>(unknowns - rank(Matrix::from_rows(rows, unknowns)));
}

std::vector<int> expected_splitting(int n) {
    if (n < 2) throw UsageError("E_n needs n >= 2");
    if (n == 2) return {2, 0, -2};
    std::vector<int> out{2};
    out.insert(out.end(), static_cast<std::size_t>(n - 1), 1);
    out.insert(out.end(), static_cast<std::size_t>(2 * n - 5), 0);
    out.insert(out.end(), static_cast<std::size_t>(n - 1), -1);
    out.push_back(-2);
    return out;
}

Check verify_splitting(int n) {
    Check c;
    LaurentMatrix M = transition_matrix_En(n);
    SplittingResult s = splitting_type(M);
    auto want = expected_splitting(n);
    c.expected["splitting"] = want;
    c.got["splitting"] = s.exponents;
    c.got["steps"] = s.steps;
    c.got["det_degree"] = s.det_degree;
    c.require(s.terminated, "reduction hit the step bound");
    int sum = 0;
    for (int e : s.exponents) sum += e;
    c.require(!s.terminated || sum == s.det_degree, "splitting degrees do not add up to deg det");
    // Global sections: 4n-4 fields tangent to the fibres.
    long long h0 = section_dimension(M, 0, 4);
    c.expected["h0"] = 4 * n - 4;
    c.got["h0"] = h0;
    c.require(h0 == 4 * n - 4, "dim H^0 differs from 4n-4");
    c.require(s.exponents == want, "splitting type differs");
    return c;
}

// ---- cohomology ----

CohomologyResult cohomology_dim(const std::vector<int>& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0) throw UsageError("bundle label entries must be nonnegative");
        if (i && a[i] < a[i - 1]) throw UsageError("bundle label must be nondecreasing");
    }
    CohomologyResult res;
    std::vector<int> s = a;
    while (true) {
        if (std::all_of(s.begin(), s.end(), [](int x) { return x == 0; })) {
            res.chain.push_back({s, "base", 1});
            res.value += 1;
            break;
        }
        std::size_t bad = s.size();
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            if (s[i] > s[i + 1]) {
                bad = i;
                break;
            }
        if (bad == s.size()) {
            long long prod = 1;
            for (std::size_t i = 0; i + 1 < s.size(); ++i) prod *= s[i] + 1;
            res.chain.push_back({s, "R1", prod});
            res.value += prod;
            s.back() -= 1;
        } else if (s[bad] == s[bad + 1] + 1) {
            res.chain.push_back({s, "R2", 0});
            std::swap(s[bad], s[bad + 1]);
        } else {
            throw IntegrityError("cohomology recursion is stuck");
        }
    }
    return res;
}

Check verify_cohomology(const std::vector<int>& a) {
    CohomologyResult r = cohomology_dim(a);
    long long prod = 1;
    for (int x : a) prod *= x + 1;
    Check c;
    c.expected["dim"] = prod;
    c.got["dim"] = r.value;
    c.got["chain_length"] = r.chain.size();
    c.require(r.value == prod, "recursion disagrees with prod (a_i + 1)");
    return c;
}

BundleLabel pullback_degree(const Composition& A) {
    require_valid(A);
    const int n = A.n();
    BundleLabel L;
    for (int x : A.a) L.c.push_back(x - 1);
    for (int i = 0; i < n; ++i) {
        int b = 0;
        for (int j = 1; j <= n - i; ++j) b += A[j];
        L.b.push_back(b - n + i);
    }
    return L;
}

Check verify_pullback(const Composition& A) {
    BundleLabel L = pullback_degree(A);
    const int n = A.n();
    Check c;
    // Label convention (b_{n-1}, b_{n-2} - b_{n-1}, ..., b_0 - b_1).
    std::vector<int> from_b;
    for (int k = 1; k <= n; ++k) {
        int bi = L.b[static_cast<std::size_t>(n - k)];
        from_b.push_back(k == 1 ? bi : bi - L.b[static_cast<std::size_t>(n - k + 1)]);
    }
    c.require(from_b == L.c, "restriction degrees disagree with the label");
    long long d = cohomology_dim(L.c).value;
    c.expected["dim"] = A.product();
    c.got["dim"] = d;
    c.got["label"] = L.c;
    c.got["restriction_degrees"] = L.b;
    c.require(d == A.product(), "dim H^0 of the pullback differs from dim M^A");
    return c;
}

// ---- pushforward identities ----

namespace {

using PointMap = std::function<std::vector<Scalar>(const std::vector<Scalar>&)>;

struct Identity {
    std::string name;
    PointMap lhs;  // evaluated at the x-point
    PointMap rhs;
    bool required = true;
};

std::vector<Scalar> combine(const std::vector<std::pair<Scalar, std::vector<Scalar>>>& parts, std::size_t n) {
    std::vector<Scalar> out(n);
    for (const auto& [c, v] : parts)
        for (std::size_t j = 0; j < n; ++j) out[j] += c * v[j];
    return out;
}

}  // namespace

Check pushforward_check(int n, const SampleConfig& cfg) {
    if (n < 2) throw UsageError("pushforward_check needs n >= 2");
    const std::size_t N = static_cast<std::size_t>(n);
    StandardFields S = standard_fields(n);
    auto P = [n](char k, int i) { return primed_field(k, i, n); };
    auto inv = [](const std::vector<Scalar>& x) { return invert_series(TruncatedSeries(x)).coeffs; };
    std::vector<Identity> ids;

    // Same-chart expansions; the y-chart uses identical formulas at y = x^{-1}.
    for (int chart = 0; chart < 2; ++chart) {
        std::string tag = chart == 0 ? "x" : "y";
        auto at = [chart, inv](const std::vector<Scalar>& x) { return chart == 0 ? x : inv(x); };
        for (int i = 0; i < n; ++i) {
            std::string sfx = "(" + tag + ",i=" + std::to_string(i) + ")";
            auto e = S.e[static_cast<std::size_t>(i)], h = S.h[static_cast<std::size_t>(i)], f = S.f[static_cast<std::size_t>(i)];
            auto ep = P('e', i), hp = P('h', i + 1), fp = P('f', i + 2);
            if (i >= 1) ids.push_back({"e=e'" + sfx, [=](auto& x) { return e.eval(at(x)); }, [=](auto& x) { return ep.eval(at(x)); }});
            ids.push_back({"h=h'-2x0e'" + sfx, [=](auto& x) { return h.eval(at(x)); }, [=](auto& x) {
                               auto p = at(x);
                               return combine({{1, hp.eval(p)}, {-2 * p[0], ep.eval(p)}}, N);
                           }});
            ids.push_back({"f=f'+x0h'-x0^2e'" + sfx, [=](auto& x) { return f.eval(at(x)); }, [=](auto& x) {
                               auto p = at(x);
                               return combine({{1, fp.eval(p)}, {p[0], hp.eval(p)}, {-p[0] * p[0], ep.eval(p)}}, N);
                           }});
            if (i <= n - 2) {
                auto L = S.L[static_cast<std::size_t>(i)], Lp = P('L', i + 1), hi = P('h', i);
                ids.push_back({"L=L'-h'(i+1)/2" + sfx, [=](auto& x) { return L.eval(at(x)); }, [=](auto& x) {
                                   auto p = at(x);
                                   return combine({{1, Lp.eval(p)}, {Scalar(-1, 2), hp.eval(p)}}, N);
                               }});
                ids.push_back({"L=L'-h'(i)/2 as printed" + sfx, [=](auto& x) { return L.eval(at(x)); },
                               [=](auto& x) {
                                   auto p = at(x);
                                   return combine({{1, Lp.eval(p)}, {Scalar(-1, 2), hi.eval(p)}}, N);
                               },
                               false});
            }
        }
    }

    // The same manifold field seen from both charts.
    for (int i = 0; i < n; ++i) {
        std::string sfx = "(i=" + std::to_string(i) + ")";
        auto ex = S.e[static_cast<std::size_t>(i)], hx = S.h[static_cast<std::size_t>(i)], fx = S.f[static_cast<std::size_t>(i)];
        ids.push_back({"push e_x=f_y" + sfx, [=](auto& x) { return pushforward_at(x, ex.eval(x)); }, [=](auto& x) { return fx.eval(inv(x)); }});
        ids.push_back({"push f_x=e_y" + sfx, [=](auto& x) { return pushforward_at(x, fx.eval(x)); }, [=](auto& x) { return ex.eval(inv(x)); }});
        ids.push_back({"push h_x=-h_y" + sfx, [=](auto& x) { return pushforward_at(x, hx.eval(x)); }, [=](auto& x) {
                           auto v = hx.eval(inv(x));
                           for (auto& c : v) c = -c;
                           return v;
                       }});
        if (i <= n - 2) {
            auto Lx = S.L[static_cast<std::size_t>(i)];
            ids.push_back({"push L_x=L_y" + sfx, [=](auto& x) { return pushforward_at(x, Lx.eval(x)); }, [=](auto& x) { return Lx.eval(inv(x)); }});
        }
    }

    // Fibre basis: the derived matrix, and the printed coefficients.
    LaurentMatrix M = transition_matrix_En(n);
    auto basis = fibre_basis(n);
    auto labels = fibre_basis_labels(n);
    auto eval_laurent = [](const LaurentPoly& p, const Scalar& y0) {
        Scalar acc;
        for (const auto& [d, c] : p.terms()) acc += c * power(y0, d);
        return acc;
    };
    for (std::size_t col = 0; col < basis.size(); ++col) {
        auto V = P(basis[col].kind, basis[col].index);
        auto lhs = [=](auto& x) { return pushforward_at(x, V.eval(x)); };
        ids.push_back({"column " + labels[col] + " of the derived matrix", lhs, [=](auto& x) {
                           auto y = inv(x);
                           std::vector<std::pair<Scalar, std::vector<Scalar>>> parts;
                           for (std::size_t r = 0; r < basis.size(); ++r)
                               if (!M(r, col).is_zero())
                                   parts.push_back({eval_laurent(M(r, col), y[0]), P(basis[r].kind, basis[r].index).eval(y)});
                           return combine(parts, N);
                       }});
        int i = basis[col].index;
        PointMap printed;
        switch (basis[col].kind) {
            case 'e':
                printed = [=](auto& x) {
                    auto y = inv(x);
                    return combine({{y[0] * y[0], P('e', i).eval(y)}, {y[0], P('h', i + 1).eval(y)}, {1, P('f', i + 2).eval(y)}}, N);
                };
                break;
            case 'h':
                printed = [=](auto& x) {
                    auto y = inv(x);
                    return combine({{1, P('h', i).eval(y)}, {2 / y[0], P('f', i + 1).eval(y)}}, N);
                };
                break;
            case 'L':
                printed = [=](auto& x) {
                    auto y = inv(x);
                    return combine({{1, P('L', i).eval(y)}, {1 / y[0], P('f', i + 1).eval(y)}}, N);
                };
                break;
            default:
                printed = [=](auto& x) {
                    auto y = inv(x);
                    return combine({{-1 / (y[0] * y[0]), P('f', i).eval(y)}}, N);
                };
        }
        ids.push_back({"printed expansion of " + labels[col], lhs, printed, false});
    }

    Check c;
    Json printed = Json::object();
    int required_ok = 0, required_total = 0;
    for (const auto& id : ids) {
        bool holds = true;
        for (int t = 0; t < cfg.samples && holds; ++t) {
            auto x = random_point(n, cfg.seed, t);
            if (id.lhs(x) != id.rhs(x)) {
                holds = false;
                if (id.required && c.ok) {
                    Json pt = Json::array();
                    for (const auto& v : x) pt.push_back(to_string(v));
                    c.got["point"] = pt;
                    c.fail(id.name + " fails");
                }
            }
        }
        if (id.required) {
            ++required_total;
            required_ok += holds;
        } else {
            printed[id.name] = holds;
        }
    }
    c.expected["identities"] = required_total;
    c.got["identities_holding"] = required_ok;
    c.got["as_printed"] = printed;
    c.got["samples"] = cfg.samples;
    c.got["seed"] = cfg.seed;
    return c;
}

}  // namespace fusion
