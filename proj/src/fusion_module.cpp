#include "fusion/fusion_module.hpp"

#include "fusion/errors.hpp"
#include "fusion/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fusion {

namespace {

mpz_class factorial(int k) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    return f;
}

mpz_class multinomial(const Monomial& m) {
    mpz_class r = factorial(m.degree());
    for (int e : m.exps) r /= factorial(e);
    return r;
}

}  // namespace

Polynomial power_coefficient(int n, int k, int s) {
    Polynomial p(n);
    int w = k * (n - 1) - s;
    if (w < 0) return p;
    for (const Monomial& m : enumerate_monomials(n, k, w)) p.add_term(m, Scalar(multinomial(m)));
    return p;
}

std::vector<IdealGenerator> ideal_generators(const Composition& A) {
    require_valid(A);
    if (A.n() == 0) throw UsageError("empty composition");
    std::vector<IdealGenerator> out;
    int n = A.n();
    for (int k = 1; k <= A.top_degree() + 1; ++k)
        for (int s = 0; s < A.N(k) && s <= k * (n - 1); ++s) out.push_back({k, s, power_coefficient(n, k, s)});
    return out;
}

namespace {

struct LevelPiece {
    bool nonzero = false;
    std::vector<Monomial> basis;
    // e_j maps from piece (k-1, s-j): matrix (dim here) x (dim source).
    std::vector<Matrix> incoming;
    std::map<Monomial, Vec, MonomialOrder> nf;
};

}  // namespace

FusionModule::FusionModule(Composition A) : A_(std::move(A)) {
    require_valid(A_);
    if (A_.n() == 0) throw UsageError("empty composition; pad with a leading 1");
    const int n = A_.n();
    const int K = A_.top_degree();

    pieces_[{0, 0}] = Piece{{Monomial::one(n)}, std::vector<Matrix>(static_cast<std::size_t>(n))};
    using NfMap = std::map<Monomial, Vec, MonomialOrder>;
    std::map<int, NfMap> prev_nf;  // weight -> monomial -> coordinates, for level k-1
    prev_nf[0][Monomial::one(n)] = Vec{Scalar(1)};

    for (int k = 1; k <= K + 1; ++k) {
        const int smax = k * (n - 1);
        std::vector<LevelPiece> level(static_cast<std::size_t>(smax + 1));

        parallel_for(level.size(), [&](std::size_t si) {
            const int s = static_cast<int>(si);
            LevelPiece& out = level[si];
            out.incoming.resize(static_cast<std::size_t>(n));

            // W = sum_j e_j (x) Q(k-1, s-j); columns sorted by the monomial e_j * b.
            struct Col {
                Monomial mono;
                int j;
                std::size_t c;
            };
            std::vector<Col> cols;
            std::vector<std::size_t> block_dim(static_cast<std::size_t>(n), 0);
            for (int j = 0; j < n; ++j) {
                const Piece* src = find({k - 1, s - j});
                if (!src) continue;
                block_dim[static_cast<std::size_t>(j)] = src->basis.size();
                for (std::size_t c = 0; c < src->basis.size(); ++c)
                    cols.push_back({Monomial::variable(n, j) * src->basis[c], j, c});
            }
            if (cols.empty()) return;
            std::stable_sort(cols.begin(), cols.end(), [](const Col& x, const Col& y) {
                if (x.mono == y.mono) return x.j > y.j;
                return MonomialOrder{}(x.mono, y.mono);
            });
            std::vector<std::vector<std::size_t>> pos(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) pos[static_cast<std::size_t>(j)].resize(block_dim[static_cast<std::size_t>(j)]);
            for (std::size_t p = 0; p < cols.size(); ++p) pos[static_cast<std::size_t>(cols[p].j)][cols[p].c] = p;
            const std::size_t dimW = cols.size();

            auto embed = [&](int j, const Vec& coords, const Scalar& scale, Vec& into) {
                for (std::size_t c = 0; c < coords.size(); ++c)
                    if (sgn(coords[c]) != 0) into[pos[static_cast<std::size_t>(j)][c]] += scale * coords[c];
            };

            RowSpace rel(dimW);
            // Commutation: e_i (x) e_j b - e_j (x) e_i b for b in Q(k-2, s-i-j).
            if (k >= 2) {
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        const Piece* b = find({k - 2, s - i - j});
                        if (!b) continue;
                        const Matrix& ej = b->up[static_cast<std::size_t>(j)];
                        const Matrix& ei = b->up[static_cast<std::size_t>(i)];
                        for (std::size_t c = 0; c < b->basis.size(); ++c) {
                            Vec v(dimW);
                            if (ej.rows() > 0) embed(i, ej.column(c), 1, v);
                            if (ei.rows() > 0) embed(j, ei.column(c), -1, v);
                            if (!is_zero(v)) rel.insert(std::move(v));
                        }
                    }
            }

            // Image in W of an ambient monomial: e_j (x) NF(m / e_j), j its lowest variable.
            auto lift = [&](const Monomial& m, Vec& into, const Scalar& scale) {
                int j = 0;
                while (m.exps[static_cast<std::size_t>(j)] == 0) ++j;
                Monomial rest = m;
                rest.exps[static_cast<std::size_t>(j)] -= 1;
                auto wit = prev_nf.find(s - j);
                if (wit == prev_nf.end()) return;
                auto it = wit->second.find(rest);
                if (it == wit->second.end()) return;
                embed(j, it->second, scale, into);
            };

            const std::vector<Monomial> ambient = enumerate_monomials(n, k, s);
            const int zexp = k * (n - 1) - s;
            if (zexp < A_.N(k)) {
                Vec g(dimW);
                for (const Monomial& m : ambient) lift(m, g, Scalar(multinomial(m)));
                if (!is_zero(g)) rel.insert(std::move(g));
            }

            std::vector<std::size_t> free = rel.free_columns();
            if (free.empty()) return;
            out.nonzero = true;
            for (std::size_t f : free) {
                if (!out.basis.empty() && out.basis.back() == cols[f].mono)
                    throw IntegrityError("repeated standard monomial " + cols[f].mono.to_string() + " in M^" +
                                         A_.to_string());
                out.basis.push_back(cols[f].mono);
            }
            auto quotient = [&](const Vec& v) {
                Vec r = rel.reduce(v);
                Vec q(free.size());
                for (std::size_t t = 0; t < free.size(); ++t) q[t] = r[free[t]];
                return q;
            };
            for (int j = 0; j < n; ++j) {
                std::size_t bd = block_dim[static_cast<std::size_t>(j)];
                if (bd == 0) continue;
                Matrix m(free.size(), bd);
                for (std::size_t c = 0; c < bd; ++c) {
                    Vec unit(dimW);
                    unit[pos[static_cast<std::size_t>(j)][c]] = 1;
                    Vec q = quotient(unit);
                    for (std::size_t r = 0; r < q.size(); ++r) m(r, c) = q[r];
                }
                out.incoming[static_cast<std::size_t>(j)] = std::move(m);
            }
            for (const Monomial& m : ambient) {
                Vec w(dimW);
                lift(m, w, 1);
                Vec q = quotient(w);
                if (!is_zero(q)) out.nf.emplace(m, std::move(q));
            }
        });

        bool any = false;
        std::map<int, NfMap> next_nf;
        for (int s = 0; s <= smax; ++s) {
            LevelPiece& lp = level[static_cast<std::size_t>(s)];
            if (!lp.nonzero) continue;
            if (k == K + 1)
                throw IntegrityError("M^" + A_.to_string() + " has a nonzero piece " + Bidegree{k, s}.to_string() +
                                     " above the top degree");
            any = true;
            for (int j = 0; j < n; ++j) {
                Matrix& m = lp.incoming[static_cast<std::size_t>(j)];
                if (m.rows() == 0) continue;
                pieces_.at({k - 1, s - j}).up[static_cast<std::size_t>(j)] = std::move(m);
            }
            pieces_[{k, s}] = Piece{std::move(lp.basis), std::vector<Matrix>(static_cast<std::size_t>(n))};
            next_nf[s] = std::move(lp.nf);
        }
        prev_nf = std::move(next_nf);
        if (!any) break;
    }

    long long total = static_cast<long long>(total_dim());
    if (total != A_.product())
        throw IntegrityError("dim M^" + A_.to_string() + " = " + std::to_string(total) + ", expected " +
                             std::to_string(A_.product()) + "; character " + character().to_string());
}

const FusionModule::Piece* FusionModule::find(Bidegree b) const {
    auto it = pieces_.find(b);
    return it == pieces_.end() ? nullptr : &it->second;
}

std::vector<Bidegree> FusionModule::support() const {
    std::vector<Bidegree> out;
    out.reserve(pieces_.size());
    for (const auto& [b, p] : pieces_) out.push_back(b);
    return out;
}

std::size_t FusionModule::piece_dim(Bidegree b) const {
    const Piece* p = find(b);
    return p ? p->basis.size() : 0;
}

const std::vector<Monomial>& FusionModule::basis(Bidegree b) const {
    static const std::vector<Monomial> none;
    const Piece* p = find(b);
    return p ? p->basis : none;
}

Vec FusionModule::apply_e(int j, Bidegree b, const Vec& v) const {
    if (j < 0 || j >= nvars()) throw UsageError("e_" + std::to_string(j) + " out of range for M^" + A_.to_string());
    const Piece* p = find(b);
    if (!p) return {};
    const Matrix& m = p->up[static_cast<std::size_t>(j)];
    if (m.rows() == 0) return {};
    return m.apply(v);
}

Operator FusionModule::e(int j) const {
    if (j < 0 || j >= nvars()) throw UsageError("e_" + std::to_string(j) + " out of range for M^" + A_.to_string());
    return Operator{"e" + std::to_string(j), {1, j}, [this, j](Bidegree b, const Vec& v) { return apply_e(j, b, v); }};
}

std::vector<Operator> FusionModule::e_operators() const {
    std::vector<Operator> ops;
    for (int j = 0; j < nvars(); ++j) ops.push_back(e(j));
    return ops;
}

Element FusionModule::cyclic_vector() const {
    Element x;
    x.parts[{0, 0}] = Vec{Scalar(1)};
    return x;
}

Bidegree FusionModule::top_bidegree() const { return pieces_.rbegin()->first; }

Element FusionModule::top_vector() const {
    Bidegree t = top_bidegree();
    if (piece_dim(t) != 1) throw IntegrityError("top piece of M^" + A_.to_string() + " is not a line");
    Element x;
    x.parts[t] = Vec{Scalar(1)};
    return x;
}

Element FusionModule::class_of(const Monomial& m) const {
    if (m.nvars() != nvars()) throw UsageError("monomial has the wrong number of variables");
    Element x = cyclic_vector();
    for (int j = 0; j < nvars() && !x.is_zero(); ++j)
        for (int r = 0; r < m.exps[static_cast<std::size_t>(j)] && !x.is_zero(); ++r) x = apply(e(j), x);
    return x;
}

Element FusionModule::act(const Polynomial& p, const Element& x) const {
    if (p.nvars() != nvars()) throw UsageError("polynomial has the wrong number of variables");
    Element y;
    for (const auto& [m, c] : p.terms()) {
        Element t = x;
        for (int j = 0; j < nvars() && !t.is_zero(); ++j)
            for (int r = 0; r < m.exps[static_cast<std::size_t>(j)] && !t.is_zero(); ++r) t = apply(e(j), t);
        for (auto& [b, v] : t.parts) {
            auto [it, inserted] = y.parts.try_emplace(b, Vec(v.size()));
            for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += c * v[i];
        }
    }
    y.prune();
    return y;
}

// Text layout, one record per line:
//   fusion-module 1
//   A <entries>
//   piece <k> <s> <dim>
//   mono <exponents>                       (dim lines)
//   up <j> <rows> <cols> <entries...>      (only nonzero maps)
//   end
std::string FusionModule::serialize() const {
    std::ostringstream out;
    out << "fusion-module 1\nA";
    for (int x : A_.a) out << ' ' << x;
    out << '\n';
    for (const auto& [b, p] : pieces_) {
        out << "piece " << b.k << ' ' << b.s << ' ' << p.basis.size() << '\n';
        for (const Monomial& m : p.basis) {
            out << "mono";
            for (int e : m.exps) out << ' ' << e;
            out << '\n';
        }
        for (std::size_t j = 0; j < p.up.size(); ++j) {
            const Matrix& m = p.up[j];
            if (m.rows() == 0) continue;
            out << "up " << j << ' ' << m.rows() << ' ' << m.cols();
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c) out << ' ' << m(r, c).get_str();
            out << '\n';
        }
    }
    out << "end\n";
    return out.str();
}

std::shared_ptr<FusionModule> FusionModule::deserialize(std::string_view text) {
    std::istringstream in{std::string(text)};
    auto fail = [](const std::string& why) -> std::shared_ptr<FusionModule> {
        throw IntegrityError("corrupt module record: " + why);
    };
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "fusion-module" || version != 1) return fail("bad header");
    std::string line;
    std::getline(in, line);
    if (!std::getline(in, line) || line.rfind("A", 0) != 0) return fail("missing composition");
    std::istringstream as(line.substr(1));
    std::vector<int> a;
    for (int x; as >> x;) a.push_back(x);
    std::shared_ptr<FusionModule> mod(new FusionModule());
    mod->A_ = Composition(a);
    require_valid(mod->A_);
    const int n = mod->A_.n();
    Piece* cur = nullptr;
    bool ended = false;
    while (in >> tag) {
        if (tag == "end") {
            ended = true;
            break;
        }
        if (tag == "piece") {
            Bidegree b;
            std::size_t dim = 0;
            if (!(in >> b.k >> b.s >> dim)) return fail("bad piece line");
            cur = &mod->pieces_[b];
            cur->up.assign(static_cast<std::size_t>(n), Matrix());
            cur->basis.reserve(dim);
        } else if (tag == "mono") {
            if (!cur) return fail("mono before piece");
            std::vector<int> e(static_cast<std::size_t>(n));
            for (int& x : e)
                if (!(in >> x)) return fail("bad monomial");
            cur->basis.emplace_back(std::move(e));
        } else if (tag == "up") {
            if (!cur) return fail("up before piece");
            std::size_t j = 0, rows = 0, cols = 0;
            if (!(in >> j >> rows >> cols) || j >= static_cast<std::size_t>(n)) return fail("bad up header");
            Matrix m(rows, cols);
            std::string tok;
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) {
                    if (!(in >> tok)) return fail("truncated matrix");
                    m(r, c) = parse_scalar(tok);
                }
            cur->up[j] = std::move(m);
        } else {
            return fail("unknown tag " + tag);
        }
    }
    if (!ended) return fail("missing end marker");
    if (mod->pieces_.empty() || static_cast<long long>(mod->total_dim()) != mod->A_.product())
        return fail("dimension does not match the composition");
    return mod;
}

}  // namespace fusion
