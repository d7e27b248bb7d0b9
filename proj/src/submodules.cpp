#include "fusion/submodules.hpp"

#include "fusion/errors.hpp"
#include "fusion/fusion_checks.hpp"
#include "fusion/registry.hpp"
#include "fusion/tensor_module.hpp"

#include <algorithm>

namespace fusion {

namespace {

void require_position(const Composition& A, int i) {
    if (i < 1 || i >= A.n())
        throw UsageError("position i=" + std::to_string(i) + " out of range for " + A.to_string());
}

Composition sorted_copy(Composition A) {
    std::sort(A.a.begin(), A.a.end());
    return A;
}

Composition slice(const Composition& A, int from, int to) {  // 1-based, inclusive
    std::vector<int> out;
    for (int t = from; t <= to; ++t) out.push_back(A[t]);
    return Composition(std::move(out));
}

Composition nonempty(Composition A) {
    if (A.a.empty()) A.a.push_back(1);
    return A;
}

}  // namespace

Composition apply_move(const Composition& A, IndexMove mv) {
    if (mv.i < 1 || mv.j > A.n() || mv.i >= mv.j)
        throw UsageError("move (" + std::to_string(mv.i) + "," + std::to_string(mv.j) + ") out of range for " +
                         A.to_string());
    Composition B = A;
    B.a[static_cast<std::size_t>(mv.i - 1)] -= 1;
    B.a[static_cast<std::size_t>(mv.j - 1)] += 1;
    if (!B.positive()) throw UsageError("move produces a zero entry: " + B.to_string());
    if (!B.sorted()) throw UsageError("move produces an unsorted composition: " + B.to_string());
    return B;
}

Vec GradedLinearMap::apply(Bidegree b, const Vec& v) const {
    auto it = blocks.find(b);
    if (it == blocks.end() || it->second.rows() == 0) return {};
    return it->second.apply(v);
}

std::size_t GradedLinearMap::rank() const {
    std::size_t r = 0;
    for (const auto& [b, m] : blocks)
        if (m.rows() > 0) r += fusion::rank(m);
    return r;
}

QuotientMap quotient_map(const Composition& A, IndexMove mv) {
    require_valid(A);
    Composition T = apply_move(A, mv);
    QuotientMap q{module_for(A), module_for(T), {}};
    for (const IdealGenerator& g : ideal_generators(A)) {
        if (!q.target->normal_form(g.poly).is_zero())
            throw IntegrityError("generator of I_" + A.to_string() + " at degree " + std::to_string(g.k) +
                                 " does not vanish in M^" + T.to_string());
    }
    for (Bidegree b : q.source->support()) {
        const auto& basis = q.source->basis(b);
        std::size_t td = q.target->piece_dim(b);
        Matrix m(td, basis.size());
        if (td > 0)
            for (std::size_t c = 0; c < basis.size(); ++c) {
                Element img = q.target->class_of(basis[c]);
                auto it = img.parts.find(b);
                if (it == img.parts.end()) continue;
                for (std::size_t r = 0; r < td; ++r) m(r, c) = it->second[r];
            }
        if (td > 0 && fusion::rank(m) != td)
            throw IntegrityError("map M^" + A.to_string() + " -> M^" + T.to_string() + " not onto at " + b.to_string());
        q.map.blocks.emplace(b, std::move(m));
    }
    for (Bidegree b : q.target->support())
        if (!q.map.blocks.count(b))
            throw IntegrityError("M^" + T.to_string() + " has a piece " + b.to_string() + " missing from M^" +
                                 A.to_string());
    return q;
}

Submodule kernel_submodule(const QuotientMap& q) {
    Submodule s{q.source, Subspace(*q.source), {}};
    for (const auto& [b, m] : q.map.blocks) {
        if (m.rows() == 0) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                Vec v(m.cols());
                v[c] = 1;
                s.space.insert(b, v);
            }
            continue;
        }
        for (const Vec& v : kernel_basis(m)) s.space.insert(b, v);
    }
    return s;
}

long long kernel_dim_formula(const Composition& A, int i) {
    require_position(A, i);
    long long p = 1;
    for (int l = 1; l <= A.n(); ++l)
        if (l != i && l != i + 1) p *= A[l];
    return p * (A[i + 1] - A[i] + 1);
}

Submodule submodule_S(const Composition& A, IndexMove mv) {
    QuotientMap q = quotient_map(A, mv);
    Submodule s = kernel_submodule(q);
    long long expect = static_cast<long long>(q.source->total_dim()) - static_cast<long long>(q.target->total_dim());
    if (static_cast<long long>(s.space.dim()) != expect)
        throw IntegrityError("kernel dimension violates rank-nullity for " + A.to_string());
    if (mv.j == mv.i + 1 && static_cast<long long>(s.space.dim()) != kernel_dim_formula(A, mv.i))
        throw IntegrityError("dim S_{" + std::to_string(mv.i) + "," + std::to_string(mv.j) + "}" + A.to_string() +
                             " = " + std::to_string(s.space.dim()) + ", formula gives " +
                             std::to_string(kernel_dim_formula(A, mv.i)));
    if (mv.j == mv.i + 1)
        for (const auto& g : generators_w(*s.parent, mv.i)) s.generators.push_back(g.w);
    return s;
}

std::vector<GeneratorW> generators_w(const FusionModule& M, int i) {
    const Composition& A = M.composition();
    require_position(A, i);
    std::vector<GeneratorW> out;
    for (int j = A[i] - 1; j <= A[i + 1] - 1; ++j)
        out.push_back({j, M.normal_form(power_coefficient(A.n(), j, A.N(j)))});
    return out;
}

Check verify_exactness(const Composition& A, int i) {
    Submodule S = submodule_S(A, {i, i + 1});
    Composition T = apply_move(A, {i, i + 1});
    Check c;
    GradedCharacter total = S.parent->character();
    GradedCharacter sum = S.space.character() + module_for(T)->character();
    c.expected["dim_S"] = kernel_dim_formula(A, i);
    c.got["dim_S"] = S.space.dim();
    c.expected["character"] = to_json(total);
    c.got["character"] = to_json(sum);
    c.require(total == sum, "character of M^A is not the sum of kernel and image characters");
    for (const Operator& op : S.parent->e_operators())
        c.require(S.space.closed_under(op), "kernel not closed under " + op.name);
    return c;
}

Check verify_generators(const Composition& A, int i) {
    Submodule S = submodule_S(A, {i, i + 1});
    Check c;
    std::vector<Element> ws;
    for (const auto& g : generators_w(*S.parent, i)) {
        c.require(!g.w.is_zero(), "w_" + std::to_string(g.j) + " vanishes");
        c.require(S.space.contains(g.w), "w_" + std::to_string(g.j) + " is not in the kernel");
        ws.push_back(g.w);
    }
    Subspace span = cyclic_span(*S.parent, S.parent->e_operators(), ws);
    c.expected["character"] = to_json(S.space.character());
    c.got["character"] = to_json(span.character());
    c.got["generators"] = ws.size();
    c.require(span == S.space, "the w_j do not generate the kernel");
    return c;
}

Check verify_sum_decomposition(const Composition& A, IndexMove mv) {
    Check c;
    Submodule whole = submodule_S(A, mv);
    Subspace sum;
    bool first = true;
    std::vector<std::size_t> dims;
    Json inter = Json::array();
    Subspace prev;
    for (int l = mv.i; l < mv.j; ++l) {
        Submodule part = submodule_S(A, {l, l + 1});
        dims.push_back(part.space.dim());
        if (!first) {
            std::size_t pair = (prev + part.space).dim();
            inter.push_back(static_cast<long long>(prev.dim() + part.space.dim()) - static_cast<long long>(pair));
        }
        prev = part.space;
        sum = first ? part.space : sum + part.space;
        first = false;
    }
    c.expected["dim"] = whole.space.dim();
    c.got["dim"] = sum.dim();
    c.got["part_dims"] = dims;
    c.got["adjacent_intersection_dims"] = inter;
    c.require(sum == whole.space, "sum of consecutive kernels differs from S_{i,j}");
    return c;
}

Check verify_first_kernel(const Composition& A) {
    if (A.n() < 2) throw UsageError("needs n >= 2");
    Submodule S = submodule_S(A, {1, 2});
    std::vector<int> label{A[2] - A[1] + 1};
    for (int l = 3; l <= A.n(); ++l) label.push_back(A[l]);
    Composition L(label);
    Check c;
    GradedCharacter expect = character_of(L);
    c.expected["module"] = L.a;
    c.expected["character"] = to_json(expect);
    c.got["character"] = to_json(S.space.character());
    c.shift = match_up_to_shift(S.space.character(), expect);
    c.require(c.shift.has_value(), "S_{1,2} differs from M^" + L.to_string());
    return c;
}

Check verify_equal_entries_kernel(const Composition& A, int i) {
    require_position(A, i);
    if (A[i] != A[i + 1]) throw UsageError("needs a_i = a_{i+1}");
    Submodule S = submodule_S(A, {i, i + 1});
    std::vector<int> label;
    for (int l = 1; l <= A.n(); ++l)
        if (l != i && l != i + 1) label.push_back(A[l]);
    Composition L(label);
    Check c;
    GradedCharacter expect = character_of(nonempty(L));
    c.expected["module"] = L.a;
    c.expected["character"] = to_json(expect);
    c.got["character"] = to_json(S.space.character());
    c.shift = match_up_to_shift(S.space.character(), expect);
    c.require(c.shift.has_value(), "S_{i,i+1} differs from M^" + L.to_string());
    return c;
}

Composition peel_label(const Composition& A, int i) {
    if (i < 2 || i >= A.n()) throw UsageError("peel label needs 1 < i < n");
    std::vector<int> out;
    for (int l = 1; l <= i - 2; ++l) out.push_back(A[l]);
    out.push_back(A[i - 1] - A[i] + A[i + 1]);
    for (int l = i + 2; l <= A.n(); ++l) out.push_back(A[l]);
    return sorted_copy(Composition(out));
}

FiltrationReport verify_filtration(const Composition& A, int i) {
    require_valid(A);
    require_position(A, i);
    FiltrationReport rep;
    Check& c = rep.check;
    Composition cur = A;
    long long total = 0;
    for (int guard = 0; guard < 10000; ++guard) {
        Submodule S = submodule_S(cur, {i, i + 1});
        GradedCharacter s_ch = S.space.character();
        bool all_ones = true;
        for (int l = 1; l < i; ++l) all_ones = all_ones && cur[l] == 1;
        if (all_ones || cur[i] == cur[i + 1]) {
            std::vector<int> label;
            std::string rule;
            if (all_ones) {
                rule = "all-ones";
                label.push_back(cur[i + 1] - cur[i] + 1);
                for (int l = i + 2; l <= cur.n(); ++l) label.push_back(cur[l]);
            } else {
                rule = "equal-entries";
                for (int l = 1; l <= cur.n(); ++l)
                    if (l != i && l != i + 1) label.push_back(cur[l]);
            }
            Composition L(label);
            auto shift = match_up_to_shift(s_ch, character_of(nonempty(L)));
            c.require(shift.has_value(), "S_{i,i+1}" + cur.to_string() + " differs from M^" + L.to_string());
            rep.steps.push_back({cur, L, static_cast<long long>(S.space.dim()), shift, rule});
            total += static_cast<long long>(S.space.dim());
            break;
        }
        // Peel off C[e].w_{a_i - 1}, isomorphic to M^{A_i}.
        Composition L = peel_label(cur, i);
        Element w = generators_w(*S.parent, i).front().w;
        Subspace span = cyclic_span(*S.parent, S.parent->e_operators(), {w});
        c.require(S.space.contains(span), "peeled span is not inside S_{i,i+1}" + cur.to_string());
        auto shift = match_up_to_shift(span.character(), character_of(L));
        c.require(shift.has_value(), "peeled span of " + cur.to_string() + " differs from M^" + L.to_string());
        rep.steps.push_back({cur, L, static_cast<long long>(span.dim()), shift, "peel"});
        total += static_cast<long long>(span.dim());

        Composition next = cur;
        next.a[static_cast<std::size_t>(i - 2)] -= 1;
        next.a[static_cast<std::size_t>(i - 1)] += 1;
        next = sorted_copy(next);
        Submodule S_next = submodule_S(next, {i, i + 1});
        auto qshift = match_up_to_shift(s_ch - span.character(), S_next.space.character());
        c.require(qshift.has_value(), "S_{i,i+1}" + cur.to_string() + " / M^" + L.to_string() +
                                          " differs from S_{i,i+1}" + next.to_string());
        cur = next;
    }
    Composition top = apply_move(A, {i, i + 1});
    long long top_dim = module_for(top)->character().total();
    rep.steps.push_back({A, top, top_dim, Bidegree{0, 0}, "top"});
    total += top_dim;

    Json labels = Json::array(), dims = Json::array();
    for (const auto& st : rep.steps) {
        labels.push_back(st.quotient.a);
        dims.push_back(st.dim);
    }
    c.got["quotients"] = labels;
    c.got["dims"] = dims;
    c.got["total"] = total;
    c.expected["total"] = A.product();
    c.require(total == A.product(), "filtration quotients do not add up to dim M^A");
    return rep;
}

std::pair<Composition, Composition> second_description_factors(const Composition& A, int i) {
    require_position(A, i);
    int n = A.n();
    std::vector<int> a1, a2;
    for (int l = 1; l < i; ++l) a1.push_back(A[l]);
    for (int t = 0; t < n - i - 1; ++t) a1.push_back(A[i]);
    for (int l = i + 1; l <= n; ++l) a2.push_back(A[l] - A[i] + 1);
    return {Composition(a1), Composition(a2)};
}

std::pair<Composition, Composition> emb_factors(const Composition& A, int i) {
    require_position(A, i);
    int n = A.n();
    std::vector<int> a1, a2;
    for (int l = 1; l < i; ++l) a1.push_back(A[l]);
    for (int t = 1; t <= n - i - 1; ++t) a1.push_back(A[i] + t);
    for (int k = 0; k <= n - i - 1; ++k) a2.push_back(A[i + 1 + k] - A[i] + 1 - k);
    return {Composition(a1), Composition(a2)};
}

bool emb_hypothesis(const Composition& A, int i) {
    for (int l = 1; l < A.n(); ++l)
        if (A[l + 1] <= A[l]) return false;
    for (int j = i + 1; j < A.n(); ++j)
        if (A[j + 1] - A[j] <= 1) return false;
    return true;
}

namespace {

Check compare_two_factor_span(const Composition& A, int i, const Composition& X, const Composition& Y) {
    int n = A.n();
    int len = std::max({X.n(), Y.n(), 1});
    Composition Xp = X.padded(len), Yp = Y.padded(len);
    require_valid(Xp);
    require_valid(Yp);
    TensorModule T({module_for(Xp), module_for(Yp)});
    std::vector<Operator> ops;
    for (int j = 0; j <= n - 3; ++j) ops.push_back(T.e_diagonal(j));
    Operator e2 = T.e_factor(1, n - i - 1);
    ops.push_back(e2);
    Subspace span = cyclic_span(T, ops, {T.cyclic_vector()});
    Submodule S = submodule_S(A, {i, i + 1});

    Check c;
    c.expected["factors"] = Json::array({X.a, Y.a});
    c.expected["dim"] = S.space.dim();
    c.got["dim"] = span.dim();
    c.expected["character"] = to_json(S.space.character());
    c.got["character"] = to_json(span.character());
    c.shift = match_up_to_shift(S.space.character(), span.character());
    c.require(c.shift.has_value(), "span character differs from S_{i,i+1}");
    if (c.shift) {
        Bidegree w_deg = *generators_w(*S.parent, i).front().w.bidegree();
        c.got["lowest_generator"] = to_json(w_deg);
        c.require(*c.shift == w_deg, "shift differs from the bidegree of the first generator");
    }
    // The second-factor operator is nilpotent of order a_{i+1} - a_i + 1 on the cyclic vector.
    int order = A[i + 1] - A[i] + 1;
    Element x = T.cyclic_vector();
    int N = 0;
    while (!x.is_zero() && N <= order) {
        x = apply(e2, x);
        ++N;
    }
    c.expected["second_factor_order"] = order;
    c.got["second_factor_order"] = N;
    c.require(N == order, "second-factor operator has the wrong nilpotency order");
    return c;
}

}  // namespace

Check verify_second_description(const Composition& A, int i) {
    require_valid(A);
    require_position(A, i);
    if (A[i] >= A[i + 1]) throw UsageError("second description needs a_i < a_{i+1}");
    auto [X, Y] = second_description_factors(A, i);
    return compare_two_factor_span(A, i, X, Y);
}

Check verify_emb(const Composition& A, int i) {
    require_valid(A);
    require_position(A, i);
    if (!emb_hypothesis(A, i))
        throw UsageError("embedding needs strictly increasing entries with gaps > 1 after position i: " +
                         A.to_string());
    auto [X, Y] = emb_factors(A, i);
    return compare_two_factor_span(A, i, X, Y);
}

Check verify_inductive_description(const Composition& A, int i) {
    require_valid(A);
    require_position(A, i);
    int n = A.n();
    Submodule S = submodule_S(A, {i, i + 1});
    Check c;
    if (i < n - 1) {
        Composition small = slice(A, 1, n - 1);
        Submodule S_small = submodule_S(small, {i, i + 1});
        std::vector<Element> seeds;
        for (const auto& [b, rs] : S_small.space.pieces())
            for (const Vec& v : rs.basis()) seeds.push_back(demazure_image(*S.parent, *S_small.parent, b, v));
        Subspace span = cyclic_span(*S.parent, {S.parent->e(0)}, seeds);
        c.expected["character"] = to_json(S.space.character());
        c.got["character"] = to_json(span.character());
        c.require(span == S.space, "C[e_0] applied to the embedded smaller kernel differs from S_{i,i+1}");
        return c;
    }
    Composition head = nonempty(slice(A, 1, n - 2));
    int len = A[n] - A[n - 1] + 1;
    GradedCharacter string;
    for (int t = 0; t < len; ++t) string.add({t, 0}, 1);
    GradedCharacter expect = character_of(head) * string;
    c.expected["character"] = to_json(expect);
    c.got["character"] = to_json(S.space.character());
    c.expected["dim"] = expect.total();
    c.got["dim"] = S.space.dim();
    c.shift = match_up_to_shift(S.space.character(), expect);
    c.require(c.shift.has_value(), "S_{n-1,n} differs from the tensor product character");
    return c;
}

Check nilpotency_e1(const Composition& A) {
    require_valid(A);
    if (A.n() < 2) throw UsageError("needs n >= 2");
    ModulePtr M = module_for(A);
    Element x = M->cyclic_vector();
    Element last = x;
    int N = 0;
    while (!x.is_zero()) {
        last = x;
        x = apply(M->e(1), x);
        ++N;
    }
    int head = 0;
    for (int l = 1; l < A.n(); ++l) head += A[l];
    Check c;
    c.expected["N"] = head - A.n() + 2;
    c.expected["N_as_printed"] = head - A.n() + 1;
    c.got["N"] = N;
    c.got["as_printed_holds"] = N == head - A.n() + 1;
    c.require(N == head - A.n() + 2, "e_1 nilpotency order differs from 1 + top degree of M^(a_1..a_{n-1})");
    // e_1^{N-1} v_A spans the top piece of the Demazure submodule.
    Composition small = nonempty(slice(A, 1, A.n() - 1));
    Bidegree top = module_for(small)->top_bidegree();
    Bidegree expect_deg{top.k, top.s + top.k};
    auto deg = last.bidegree();
    c.got["l_bidegree"] = deg ? to_json(*deg) : Json();
    c.require(deg && *deg == expect_deg, "e_1^{N-1} v_A is not in the top piece of the Demazure submodule");
    return c;
}

}  // namespace fusion
