#include "fusion/fusion_checks.hpp"

#include "fusion/errors.hpp"
#include "fusion/registry.hpp"

#include <algorithm>

namespace fusion {

GradedCharacter character_of(const Composition& A) {
    Composition B = A;
    std::sort(B.a.begin(), B.a.end());
    if (!B.a.empty() && B.a.front() <= 0) return GradedCharacter{};
    if (B.a.empty()) B.a.push_back(1);
    return module_for(B)->character();
}

namespace {

Composition drop_last(const Composition& A) {
    Composition B(std::vector<int>(A.a.begin(), A.a.end() - 1));
    if (B.a.empty()) B.a.push_back(1);
    return B;
}

}  // namespace

Element demazure_image(const FusionModule& big, const FusionModule& small, Bidegree b, const Vec& v) {
    const auto& basis = small.basis(b);
    if (basis.size() != v.size()) throw UsageError("demazure_image: vector does not match the piece");
    Polynomial p(small.nvars());
    for (std::size_t t = 0; t < v.size(); ++t) p.add_term(basis[t], v[t]);
    return big.normal_form(p.shift_indices(1, big.nvars()));
}

Check verify_demazure(const Composition& A) {
    require_valid(A);
    if (A.n() < 2) throw UsageError("demazure check needs n >= 2");
    Check c;
    ModulePtr M = module_for(A);
    Composition small_A = drop_last(A);
    ModulePtr small = module_for(small_A);
    // The small module has n-1 variables unless it was padded from empty.
    if (small->nvars() == A.n() - 1) {
        for (const IdealGenerator& g : ideal_generators(small_A)) {
            Element img = M->normal_form(g.poly.shift_indices(1, A.n()));
            c.require(img.is_zero(), "shifted relation of M^" + small_A.to_string() + " at " +
                                         Bidegree{g.k, g.s}.to_string() + " survives on v_A");
        }
    }

    std::vector<Operator> ops;
    for (int j = 1; j < A.n(); ++j) ops.push_back(M->e(j));
    Subspace span = cyclic_span(*M, ops, {M->cyclic_vector()});
    GradedCharacter span_ch = span.character();
    GradedCharacter small_ch = small->character().sheared(1);
    c.expected["span"] = to_json(small_ch);
    c.got["span"] = to_json(span_ch);
    c.require(span_ch == small_ch, "span of e_1..e_{n-1} differs from the sheared M^" + small_A.to_string());

    Composition quot_A = A;
    quot_A.a.back() -= 1;
    GradedCharacter quot_expected = character_of(quot_A);
    GradedCharacter quot = M->character() - span_ch;
    c.got["quotient"] = to_json(quot);
    c.expected["quotient"] = to_json(quot_expected);
    c.got["span_dim"] = span.dim();
    c.got["quotient_dim"] = quot.total();
    auto shift = match_up_to_shift(quot, quot_expected);
    if (shift) {
        c.shift = shift;
    } else {
        c.fail("quotient character differs from M^" + quot_A.to_string() + " up to shift");
    }
    return c;
}

Check verify_e0_nilpotency(const Composition& A) {
    require_valid(A);
    ModulePtr M = module_for(A);
    Element x = M->cyclic_vector();
    int N = 0;
    while (!x.is_zero()) {
        x = apply(M->e(0), x);
        ++N;
    }
    Check c;
    c.expected["N"] = 1 + A.top_degree();
    c.got["N"] = N;
    c.require(N == 1 + A.top_degree(), "e_0 nilpotency order differs");
    return c;
}

Check verify_deletion_of_ones(const Composition& tail) {
    require_valid(tail);
    Composition with_one = tail.padded(tail.n() + 1);
    Check c;
    GradedCharacter a = module_for(with_one)->character();
    GradedCharacter b = module_for(tail)->character();
    c.expected["character"] = to_json(b);
    c.got["character"] = to_json(a);
    c.shift = match_up_to_shift(a, b);
    c.require(c.shift.has_value(), "M^" + with_one.to_string() + " and M^" + tail.to_string() + " differ");
    return c;
}

Composition tensor_target(const Composition& A, const Composition& B) {
    if (B.n() > A.n()) throw UsageError("tensor_target needs |A| >= |B|");
    Composition C = A;
    int off = A.n() - B.n();
    for (int t = 0; t < B.n(); ++t) C.a[static_cast<std::size_t>(off + t)] += B.a[static_cast<std::size_t>(t)] - 1;
    return C;
}

Check verify_tensor_embedding(const Composition& A, const Composition& B) {
    require_valid(A);
    require_valid(B);
    Composition C = tensor_target(A, B);
    Composition Bp = B.padded(A.n());
    TensorModule T({module_for(A), module_for(Bp)});
    Subspace span = cyclic_span(T, T.diagonal_operators(), {T.cyclic_vector()});
    Check c;
    c.expected["dim"] = C.product();
    c.got["dim"] = span.dim();
    c.expected["C"] = C.a;
    c.require(static_cast<long long>(span.dim()) == C.product(), "span dimension differs from prod c_i");
    GradedCharacter target = module_for(C)->character();
    auto shift = match_up_to_shift(span.character(), target);
    c.shift = shift;
    c.require(shift.has_value(), "span character differs from M^" + C.to_string());
    return c;
}

}  // namespace fusion
