#pragma once

// Kernels S_{i,j}(A) of the natural surjections M^A -> M^{A_{i,j}} and the
// three descriptions of S_{i,i+1}(A). Positions i, j are 1-based.

#include "fusion/check.hpp"
#include "fusion/composition.hpp"
#include "fusion/fusion_module.hpp"

#include <vector>

namespace fusion {

struct IndexMove {
    int i;
    int j;
};

// A_{i,j}: one unit moved from a_i to a_j. Rejects bad positions, and
// results that are unsorted or contain a zero.
Composition apply_move(const Composition& A, IndexMove mv);

// Bidegree-preserving map, one block (target dim x source dim) per source piece.
struct GradedLinearMap {
    std::map<Bidegree, Matrix> blocks;
    Vec apply(Bidegree b, const Vec& v) const;
    std::size_t rank() const;
};

struct QuotientMap {
    ModulePtr source;
    ModulePtr target;
    GradedLinearMap map;
};

// Sends the class of each monomial to its class. Throws IntegrityError if a
// generator of I_A survives in the target or the map is not onto.
QuotientMap quotient_map(const Composition& A, IndexMove mv);

struct Submodule {
    ModulePtr parent;
    Subspace space;
    std::vector<Element> generators;
};

Submodule kernel_submodule(const QuotientMap& q);

// (prod_{l != i, i+1} a_l) (a_{i+1} - a_i + 1).
long long kernel_dim_formula(const Composition& A, int i);

// S_{i,j}(A); for j = i + 1 the dimension formula is enforced (IntegrityError).
Submodule submodule_S(const Composition& A, IndexMove mv);

struct GeneratorW {
    int j;
    Element w;
};

// w_j = coefficient of z^{N_A(j)} in e_(n)(z)^j applied to v_A, j = a_i - 1 .. a_{i+1} - 1.
std::vector<GeneratorW> generators_w(const FusionModule& M, int i);

// Character of M^A equals that of S_{i,i+1}(A) plus that of M^{A_{i,i+1}};
// kernel dimension formula; closure of S under every e_l.
Check verify_exactness(const Composition& A, int i);

// Each w_j lies in S_{i,i+1}(A) and together they generate it.
Check verify_generators(const Composition& A, int i);

// S_{i,j} = S_{i,i+1} + ... + S_{j-1,j}, with the pairwise intersection
// dimensions reported.
Check verify_sum_decomposition(const Composition& A, IndexMove mv);

// S_{1,2}(A) against M^{(a_2 - a_1 + 1, a_3, ..., a_n)}.
Check verify_first_kernel(const Composition& A);

// If a_i = a_{i+1}: S_{i,i+1}(A) against M^{(a_1..a_{i-1}, a_{i+2}..a_n)}.
Check verify_equal_entries_kernel(const Composition& A, int i);

struct FiltrationStep {
    Composition ambient;   // the composition whose S_{i,i+1} is being peeled
    Composition quotient;  // label of the fusion module split off at this step
    long long dim = 0;
    std::optional<Bidegree> shift;
    std::string rule;      // "peel", "all-ones", "equal-entries" or "top"
};

struct FiltrationReport {
    Check check;
    std::vector<FiltrationStep> steps;
};

// A_i = (a_1, .., a_{i-2}, a_{i-1} - a_i + a_{i+1}, a_{i+2}, .., a_n), sorted.
Composition peel_label(const Composition& A, int i);

// Peels M^{A_i} off S_{i,i+1}(A) repeatedly, then appends M^{A_{i,i+1}}.
FiltrationReport verify_filtration(const Composition& A, int i);

// A' = (a_1..a_{i-1}, a_i repeated n-i-1 times), A'' = (a_{i+1}-a_i+1, .., a_n-a_i+1).
std::pair<Composition, Composition> second_description_factors(const Composition& A, int i);
// A_1 = (a_1..a_{i-1}, a_i+1, .., a_i+n-i-1), A_2[k] = a_{i+1+k} - a_i + 1 - k.
std::pair<Composition, Composition> emb_factors(const Composition& A, int i);
// Strictly increasing with gaps > 1 after position i.
bool emb_hypothesis(const Composition& A, int i);

// Cyclic span of v (x) v in M^{X} (x) M^{Y} under diagonal e_0..e_{n-3} and
// e_{n-i-1} on the second factor, compared to S_{i,i+1}(A).
Check verify_second_description(const Composition& A, int i);
Check verify_emb(const Composition& A, int i);

// i < n-1: S_{i,i+1}(A) = C[e_0] . image of S_{i,i+1}(a_1..a_{n-1}).
// i = n-1: character of S equals M^{(a_1..a_{n-2})} times a string of length a_n - a_{n-1} + 1.
Check verify_inductive_description(const Composition& A, int i);

// Smallest N with e_1^N v_A = 0, compared against sum_{j<n} a_j - n + 2
// (the top degree of M^{(a_1..a_{n-1})} plus one); the exponent as printed
// with "+1" is reported alongside.
Check nilpotency_e1(const Composition& A);

}  // namespace fusion
