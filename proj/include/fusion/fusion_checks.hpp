#pragma once

// Structural checks on single fusion modules and on tensor products.

#include "fusion/check.hpp"
#include "fusion/composition.hpp"
#include "fusion/fusion_module.hpp"
#include "fusion/tensor_module.hpp"

namespace fusion {

// Character of M^A; the zero module when some entry is 0. Entries are
// sorted first, which is harmless because the ideal is symmetric in A.
GradedCharacter character_of(const Composition& A);

// Embedding of M^{(a_1..a_{n-1})} into M^A via e_j -> e_{j+1}, v -> v_A.
// Fails if some relation of the small module does not vanish on v_A.
Element demazure_image(const FusionModule& big, const FusionModule& small, Bidegree b, const Vec& v);

// Span of e_1..e_{n-1} on v_A versus M^{(a_1..a_{n-1})} (sheared by one),
// and the quotient versus M^{(a_1,..,a_{n-1},a_n - 1)}.
Check verify_demazure(const Composition& A);

// Smallest N with e_0^N v_A = 0, expected 1 + sum (a_j - 1).
Check verify_e0_nilpotency(const Composition& A);

// M^{(1, a_2, ..., a_n)} against M^{(a_2, ..., a_n)}.
Check verify_deletion_of_ones(const Composition& tail);

// C = (a_1, .., a_{n-m}, a_{n-m+1} + b_1 - 1, ..., a_n + b_m - 1).
Composition tensor_target(const Composition& A, const Composition& B);

// Diagonal e-span of v_A (x) v_B against M^C.
Check verify_tensor_embedding(const Composition& A, const Composition& B);

}  // namespace fusion
