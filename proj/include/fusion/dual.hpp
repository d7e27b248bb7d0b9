#pragma once

// Dual realization: symmetric polynomials in s variables, degree < n in each,
// with the diagonal divisibility constraints of A. Used as an independent
// oracle for the characters of M^A.

#include "fusion/check.hpp"
#include "fusion/composition.hpp"
#include "fusion/linalg.hpp"

#include <map>
#include <vector>

namespace fusion {

// Exponent multiset as a count vector: c[j] = number of variables with exponent j.
using CountVector = std::vector<int>;

// Symmetric polynomial in the monomial symmetric basis m_c.
struct SymPoly {
    int n = 1;  // per-variable degree bound
    int s = 0;  // number of variables
    std::map<CountVector, Scalar> coeffs;

    void add(const CountVector& c, const Scalar& x);
    bool is_zero() const { return coeffs.empty(); }
    // Total degree if homogeneous, else -1 (zero polynomial gives 0).
    int degree() const;
    bool operator==(const SymPoly&) const = default;
};

// All count vectors with n slots, total s and weighted sum d.
std::vector<CountVector> count_vectors(int n, int s, int d);

// True if f meets every constraint of A in its number of variables.
bool satisfies_constraints(const Composition& A, const SymPoly& f);

class SymPolySpace {
public:
    Composition A;
    int s = 0;
    int n = 1;
    // Solution basis for each total degree d.
    std::map<int, std::vector<SymPoly>> by_degree;

    std::size_t dim() const;
    std::size_t dim(int d) const;
};

SymPolySpace dual_space(const Composition& A, int s);

// (s, d) -> (s, s(n-1) - d): z^i pairs with e_{n-1-i}.
GradedCharacter oracle_character(const Composition& A);

// Sum over shuffles of f(z_sigma) g(z_tau); on the monomial basis
// m_a * m_b -> prod_j C(a_j + b_j, a_j) m_{a+b}.
SymPoly shuffle_product(const SymPoly& f, const SymPoly& g);

// A(k) = (k a_1 - k + 1, ..., k a_n - k + 1).
Composition scaled(const Composition& A, int k);

// Dimension of the k-th component against prod (k a_i - k + 1); with
// check_generation, shuffle products of k degree-one elements must satisfy
// the A(k) constraints and span the component.
Check coordinate_ring_component(const Composition& A, int k, bool check_generation);

}  // namespace fusion
