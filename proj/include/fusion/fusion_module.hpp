#pragma once

// The bigraded quotient M^A = Q[e_0..e_{n-1}] / I_A.

#include "fusion/composition.hpp"
#include "fusion/graded.hpp"
#include "fusion/linalg.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fusion {

// Coefficient of z^s in e_(n)(z)^k, where e_(n)(z) = sum_i e_i z^{n-1-i}.
// Bihomogeneous of bidegree (k, k(n-1) - s).
Polynomial power_coefficient(int n, int k, int s);

struct IdealGenerator {
    int k;
    int s;  // z-exponent
    Polynomial poly;
};

// Coefficients of z^s in e_(n)(z)^k for s < N_A(k), 1 <= k <= 1 + top_degree.
std::vector<IdealGenerator> ideal_generators(const Composition& A);

class FusionModule : public GradedSpace {
public:
    // Builds the quotient degree by degree; throws IntegrityError if the
    // dimension is not prod a_i or the band above the top degree is nonzero.
    explicit FusionModule(Composition A);

    const Composition& composition() const { return A_; }
    int nvars() const { return A_.n(); }

    std::vector<Bidegree> support() const override;
    std::size_t piece_dim(Bidegree b) const override;
    // Standard monomials of the piece; their classes form its basis.
    const std::vector<Monomial>& basis(Bidegree b) const;

    // e_j on a vector of piece b; empty result if piece b + (1, j) is zero.
    Vec apply_e(int j, Bidegree b, const Vec& v) const;
    Operator e(int j) const;
    std::vector<Operator> e_operators() const;

    Element cyclic_vector() const;
    Bidegree top_bidegree() const;
    Element top_vector() const;
    Element class_of(const Monomial& m) const;
    Element act(const Polynomial& p, const Element& x) const;
    Element normal_form(const Polynomial& p) const { return act(p, cyclic_vector()); }

    int lowest_h0() const { return -A_.top_degree(); }
    int h0(Bidegree b) const { return lowest_h0() + 2 * b.k; }

    std::string serialize() const;
    static std::shared_ptr<FusionModule> deserialize(std::string_view text);

private:
    FusionModule() = default;

    struct Piece {
        std::vector<Monomial> basis;
        // up[j]: matrix of e_j from this piece to piece + (1, j); 0x0 when that piece is zero.
        std::vector<Matrix> up;
    };

    const Piece* find(Bidegree b) const;

    Composition A_;
    std::map<Bidegree, Piece> pieces_;
};

using ModulePtr = std::shared_ptr<const FusionModule>;

}  // namespace fusion
