#pragma once

#include "fusion/fusion_module.hpp"

#include <vector>

namespace fusion {

// M^{A_1} (x) ... (x) M^{A_m} with bidegrees adding across factors.
// Piece b is the direct sum of blocks b_1 (x) ... (x) b_m with sum b_f = b,
// each block laid out row-major in the factor bases.
class TensorModule : public GradedSpace {
public:
    // All factors must have the same number of variables.
    explicit TensorModule(std::vector<ModulePtr> factors);

    std::size_t factor_count() const { return factors_.size(); }
    const FusionModule& factor(std::size_t f) const { return *factors_[f]; }
    int nvars() const { return n_; }

    std::vector<Bidegree> support() const override;
    std::size_t piece_dim(Bidegree b) const override;

    // e_j acting on factor f only.
    Operator e_factor(std::size_t f, int j) const;
    // Sum over factors of e_j.
    Operator e_diagonal(int j) const;
    std::vector<Operator> diagonal_operators() const;

    // v_{A_1} (x) ... (x) v_{A_m}.
    Element cyclic_vector() const;
    // Pure tensor of homogeneous factor elements.
    Element pure(const std::vector<Element>& parts) const;

private:
    struct Block {
        std::vector<Bidegree> degs;
        std::vector<std::size_t> dims;
        std::vector<std::size_t> strides;
        std::size_t offset = 0;
        std::size_t size = 1;
    };
    struct Piece {
        std::vector<Block> blocks;
        std::size_t dim = 0;
    };

    const Block* find_block(Bidegree total, const std::vector<Bidegree>& degs) const;
    Vec apply_factor(std::size_t f, int j, Bidegree b, const Vec& v) const;

    std::vector<ModulePtr> factors_;
    int n_ = 0;
    std::map<Bidegree, Piece> pieces_;
};

}  // namespace fusion
