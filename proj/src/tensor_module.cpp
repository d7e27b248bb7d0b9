#include "fusion/tensor_module.hpp"

#include "fusion/errors.hpp"

namespace fusion {

TensorModule::TensorModule(std::vector<ModulePtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw UsageError("tensor product of no factors");
    n_ = factors_.front()->nvars();
    for (const auto& f : factors_)
        if (f->nvars() != n_)
            throw UsageError("tensor factors must share n; pad " + f->composition().to_string() + " with leading 1s");

    // Enumerate every combination of factor pieces.
    std::vector<std::vector<Bidegree>> supports;
    for (const auto& f : factors_) supports.push_back(f->support());
    std::vector<std::size_t> idx(factors_.size(), 0);
    while (true) {
        Block blk;
        Bidegree total;
        for (std::size_t f = 0; f < factors_.size(); ++f) {
            Bidegree d = supports[f][idx[f]];
            blk.degs.push_back(d);
            blk.dims.push_back(factors_[f]->piece_dim(d));
            total = total + d;
        }
        blk.strides.assign(factors_.size(), 1);
        for (std::size_t f = factors_.size(); f-- > 1;) blk.strides[f - 1] = blk.strides[f] * blk.dims[f];
        blk.size = blk.strides[0] * blk.dims[0];
        Piece& p = pieces_[total];
        blk.offset = p.dim;
        p.dim += blk.size;
        p.blocks.push_back(std::move(blk));

        std::size_t f = factors_.size();
        while (f > 0) {
            --f;
            if (++idx[f] < supports[f].size()) break;
            idx[f] = 0;
            if (f == 0) return;
        }
    }
}

std::vector<Bidegree> TensorModule::support() const {
    std::vector<Bidegree> out;
    for (const auto& [b, p] : pieces_) out.push_back(b);
    return out;
}

std::size_t TensorModule::piece_dim(Bidegree b) const {
    auto it = pieces_.find(b);
    return it == pieces_.end() ? 0 : it->second.dim;
}

const TensorModule::Block* TensorModule::find_block(Bidegree total, const std::vector<Bidegree>& degs) const {
    auto it = pieces_.find(total);
    if (it == pieces_.end()) return nullptr;
    for (const Block& b : it->second.blocks)
        if (b.degs == degs) return &b;
    return nullptr;
}

Vec TensorModule::apply_factor(std::size_t f, int j, Bidegree b, const Vec& v) const {
    auto pit = pieces_.find(b);
    if (pit == pieces_.end()) return {};
    const Bidegree shift{1, j};
    Bidegree target = b + shift;
    std::size_t tdim = piece_dim(target);
    if (tdim == 0) return {};
    Vec out(tdim);
    const FusionModule& M = *factors_[f];
    for (const Block& src : pit->second.blocks) {
        std::vector<Bidegree> tdegs = src.degs;
        tdegs[f] = tdegs[f] + shift;
        const Block* dst = find_block(target, tdegs);
        if (!dst) continue;
        // View the block as (outer, dim_f, inner) and apply e_j along the middle axis.
        std::size_t inner = src.strides[f];
        std::size_t outer = src.size / (src.dims[f] * inner);
        std::size_t dfs = src.dims[f], dft = dst->dims[f];
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t in = 0; in < inner; ++in) {
                Vec fiber(dfs);
                bool nz = false;
                for (std::size_t c = 0; c < dfs; ++c) {
                    fiber[c] = v[src.offset + (o * dfs + c) * inner + in];
                    if (sgn(fiber[c]) != 0) nz = true;
                }
                if (!nz) continue;
                Vec img = M.apply_e(j, src.degs[f], fiber);
                if (img.empty()) continue;
                for (std::size_t c = 0; c < dft; ++c)
                    if (sgn(img[c]) != 0) out[dst->offset + (o * dft + c) * inner + in] += img[c];
            }
    }
    return out;
}

Operator TensorModule::e_factor(std::size_t f, int j) const {
    if (f >= factors_.size() || j < 0 || j >= n_) throw UsageError("tensor operator index out of range");
    return Operator{"e" + std::to_string(j) + "^(" + std::to_string(f + 1) + ")", {1, j},
                    [this, f, j](Bidegree b, const Vec& v) { return apply_factor(f, j, b, v); }};
}

Operator TensorModule::e_diagonal(int j) const {
    if (j < 0 || j >= n_) throw UsageError("tensor operator index out of range");
    return Operator{"e" + std::to_string(j), {1, j}, [this, j](Bidegree b, const Vec& v) {
                        Vec sum;
                        for (std::size_t f = 0; f < factors_.size(); ++f) {
                            Vec part = apply_factor(f, j, b, v);
                            if (part.empty()) continue;
                            if (sum.empty())
                                sum = std::move(part);
                            else
                                for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part[i];
                        }
                        return sum;
                    }};
}

std::vector<Operator> TensorModule::diagonal_operators() const {
    std::vector<Operator> ops;
    for (int j = 0; j < n_; ++j) ops.push_back(e_diagonal(j));
    return ops;
}

Element TensorModule::cyclic_vector() const {
    std::vector<Element> parts;
    for (const auto& f : factors_) parts.push_back(f->cyclic_vector());
    return pure(parts);
}

Element TensorModule::pure(const std::vector<Element>& parts) const {
    if (parts.size() != factors_.size()) throw UsageError("pure tensor needs one element per factor");
    std::vector<Bidegree> degs;
    std::vector<const Vec*> vecs;
    Bidegree total;
    for (const Element& x : parts) {
        auto b = x.bidegree();
        if (!b) {
            if (x.is_zero()) return Element{};
            throw UsageError("pure tensor of a non-homogeneous element");
        }
        degs.push_back(*b);
        vecs.push_back(&x.parts.at(*b));
        total = total + *b;
    }
    const Block* blk = find_block(total, degs);
    if (!blk) return Element{};
    Vec v(piece_dim(total));
    std::vector<std::size_t> idx(parts.size(), 0);
    for (std::size_t lin = 0; lin < blk->size; ++lin) {
        std::size_t rem = lin;
        Scalar c = 1;
        for (std::size_t f = 0; f < parts.size(); ++f) {
            std::size_t i = rem / blk->strides[f];
            rem %= blk->strides[f];
            c *= (*vecs[f])[i];
            if (sgn(c) == 0) break;
        }
        v[blk->offset + lin] = c;
    }
    Element out;
    out.parts[total] = std::move(v);
    out.prune();
    return out;
}

}  // namespace fusion
