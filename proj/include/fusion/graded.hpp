#pragma once

// Bigraded bookkeeping shared by fusion modules, tensor modules and their
// subspaces: bidegrees, characters, homogeneous operators, cyclic spans.

#include "fusion/linalg.hpp"

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fusion {

// (k, s): e-degree and t-weight.
struct Bidegree {
    int k = 0;
    int s = 0;
    auto operator<=>(const Bidegree&) const = default;
    Bidegree operator+(const Bidegree& o) const { return {k + o.k, s + o.s}; }
    Bidegree operator-(const Bidegree& o) const { return {k - o.k, s - o.s}; }
    std::string to_string() const;
};

class GradedCharacter {
public:
    using Table = std::map<Bidegree, long long>;

    GradedCharacter() = default;
    explicit GradedCharacter(Table t);

    const Table& table() const { return table_; }
    long long at(Bidegree b) const;
    long long total() const;
    bool empty() const { return table_.empty(); }
    // Lowest nonzero bidegree in (k, s) order.
    std::optional<Bidegree> lowest() const;

    void add(Bidegree b, long long d);
    GradedCharacter shifted(Bidegree by) const;
    // (k, s) -> (k, s + slope * k).
    GradedCharacter sheared(int slope) const;
    GradedCharacter operator+(const GradedCharacter& o) const;
    GradedCharacter operator-(const GradedCharacter& o) const;
    // Product of characters, as for a tensor product of graded spaces.
    GradedCharacter operator*(const GradedCharacter& o) const;
    bool operator==(const GradedCharacter& o) const { return table_ == o.table_; }

    // Polynomial in the markers u (degree) and q (weight), e.g. "1 + u + u*q + u^2".
    std::string to_string() const;

private:
    Table table_;
};

// If b.shifted(d) == a for d = lowest(a) - lowest(b), returns d.
std::optional<Bidegree> match_up_to_shift(const GradedCharacter& a, const GradedCharacter& b);

// Homogeneous element: one coordinate vector per bidegree.
struct Element {
    std::map<Bidegree, Vec> parts;

    bool is_zero() const;
    // Drops zero components.
    void prune();
    std::optional<Bidegree> bidegree() const;
};

// Linear operator homogeneous of a fixed bidegree shift.
struct Operator {
    std::string name;
    Bidegree shift;
    // Maps a vector in piece b to a vector in piece b + shift (empty if that piece is zero).
    std::function<Vec(Bidegree, const Vec&)> apply;
};

Element apply(const Operator& op, const Element& x);

class GradedSpace {
public:
    virtual ~GradedSpace() = default;
    // Nonzero pieces in ascending order.
    virtual std::vector<Bidegree> support() const = 0;
    virtual std::size_t piece_dim(Bidegree b) const = 0;

    GradedCharacter character() const;
    std::size_t total_dim() const;
};

// Graded subspace of a GradedSpace: one RowSpace per bidegree.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(const GradedSpace& ambient);

    std::size_t dim() const;
    std::size_t piece_dim(Bidegree b) const;
    GradedCharacter character() const;
    const std::map<Bidegree, RowSpace>& pieces() const { return pieces_; }

    bool insert(Bidegree b, const Vec& v);
    bool insert(const Element& x);
    bool contains(const Element& x) const;
    bool contains(const Subspace& other) const;
    // Every basis vector of every piece is mapped back into the subspace.
    bool closed_under(const Operator& op) const;
    Subspace operator+(const Subspace& other) const;
    bool operator==(const Subspace& other) const;

private:
    std::map<Bidegree, std::size_t> ambient_;
    std::map<Bidegree, RowSpace> pieces_;
};

// Smallest subspace containing the seeds and stable under the operators.
// Operators must raise the bidegree strictly; seeds must be homogeneous.
Subspace cyclic_span(const GradedSpace& ambient, const std::vector<Operator>& ops,
                     const std::vector<Element>& seeds);

}  // namespace fusion
