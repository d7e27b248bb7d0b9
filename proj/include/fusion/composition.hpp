#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fusion {

// A = (a_1, ..., a_n). Positions in the public API are 1-based, as in A_{i,j}.
struct Composition {
    std::vector<int> a;

    Composition() = default;
    Composition(std::initializer_list<int> xs) : a(xs) {}
    explicit Composition(std::vector<int> xs) : a(std::move(xs)) {}

    int n() const { return static_cast<int>(a.size()); }
    int operator[](int i) const { return a[static_cast<std::size_t>(i - 1)]; }
    bool sorted() const;
    bool positive() const;
    // Sum of (a_j - 1): the top e-degree of M^A.
    int top_degree() const;
    // N_A(k) = sum_j (k + 1 - a_j)_+.
    int N(int k) const;
    long long product() const;
    // (1, ..., 1, a_1, ..., a_n) of length len.
    Composition padded(int len) const;
    std::string to_string() const;

    bool operator==(const Composition&) const = default;
    auto operator<=>(const Composition&) const = default;
};

// Throws UsageError unless every entry is >= 1 and the entries are nondecreasing.
void require_valid(const Composition& A);

// Parses "2,3,4". An empty string gives the empty composition.
Composition parse_composition(std::string_view text);

// All nondecreasing compositions of length n with entries in [1, max_entry].
std::vector<Composition> sorted_compositions(int n, int max_entry);

}  // namespace fusion
