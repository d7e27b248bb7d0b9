#include "fusion/composition.hpp"

#include "fusion/errors.hpp"

#include <algorithm>
#include <charconv>

namespace fusion {

bool Composition::sorted() const { return std::is_sorted(a.begin(), a.end()); }

bool Composition::positive() const {
    return std::all_of(a.begin(), a.end(), [](int x) { return x >= 1; });
}

int Composition::top_degree() const {
    int t = 0;
    for (int x : a) t += x - 1;
    return t;
}

int Composition::N(int k) const {
    int t = 0;
    for (int x : a) t += std::max(0, k + 1 - x);
    return t;
}

long long Composition::product() const {
    long long p = 1;
    for (int x : a) p *= x;
    return p;
}

Composition Composition::padded(int len) const {
    if (len < n()) throw UsageError("cannot pad " + to_string() + " to length " + std::to_string(len));
    std::vector<int> out(static_cast<std::size_t>(len - n()), 1);
    out.insert(out.end(), a.begin(), a.end());
    return Composition(std::move(out));
}

std::string Composition::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + ")";
}

void require_valid(const Composition& A) {
    if (!A.positive()) throw UsageError("composition entries must be positive: " + A.to_string());
    if (!A.sorted()) throw UsageError("composition must be nondecreasing: " + A.to_string());
}

Composition parse_composition(std::string_view text) {
    Composition A;
    std::size_t pos = 0;
    if (text.empty()) return A;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view tok = text.substr(pos, end - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        int v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
            throw UsageError("bad composition entry '" + std::string(tok) + "'");
        A.a.push_back(v);
        pos = end + 1;
    }
    return A;
}

namespace {

void rec(int n, int lo, int hi, std::vector<int>& cur, std::vector<Composition>& out) {
    if (static_cast<int>(cur.size()) == n) {
        out.emplace_back(cur);
        return;
    }
    for (int v = lo; v <= hi; ++v) {
        cur.push_back(v);
        rec(n, v, hi, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Composition> sorted_compositions(int n, int max_entry) {
    std::vector<Composition> out;
    std::vector<int> cur;
    rec(n, 1, max_entry, cur, out);
    return out;
}

}  // namespace fusion
