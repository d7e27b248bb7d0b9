#include "fusion/graded.hpp"

#include "fusion/errors.hpp"

#include <sstream>

namespace fusion {

std::string Bidegree::to_string() const {
    return "(" + std::to_string(k) + "," + std::to_string(s) + ")";
}

GradedCharacter::GradedCharacter(Table t) {
    for (auto& [b, d] : t) add(b, d);
}

long long GradedCharacter::at(Bidegree b) const {
    auto it = table_.find(b);
    return it == table_.end() ? 0 : it->second;
}

long long GradedCharacter::total() const {
    long long t = 0;
    for (const auto& [b, d] : table_) t += d;
    return t;
}

std::optional<Bidegree> GradedCharacter::lowest() const {
    if (table_.empty()) return std::nullopt;
    return table_.begin()->first;
}

void GradedCharacter::add(Bidegree b, long long d) {
    if (d == 0) return;
    long long& slot = table_[b];
    slot += d;
    if (slot == 0) table_.erase(b);
}

GradedCharacter GradedCharacter::shifted(Bidegree by) const {
    GradedCharacter r;
    for (const auto& [b, d] : table_) r.add(b + by, d);
    return r;
}

GradedCharacter GradedCharacter::sheared(int slope) const {
    GradedCharacter r;
    for (const auto& [b, d] : table_) r.add({b.k, b.s + slope * b.k}, d);
    return r;
}

GradedCharacter GradedCharacter::operator+(const GradedCharacter& o) const {
    GradedCharacter r = *this;
    for (const auto& [b, d] : o.table_) r.add(b, d);
    return r;
}

GradedCharacter GradedCharacter::operator-(const GradedCharacter& o) const {
    GradedCharacter r = *this;
    for (const auto& [b, d] : o.table_) r.add(b, -d);
    return r;
}

GradedCharacter GradedCharacter::operator*(const GradedCharacter& o) const {
    GradedCharacter r;
    for (const auto& [b1, d1] : table_)
        for (const auto& [b2, d2] : o.table_) r.add(b1 + b2, d1 * d2);
    return r;
}

namespace {

void marker(std::ostringstream& out, char name, int exp, bool& any) {
    if (exp == 0) return;
    if (any) out << '*';
    any = true;
    out << name;
    if (exp != 1) out << '^' << exp;
}

}  // namespace

std::string GradedCharacter::to_string() const {
    if (table_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [b, d] : table_) {
        long long mag = d < 0 ? -d : d;
        if (first) {
            if (d < 0) out << '-';
        } else {
            out << (d < 0 ? " - " : " + ");
        }
        first = false;
        bool any = false;
        if (mag != 1 || (b.k == 0 && b.s == 0)) {
            out << mag;
            any = true;
        }
        marker(out, 'u', b.k, any);
        marker(out, 'q', b.s, any);
    }
    return out.str();
}

std::optional<Bidegree> match_up_to_shift(const GradedCharacter& a, const GradedCharacter& b) {
    auto la = a.lowest(), lb = b.lowest();
    if (!la || !lb) {
        if (!la && !lb) return Bidegree{0, 0};
        return std::nullopt;
    }
    Bidegree d = *la - *lb;
    if (b.shifted(d) == a) return d;
    return std::nullopt;
}

bool Element::is_zero() const {
    for (const auto& [b, v] : parts)
        if (!fusion::is_zero(v)) return false;
    return true;
}

void Element::prune() {
    for (auto it = parts.begin(); it != parts.end();) {
        if (fusion::is_zero(it->second))
            it = parts.erase(it);
        else
            ++it;
    }
}

std::optional<Bidegree> Element::bidegree() const {
    std::optional<Bidegree> out;
    for (const auto& [b, v] : parts) {
        if (fusion::is_zero(v)) continue;
        if (out) return std::nullopt;
        out = b;
    }
    return out;
}

Element apply(const Operator& op, const Element& x) {
    Element y;
    for (const auto& [b, v] : x.parts) {
        if (fusion::is_zero(v)) continue;
        Vec w = op.apply(b, v);
        if (w.empty() || fusion::is_zero(w)) continue;
        Bidegree t = b + op.shift;
        auto [it, inserted] = y.parts.try_emplace(t, w);
        if (!inserted)
            for (std::size_t i = 0; i < w.size(); ++i) it->second[i] += w[i];
    }
    y.prune();
    return y;
}

GradedCharacter GradedSpace::character() const {
    GradedCharacter c;
    for (Bidegree b : support()) c.add(b, static_cast<long long>(piece_dim(b)));
    return c;
}

std::size_t GradedSpace::total_dim() const {
    std::size_t t = 0;
    for (Bidegree b : support()) t += piece_dim(b);
    return t;
}

Subspace::Subspace(const GradedSpace& ambient) {
    for (Bidegree b : ambient.support()) ambient_[b] = ambient.piece_dim(b);
}

std::size_t Subspace::dim() const {
    std::size_t d = 0;
    for (const auto& [b, rs] : pieces_) d += rs.rank();
    return d;
}

std::size_t Subspace::piece_dim(Bidegree b) const {
    auto it = pieces_.find(b);
    return it == pieces_.end() ? 0 : it->second.rank();
}

GradedCharacter Subspace::character() const {
    GradedCharacter c;
    for (const auto& [b, rs] : pieces_) c.add(b, static_cast<long long>(rs.rank()));
    return c;
}

bool Subspace::insert(Bidegree b, const Vec& v) {
    auto amb = ambient_.find(b);
    if (amb == ambient_.end()) {
        if (fusion::is_zero(v)) return false;
        throw UsageError("Subspace: vector in a zero piece " + b.to_string());
    }
    if (v.size() != amb->second) throw UsageError("Subspace: wrong piece dimension at " + b.to_string());
    auto [it, inserted] = pieces_.try_emplace(b, RowSpace(amb->second));
    bool grew = it->second.insert(v);
    if (it->second.rank() == 0) pieces_.erase(it);
    return grew;
}

bool Subspace::insert(const Element& x) {
    bool grew = false;
    for (const auto& [b, v] : x.parts) grew = insert(b, v) || grew;
    return grew;
}

bool Subspace::contains(const Element& x) const {
    for (const auto& [b, v] : x.parts) {
        if (fusion::is_zero(v)) continue;
        auto it = pieces_.find(b);
        if (it == pieces_.end() || !it->second.contains(v)) return false;
    }
    return true;
}

bool Subspace::contains(const Subspace& other) const {
    for (const auto& [b, rs] : other.pieces_) {
        auto it = pieces_.find(b);
        if (it == pieces_.end()) return false;
        for (const Vec& v : rs.basis())
            if (!it->second.contains(v)) return false;
    }
    return true;
}

bool Subspace::closed_under(const Operator& op) const {
    for (const auto& [b, rs] : pieces_) {
        for (const Vec& v : rs.basis()) {
            Vec w = op.apply(b, v);
            if (w.empty() || fusion::is_zero(w)) continue;
            auto it = pieces_.find(b + op.shift);
            if (it == pieces_.end() || !it->second.contains(w)) return false;
        }
    }
    return true;
}

Subspace Subspace::operator+(const Subspace& other) const {
    Subspace r = *this;
    for (const auto& [b, d] : other.ambient_) r.ambient_.emplace(b, d);
    for (const auto& [b, rs] : other.pieces_)
        for (const Vec& v : rs.basis()) r.insert(b, v);
    return r;
}

bool Subspace::operator==(const Subspace& other) const { return pieces_ == other.pieces_; }

Subspace cyclic_span(const GradedSpace& ambient, const std::vector<Operator>& ops,
                     const std::vector<Element>& seeds) {
    for (const Operator& op : ops)
        if (op.shift <= Bidegree{0, 0})
            throw UsageError("cyclic_span: operator " + op.name + " does not raise the bidegree");
    Subspace span(ambient);
    for (const Element& seed : seeds) {
        if (!seed.is_zero() && !seed.bidegree()) throw UsageError("cyclic_span: seed is not homogeneous");
        span.insert(seed);
    }
    // Every operator raises (k, s) strictly, so when the walk reaches a piece
    // nothing further can land in it and its basis is final.
    std::optional<Bidegree> cursor;
    while (true) {
        const auto& pieces = span.pieces();
        auto it = cursor ? pieces.upper_bound(*cursor) : pieces.begin();
        if (it == pieces.end()) break;
        cursor = it->first;
        Bidegree b = it->first;
        std::vector<Vec> basis = it->second.basis();
        for (const Operator& op : ops)
            for (const Vec& v : basis) {
                Vec w = op.apply(b, v);
                if (w.empty() || fusion::is_zero(w)) continue;
                span.insert(b + op.shift, w);
            }
    }
    return span;
}

}  // namespace fusion
