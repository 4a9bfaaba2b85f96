#pragma once

// Braid words, plat closures, and crossingless (Temperley-Lieb) tangles.
//
// A FlatTangle lives in a horizontal strip with `bottom` boundary points on the
// lower edge and `top` points on the upper edge, numbered left to right. Point
// ids are 0..bottom-1 for the bottom edge followed by bottom..bottom+top-1 for
// the top edge. Only the boundary pairing and the number of closed circles are
// kept; everything else about the picture is irrelevant to the TQFT.

#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twistcube/errors.hpp"

namespace twistcube {

struct BraidLetter {
    int index = 1;  // generator sigma_index, crossing strands index and index+1
    int sign = 1;   // +1 or -1

    friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

struct BraidWord {
    int strands = 2;
    std::vector<BraidLetter> letters;

    friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

inline std::string to_string(const BraidWord& b) {
    std::string out;
    for (const auto& l : b.letters) {
        if (!out.empty()) out += ' ';
        out += 's' + std::to_string(l.index);
        if (l.sign < 0) out += "^-1";
    }
    return out;
}

inline void check_strand_count(int strands) {
    if (strands < 2 || strands % 2 != 0)
        throw InputError("strand count must be a positive even integer, got " + std::to_string(strands));
}

/// Parses whitespace-separated tokens `s<k>` or `s<k>^-1`.
inline BraidWord parse_braid_word(std::string_view text, int strands) {
    check_strand_count(strands);
    BraidWord b;
    b.strands = strands;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        auto bad = [&] { return InputError("malformed braid token '" + tok + "'"); };
        if (tok.size() < 2 || tok[0] != 's') throw bad();
        std::size_t pos = 1;
        while (pos < tok.size() && tok[pos] >= '0' && tok[pos] <= '9') ++pos;
        if (pos == 1 || pos - 1 > 6) throw bad();
        int k = std::stoi(tok.substr(1, pos - 1));
        int sign = 1;
        if (pos != tok.size()) {
            if (tok.substr(pos) != "^-1") throw bad();
            sign = -1;
        }
        if (k < 1 || k >= strands)
            throw InputError("braid token '" + tok + "' uses index " + std::to_string(k) +
                             " outside 1.." + std::to_string(strands - 1));
        b.letters.push_back({k, sign});
    }
    return b;
}

/// Reverses the word and inverts every letter.
inline BraidWord mirror(const BraidWord& b) {
    BraidWord m;
    m.strands = b.strands;
    m.letters.assign(b.letters.rbegin(), b.letters.rend());
    for (auto& l : m.letters) l.sign = -l.sign;
    return m;
}

class FlatTangle {
public:
    /// `partner[p]` is the point paired with p. Throws InputError unless the
    /// pairing is a perfect, planar matching of the bottom+top points.
    FlatTangle(int bottom, int top, std::vector<int> partner, int circles = 0)
        : bottom_(bottom), top_(top), partner_(std::move(partner)), circles_(circles) {
        validate();
    }

    int bottom() const { return bottom_; }
    int top() const { return top_; }
    int circles() const { return circles_; }
    int points() const { return bottom_ + top_; }
    int partner(int p) const { return partner_[static_cast<std::size_t>(p)]; }
    const std::vector<int>& matching() const { return partner_; }
    bool closed() const { return points() == 0; }

    int bottom_point(int i) const { return i; }
    int top_point(int j) const { return bottom_ + j; }

    /// Position of point p when walking the strip boundary: bottom edge left to
    /// right, then the top edge right to left.
    int cyclic_position(int p) const { return p < bottom_ ? p : bottom_ + (top_ - 1 - (p - bottom_)); }

    friend bool operator==(const FlatTangle&, const FlatTangle&) = default;

private:
    void validate() const {
        if (bottom_ < 0 || top_ < 0 || circles_ < 0) throw InputError("FlatTangle: negative size");
        const int n = points();
        if (static_cast<int>(partner_.size()) != n) throw InputError("FlatTangle: matching size mismatch");
        if (n % 2 != 0) throw InputError("FlatTangle: odd number of boundary points");
        for (int p = 0; p < n; ++p) {
            int q = partner_[static_cast<std::size_t>(p)];
            if (q < 0 || q >= n || q == p || partner_[static_cast<std::size_t>(q)] != p)
                throw InputError("FlatTangle: not a perfect matching");
        }
        // Noncrossing iff a stack walk over the cyclic boundary order closes
        // every pair at the top of the stack.
        std::vector<int> at(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p) at[static_cast<std::size_t>(cyclic_position(p))] = p;
        std::vector<int> stack;
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (int pos = 0; pos < n; ++pos) {
            int p = at[static_cast<std::size_t>(pos)];
            int q = partner_[static_cast<std::size_t>(p)];
            if (seen[static_cast<std::size_t>(q)]) {
                if (stack.empty() || stack.back() != q) throw InputError("FlatTangle: matching is not planar");
                stack.pop_back();
            } else {
                stack.push_back(p);
            }
            seen[static_cast<std::size_t>(p)] = 1;
        }
    }

    int bottom_;
    int top_;
    std::vector<int> partner_;
    int circles_;
};

enum class ElementaryKind { Identity, CupCap };

struct Elementary {
    ElementaryKind kind = ElementaryKind::Identity;
    int k = 0;  // for CupCap: joins strands k and k+1 (1-based)

    friend bool operator==(const Elementary&, const Elementary&) = default;
};

/// Identity, or the Temperley-Lieb generator e_k: cup on bottom k,k+1, cap on
/// top k,k+1, all other strands vertical.
inline FlatTangle elementary_tangle(Elementary e, int strands) {
    if (strands < 0) throw InputError("elementary_tangle: negative strand count");
    std::vector<int> partner(static_cast<std::size_t>(2 * strands));
    auto link = [&](int a, int b) {
        partner[static_cast<std::size_t>(a)] = b;
        partner[static_cast<std::size_t>(b)] = a;
    };
    if (e.kind == ElementaryKind::CupCap && (e.k < 1 || e.k > strands - 1))
        throw InputError("cupcap index " + std::to_string(e.k) + " outside 1.." + std::to_string(strands - 1));
    for (int i = 0; i < strands; ++i) {
        bool in_cup = e.kind == ElementaryKind::CupCap && (i == e.k - 1 || i == e.k);
        if (!in_cup) link(i, strands + i);
    }
    if (e.kind == ElementaryKind::CupCap) {
        link(e.k - 1, e.k);
        link(strands + e.k - 1, strands + e.k);
    }
    return FlatTangle(strands, strands, std::move(partner), 0);
}

namespace detail {

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent[a] = b;  // root is the least member id
    }
    std::vector<std::size_t> parent;
};

}  // namespace detail

/// Stacks `upper` on top of `lower`. Closed loops formed entirely from arcs
/// meeting on the shared edge are removed and added to the circle count.
inline FlatTangle compose(const FlatTangle& lower, const FlatTangle& upper) {
    if (lower.top() != upper.bottom())
        throw InputError("compose: lower has " + std::to_string(lower.top()) + " top points but upper has " +
                         std::to_string(upper.bottom()) + " bottom points");
    const int b = lower.bottom();
    const int m = lower.top();
    const int t = upper.top();
    // nodes: [0,b) outer bottom, [b,b+m) shared middle, [b+m,b+m+t) outer top
    detail::UnionFind uf(static_cast<std::size_t>(b + m + t));
    for (int p = 0; p < lower.points(); ++p) uf.unite(static_cast<std::size_t>(p), static_cast<std::size_t>(lower.partner(p)));
    auto upper_node = [&](int p) { return static_cast<std::size_t>(b + p); };  // upper bottom j -> middle j
    for (int p = 0; p < upper.points(); ++p) uf.unite(upper_node(p), upper_node(upper.partner(p)));

    std::vector<int> first_outer(static_cast<std::size_t>(b + m + t), -1);
    std::vector<int> partner(static_cast<std::size_t>(b + t), -1);
    auto outer_id = [&](std::size_t node) { return node < static_cast<std::size_t>(b) ? static_cast<int>(node) : static_cast<int>(node) - m; };
    std::vector<char> has_outer(static_cast<std::size_t>(b + m + t), 0);
    for (std::size_t node = 0; node < static_cast<std::size_t>(b + m + t); ++node) {
        bool outer = node < static_cast<std::size_t>(b) || node >= static_cast<std::size_t>(b + m);
        if (!outer) continue;
        std::size_t root = uf.find(node);
        has_outer[root] = 1;
        int id = outer_id(node);
        int& f = first_outer[root];
        if (f < 0) {
            f = id;
        } else {
            partner[static_cast<std::size_t>(f)] = id;
            partner[static_cast<std::size_t>(id)] = f;
        }
    }
    int loops = 0;
    for (int j = 0; j < m; ++j) {
        std::size_t node = static_cast<std::size_t>(b + j);
        if (uf.find(node) == node && !has_outer[node]) ++loops;
    }
    return FlatTangle(b, t, std::move(partner), lower.circles() + upper.circles() + loops);
}

/// Cup pairing below the braid and cap pairing above it, each a planar
/// perfect matching on `strands` points (0-based partner arrays).
class PlatClosure {
public:
    PlatClosure(std::vector<int> cups, std::vector<int> caps) : cups_(std::move(cups)), caps_(std::move(caps)) {
        if (cups_.size() != caps_.size()) throw InputError("plat: cup and cap pairings differ in size");
        check_strand_count(static_cast<int>(cups_.size()));
        validate(cups_, "cup");
        validate(caps_, "cap");
    }

    /// Pairs strands 2i-1 and 2i on both ends.
    static PlatClosure standard(int strands) {
        check_strand_count(strands);
        std::vector<int> p(static_cast<std::size_t>(strands));
        for (int i = 0; i < strands; i += 2) {
            p[static_cast<std::size_t>(i)] = i + 1;
            p[static_cast<std::size_t>(i) + 1] = i;
        }
        return PlatClosure(p, p);
    }

    int strands() const { return static_cast<int>(cups_.size()); }
    const std::vector<int>& cups() const { return cups_; }
    const std::vector<int>& caps() const { return caps_; }

    /// Two extra strands on the right, paired with each other at both ends.
    PlatClosure with_auxiliary_pair() const {
        auto c = cups_;
        auto d = caps_;
        int n = strands();
        for (auto* v : {&c, &d}) {
            v->push_back(n + 1);
            v->push_back(n);
        }
        return PlatClosure(std::move(c), std::move(d));
    }

    bool is_standard() const { return *this == standard(strands()); }

    /// Flat tangle with no bottom points whose top points are paired by the cups.
    FlatTangle cup_tangle() const { return FlatTangle(0, strands(), cups_, 0); }
    /// Flat tangle with no top points whose bottom points are paired by the caps.
    FlatTangle cap_tangle() const { return FlatTangle(strands(), 0, caps_, 0); }

    friend bool operator==(const PlatClosure&, const PlatClosure&) = default;

private:
    static void validate(const std::vector<int>& p, const char* what) {
        const int n = static_cast<int>(p.size());
        std::vector<int> stack;
        for (int i = 0; i < n; ++i) {
            int q = p[static_cast<std::size_t>(i)];
            if (q < 0 || q >= n || q == i || p[static_cast<std::size_t>(q)] != i)
                throw InputError(std::string("plat: ") + what + " pairing is not a perfect matching");
            if (q > i) {
                stack.push_back(i);
            } else {
                if (stack.empty() || stack.back() != q)
                    throw InputError(std::string("plat: ") + what + " pairing is not planar");
                stack.pop_back();
            }
        }
    }

    std::vector<int> cups_;
    std::vector<int> caps_;
};

/// Parses `standard`, or `<pairs>` (used for both ends), or `<cup pairs>/<cap pairs>`,
/// where pairs are 1-based `a-b` separated by commas or spaces.
inline PlatClosure parse_plat(std::string_view text, int strands) {
    check_strand_count(strands);
    std::string s(text);
    if (s.empty() || s == "standard") return PlatClosure::standard(strands);
    auto parse_side = [&](const std::string& side) {
        std::vector<int> p(static_cast<std::size_t>(strands), -1);
        std::string norm = side;
        for (char& c : norm)
            if (c == ',') c = ' ';
        std::istringstream in(norm);
        std::string tok;
        while (in >> tok) {
            auto dash = tok.find('-');
            auto bad = [&] { return InputError("malformed plat pair '" + tok + "'"); };
            if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size()) throw bad();
            int a = 0;
            int b = 0;
            try {
                std::size_t used = 0;
                a = std::stoi(tok.substr(0, dash), &used);
                if (used != dash) throw bad();
                b = std::stoi(tok.substr(dash + 1), &used);
                if (used != tok.size() - dash - 1) throw bad();
            } catch (const std::logic_error&) {
                throw bad();
            }
            if (a < 1 || a > strands || b < 1 || b > strands || a == b)
                throw InputError("plat pair '" + tok + "' out of range 1.." + std::to_string(strands));
            if (p[static_cast<std::size_t>(a - 1)] >= 0 || p[static_cast<std::size_t>(b - 1)] >= 0)
                throw InputError("plat pair '" + tok + "' reuses a strand");
            p[static_cast<std::size_t>(a - 1)] = b - 1;
            p[static_cast<std::size_t>(b - 1)] = a - 1;
        }
        for (int v : p)
            if (v < 0) throw InputError("plat pairing leaves a strand unmatched");
        return p;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        auto p = parse_side(s);
        return PlatClosure(p, p);
    }
    return PlatClosure(parse_side(s.substr(0, slash)), parse_side(s.substr(slash + 1)));
}

inline std::string to_string(const PlatClosure& p) {
    if (p.is_standard()) return "standard";
    auto side = [](const std::vector<int>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (static_cast<std::size_t>(v[i]) < i) continue;
            if (!out.empty()) out += ',';
            out += std::to_string(i + 1) + '-' + std::to_string(v[i] + 1);
        }
        return out;
    };
    return side(p.cups()) + '/' + side(p.caps());
}

/// Closes a strands-to-strands flat tangle with the plat cups and caps.
inline FlatTangle close_plat(const FlatTangle& t, const PlatClosure& p) {
    if (t.bottom() != p.strands() || t.top() != p.strands())
        throw InputError("close_plat: tangle is " + std::to_string(t.bottom()) + "->" + std::to_string(t.top()) +
                         " but plat has " + std::to_string(p.strands()) + " strands");
    return compose(compose(p.cup_tangle(), t), p.cap_tangle());
}

}  // namespace twistcube
