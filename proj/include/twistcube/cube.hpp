#pragma once

// The cube of resolutions of a plat-closed twist sequence.
//
// Twist i (0-based, reading order) sits between level i and level i+1 of the
// diagram; level 0 carries the plat cups and level n the plat caps. A level
// point is (level, strand) with id level*strands + strand (strand 0-based).
// A vertex I is a bit mask: bit i is the resolution bit of twist i.
// Every circle of a resolved diagram passes through at least one level point,
// and it is labelled by the least point id on it.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twistcube/errors.hpp"
#include "twistcube/tangle.hpp"

namespace twistcube {

using Vertex = std::uint32_t;
using CircleLabel = std::uint32_t;

/// Resolution convention. With `swap_resolutions` false the rule is applied
/// literally (bit 0 of a positive twist is the cup-cap); true exchanges the
/// two resolutions of every twist, which builds the cube of the mirror diagram.
struct Convention {
    bool swap_resolutions = false;
};

/// The setting validated against known Z/2 Khovanov ranks (unknot 2, Hopf 4,
/// trefoil 6, figure-eight 10); see tests/test_cube.cpp.
inline constexpr Convention kFrozenConvention{false};

inline constexpr int kMaxTwists = 20;

struct Twist {
    int index = 1;  // curve delta_index, acting on strands index, index+1
    int sign = 1;

    friend bool operator==(const Twist&, const Twist&) = default;
};

class TwistSequence {
public:
    TwistSequence() = default;
    explicit TwistSequence(std::vector<Twist> twists) : twists_(std::move(twists)) {
        for (const auto& t : twists_) {
            if (t.sign != 1 && t.sign != -1) throw InputError("twist sign must be +1 or -1");
            if (t.sign < 0) ++n_minus_;
        }
    }

    const std::vector<Twist>& twists() const { return twists_; }
    std::size_t size() const { return twists_.size(); }
    int n_minus() const { return n_minus_; }

    friend bool operator==(const TwistSequence&, const TwistSequence&) = default;

private:
    std::vector<Twist> twists_;
    int n_minus_ = 0;
};

/// sigma_k^e becomes a twist along delta_k with sign -e: positive braid
/// generators and positive Dehn twists have opposite handedness.
inline TwistSequence braid_to_twists(const BraidWord& b) {
    std::vector<Twist> t;
    t.reserve(b.letters.size());
    for (const auto& l : b.letters) t.push_back({l.index, -l.sign});
    return TwistSequence(std::move(t));
}

/// Positive twist: bit 0 is the cup-cap (C^t C), bit 1 the identity.
/// Negative twist: bit 0 is the identity, bit 1 the cup-cap.
inline ElementaryKind resolve_twist(int sign, int bit, Convention conv = kFrozenConvention) {
    bool cupcap = (sign > 0) ? (bit == 0) : (bit == 1);
    if (conv.swap_resolutions) cupcap = !cupcap;
    return cupcap ? ElementaryKind::CupCap : ElementaryKind::Identity;
}

enum class CobordismKind { Merge, Split };

/// Elementary cobordism along a cube edge. For a merge `source` holds the two
/// circles of I and `target` the one circle of J; a split is the reverse.
/// `untouched` pairs each remaining circle of I with its circle in J.
struct EdgeCobordism {
    CobordismKind kind = CobordismKind::Merge;
    int twist = 0;
    std::vector<CircleLabel> source;
    std::vector<CircleLabel> target;
    std::vector<std::pair<CircleLabel, CircleLabel>> untouched;
};

struct VertexDiagram {
    int circles = 0;
    std::vector<CircleLabel> labels;       // sorted ascending
    std::vector<CircleLabel> point_label;  // circle label of each level point
};

class ResolutionCube {
public:
    ResolutionCube(TwistSequence ts, int strands, PlatClosure plat, bool aux_unknot, Convention conv,
                   std::vector<VertexDiagram> vertices)
        : twists_(std::move(ts)),
          strands_(strands),
          plat_(std::move(plat)),
          aux_unknot_(aux_unknot),
          convention_(conv),
          vertices_(std::move(vertices)) {}

    int n() const { return static_cast<int>(twists_.size()); }
    int strands() const { return strands_; }
    const TwistSequence& twists() const { return twists_; }
    const PlatClosure& plat() const { return plat_; }
    bool aux_unknot() const { return aux_unknot_; }
    Convention convention() const { return convention_; }
    std::size_t vertex_count() const { return vertices_.size(); }

    const VertexDiagram& vertex(Vertex I) const { return vertices_.at(I); }
    int circles(Vertex I) const { return vertex(I).circles; }
    int weight(Vertex I) const { return std::popcount(I) - twists_.n_minus(); }

    CircleLabel point_id(int level, int strand) const {
        return static_cast<CircleLabel>(level * strands_ + strand);
    }

private:
    TwistSequence twists_;
    int strands_;
    PlatClosure plat_;
    bool aux_unknot_;
    Convention convention_;
    std::vector<VertexDiagram> vertices_;
};

/// Vertex bit string: character i is the resolution bit of twist i.
inline std::string vertex_string(Vertex I, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if ((I >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

inline Vertex parse_vertex(const std::string& s, int n) {
    if (static_cast<int>(s.size()) != n) throw InputError("vertex '" + s + "' must have " + std::to_string(n) + " bits");
    Vertex I = 0;
    for (int i = 0; i < n; ++i) {
        char c = s[static_cast<std::size_t>(i)];
        if (c == '1')
            I |= Vertex{1} << i;
        else if (c != '0')
            throw InputError("vertex '" + s + "' is not a bit string");
    }
    return I;
}

namespace detail {

inline VertexDiagram resolve_vertex(const TwistSequence& ts, int strands, const PlatClosure& plat, Vertex I,
                                    Convention conv) {
    const int n = static_cast<int>(ts.size());
    const auto& tw = ts.twists();

    // Circle count through the tangle calculus.
    FlatTangle acc = plat.cup_tangle();
    for (int i = 0; i < n; ++i) {
        auto kind = resolve_twist(tw[static_cast<std::size_t>(i)].sign, static_cast<int>((I >> i) & 1U), conv);
        acc = compose(acc, elementary_tangle({kind, tw[static_cast<std::size_t>(i)].index}, strands));
    }
    acc = compose(acc, plat.cap_tangle());
    if (!acc.closed()) throw InternalError("resolved plat diagram is not closed");

    // Circle labels by tracing arcs between level points.
    const auto pts = static_cast<std::size_t>((n + 1) * strands);
    UnionFind uf(pts);
    auto id = [&](int level, int s) { return static_cast<std::size_t>(level * strands + s); };
    for (int s = 0; s < strands; ++s) {
        uf.unite(id(0, s), id(0, plat.cups()[static_cast<std::size_t>(s)]));
        uf.unite(id(n, s), id(n, plat.caps()[static_cast<std::size_t>(s)]));
    }
    for (int i = 0; i < n; ++i) {
        const int k = tw[static_cast<std::size_t>(i)].index;
        auto kind = resolve_twist(tw[static_cast<std::size_t>(i)].sign, static_cast<int>((I >> i) & 1U), conv);
        for (int s = 0; s < strands; ++s) {
            if (kind == ElementaryKind::CupCap && (s == k - 1 || s == k)) continue;
            uf.unite(id(i, s), id(i + 1, s));
        }
        if (kind == ElementaryKind::CupCap) {
            uf.unite(id(i, k - 1), id(i, k));
            uf.unite(id(i + 1, k - 1), id(i + 1, k));
        }
    }
    VertexDiagram v;
    v.point_label.resize(pts);
    for (std::size_t p = 0; p < pts; ++p) {
        auto root = uf.find(p);
        v.point_label[p] = static_cast<CircleLabel>(root);
        if (root == p) v.labels.push_back(static_cast<CircleLabel>(p));
    }
    v.circles = static_cast<int>(v.labels.size());
    if (v.circles != acc.circles())
        throw InternalError("circle count mismatch at vertex " + vertex_string(I, n) + ": tangle calculus gives " +
                            std::to_string(acc.circles()) + ", arc tracing gives " + std::to_string(v.circles));
    return v;
}

}  // namespace detail

/// Builds all 2^n resolved diagrams. With `aux_unknot`, `strands` and `plat`
/// already include the two rightmost auxiliary strands, paired with each other.
inline ResolutionCube build_cube(const TwistSequence& ts, int strands, const PlatClosure& plat, bool aux_unknot,
                                 Convention conv = kFrozenConvention) {
    check_strand_count(strands);
    if (plat.strands() != strands)
        throw InputError("plat has " + std::to_string(plat.strands()) + " strands, expected " + std::to_string(strands));
    if (static_cast<int>(ts.size()) > kMaxTwists)
        throw InputError("at most " + std::to_string(kMaxTwists) + " twists are supported, got " +
                         std::to_string(ts.size()));
    const int usable = aux_unknot ? strands - 2 : strands;
    if (aux_unknot) {
        if (strands < 4) throw InputError("aux_unknot needs at least two strands besides the auxiliary pair");
        for (const auto* side : {&plat.cups(), &plat.caps()})
            if ((*side)[static_cast<std::size_t>(strands - 2)] != strands - 1)
                throw InputError("aux_unknot: auxiliary strands must be paired with each other");
    }
    for (const auto& t : ts.twists())
        if (t.index < 1 || t.index > usable - 1)
            throw InputError("twist index " + std::to_string(t.index) + " outside 1.." + std::to_string(usable - 1));

    const Vertex count = Vertex{1} << ts.size();
    std::vector<VertexDiagram> vertices;
    vertices.reserve(count);
    for (Vertex I = 0; I < count; ++I) vertices.push_back(detail::resolve_vertex(ts, strands, plat, I, conv));
    return ResolutionCube(ts, strands, plat, aux_unknot, conv, std::move(vertices));
}

/// Cube of the plat closure of `b`; appends the auxiliary pair when requested.
inline ResolutionCube build_plat_cube(const BraidWord& b, const PlatClosure& plat, bool aux_unknot,
                                      Convention conv = kFrozenConvention) {
    if (plat.strands() != b.strands)
        throw InputError("plat has " + std::to_string(plat.strands()) + " strands but the word has " +
                         std::to_string(b.strands));
    auto ts = braid_to_twists(b);
    if (aux_unknot) return build_cube(ts, b.strands + 2, plat.with_auxiliary_pair(), true, conv);
    return build_cube(ts, b.strands, plat, false, conv);
}

inline bool is_cube_edge(Vertex I, Vertex J) { return (I & J) == I && std::popcount(J ^ I) == 1; }

/// The merge or split along the edge I -> J (J = I plus one bit).
inline EdgeCobordism adjacent_cobordism(const ResolutionCube& cube, Vertex I, Vertex J) {
    if (J >= cube.vertex_count() || !is_cube_edge(I, J))
        throw InputError("adjacent_cobordism: " + vertex_string(I, cube.n()) + " -> " + vertex_string(J, cube.n()) +
                         " is not a cube edge");
    const int i = std::countr_zero(J ^ I);
    const int k = cube.twists().twists()[static_cast<std::size_t>(i)].index;
    const auto& vi = cube.vertex(I);
    const auto& vj = cube.vertex(J);

    auto touched = [&](const VertexDiagram& v) {
        std::vector<CircleLabel> out;
        for (int level : {i, i + 1})
            for (int s : {k - 1, k}) out.push_back(v.point_label[cube.point_id(level, s)]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    EdgeCobordism e;
    e.twist = i;
    e.source = touched(vi);
    e.target = touched(vj);
    if (e.source.size() == 2 && e.target.size() == 1)
        e.kind = CobordismKind::Merge;
    else if (e.source.size() == 1 && e.target.size() == 2)
        e.kind = CobordismKind::Split;
    else
        throw InternalError("edge " + vertex_string(I, cube.n()) + " -> " + vertex_string(J, cube.n()) + " touches " +
                            std::to_string(e.source.size()) + " -> " + std::to_string(e.target.size()) + " circles");

    // A circle away from the changed twist keeps its point set, hence its label.
    for (CircleLabel c : vi.labels) {
        if (std::binary_search(e.source.begin(), e.source.end(), c)) continue;
        if (!std::binary_search(vj.labels.begin(), vj.labels.end(), c) ||
            std::binary_search(e.target.begin(), e.target.end(), c))
            throw InternalError("untouched circle " + std::to_string(c) + " has no partner across edge");
        e.untouched.emplace_back(c, c);
    }
    if (e.untouched.size() + e.target.size() != vj.labels.size())
        throw InternalError("untouched circle correspondence is not a bijection");
    return e;
}

}  // namespace twistcube
