#pragma once

// The Z/2 Frobenius algebra A = Z/2[X]/(X^2) and the chain complex of a
// resolution cube: vertex I carries A^{⊗c(I)}, merges act by multiplication
// and splits by comultiplication.
//
// Basis of a vertex space: circles sorted by label, circle p <-> bit (c-1-p)
// of the basis index, bit value 0 = 1 and 1 = X. With two circles the order
// is 1⊗1, 1⊗X, X⊗1, X⊗X.

#include <algorithm>
#include <array>
#include <optional>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twistcube/cube.hpp"
#include "twistcube/errors.hpp"
#include "twistcube/f2linalg.hpp"
#include "twistcube/specseq.hpp"

namespace twistcube {

enum class AlgBasis : std::uint8_t { One = 0, X = 1 };

/// Element of A: bit 0 is the coefficient of 1, bit 1 the coefficient of X.
struct AlgElement {
    std::uint8_t coeffs = 0;
    friend bool operator==(const AlgElement&, const AlgElement&) = default;
};

/// Element of A⊗A: bit (2a+b) is the coefficient of a⊗b (a, b in {1=0, X=1}).
struct TensorElement {
    std::uint8_t coeffs = 0;
    friend bool operator==(const TensorElement&, const TensorElement&) = default;
};

inline constexpr AlgElement basis_element(AlgBasis b) { return {static_cast<std::uint8_t>(1U << static_cast<int>(b))}; }
inline constexpr TensorElement basis_tensor(AlgBasis a, AlgBasis b) {
    return {static_cast<std::uint8_t>(1U << (2 * static_cast<int>(a) + static_cast<int>(b)))};
}

struct FrobAlgebra {
    /// 1·1 = 1, 1·X = X·1 = X, X·X = 0.
    static constexpr AlgElement multiply(AlgBasis a, AlgBasis b) {
        if (a == AlgBasis::X && b == AlgBasis::X) return {0};
        return basis_element((a == AlgBasis::X || b == AlgBasis::X) ? AlgBasis::X : AlgBasis::One);
    }

    static constexpr AlgElement multiply(AlgElement a, AlgElement b) {
        std::uint8_t out = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if ((a.coeffs >> i) & (b.coeffs >> j) & 1U)
                    out ^= multiply(static_cast<AlgBasis>(i), static_cast<AlgBasis>(j)).coeffs;
        return {out};
    }

    /// Δ(1) = 1⊗X + X⊗1, Δ(X) = X⊗X, extended linearly.
    static constexpr TensorElement comultiply(AlgElement a) {
        std::uint8_t out = 0;
        if (a.coeffs & 1U)
            out ^= static_cast<std::uint8_t>(basis_tensor(AlgBasis::One, AlgBasis::X).coeffs |
                                             basis_tensor(AlgBasis::X, AlgBasis::One).coeffs);
        if (a.coeffs & 2U) out ^= basis_tensor(AlgBasis::X, AlgBasis::X).coeffs;
        return {out};
    }

    static constexpr AlgElement unit() { return basis_element(AlgBasis::One); }
    /// Counit: picks the coefficient of X.
    static constexpr int counit(AlgElement a) { return (a.coeffs >> 1) & 1; }
};

class VertexSpace {
public:
    explicit VertexSpace(std::vector<CircleLabel> labels) : labels_(std::move(labels)) {}

    std::size_t circles() const { return labels_.size(); }
    std::size_t dim() const { return std::size_t{1} << labels_.size(); }
    const std::vector<CircleLabel>& labels() const { return labels_; }

    std::size_t position(CircleLabel c) const {
        for (std::size_t p = 0; p < labels_.size(); ++p)
            if (labels_[p] == c) return p;
        throw InternalError("circle " + std::to_string(c) + " is not at this vertex");
    }
    std::size_t bit_of(std::size_t position) const { return labels_.size() - 1 - position; }

    /// Value of circle `position` in basis element `index`.
    AlgBasis value(std::size_t index, std::size_t position) const {
        return static_cast<AlgBasis>((index >> bit_of(position)) & 1U);
    }

    /// "1⊗X⊗..." style name of a basis element.
    std::string basis_name(std::size_t index) const {
        std::string s;
        for (std::size_t p = 0; p < circles(); ++p) {
            if (p) s += "⊗";
            s += value(index, p) == AlgBasis::X ? "X" : "1";
        }
        return s.empty() ? "1" : s;
    }

private:
    std::vector<CircleLabel> labels_;
};

/// Generator-level description of one edge map.
class EdgeMap {
public:
    EdgeMap(const ResolutionCube& cube, Vertex I, Vertex J)
        : cob_(adjacent_cobordism(cube, I, J)),
          src_(cube.vertex(I).labels),
          dst_(cube.vertex(J).labels) {
        for (auto [a, b] : cob_.untouched) moves_.emplace_back(src_.bit_of(src_.position(a)), dst_.bit_of(dst_.position(b)));
        for (auto c : cob_.source) src_bits_.push_back(src_.bit_of(src_.position(c)));
        for (auto c : cob_.target) dst_bits_.push_back(dst_.bit_of(dst_.position(c)));
    }

    const EdgeCobordism& cobordism() const { return cob_; }
    const VertexSpace& source() const { return src_; }
    const VertexSpace& target() const { return dst_; }

    /// Calls f(target index) for every term of the image of basis element `index`.
    template <class F>
    void apply(std::size_t index, F&& f) const {
        std::size_t base = 0;
        for (auto [s, d] : moves_) base |= ((index >> s) & 1U) << d;
        auto val = [&](std::size_t bit) { return static_cast<AlgBasis>((index >> bit) & 1U); };
        if (cob_.kind == CobordismKind::Merge) {
            auto prod = FrobAlgebra::multiply(val(src_bits_[0]), val(src_bits_[1]));
            for (int v = 0; v < 2; ++v)
                if ((prod.coeffs >> v) & 1U) f(base | (static_cast<std::size_t>(v) << dst_bits_[0]));
        } else {
            auto co = FrobAlgebra::comultiply(basis_element(val(src_bits_[0])));
            // target[0] < target[1] by label, so target[0] is the first tensor factor
            for (int t = 0; t < 4; ++t)
                if ((co.coeffs >> t) & 1U)
                    f(base | (static_cast<std::size_t>(t >> 1) << dst_bits_[0]) |
                      (static_cast<std::size_t>(t & 1) << dst_bits_[1]));
        }
    }

private:
    EdgeCobordism cob_;
    VertexSpace src_;
    VertexSpace dst_;
    std::vector<std::pair<std::size_t, std::size_t>> moves_;  // (source bit, target bit)
    std::vector<std::size_t> src_bits_;
    std::vector<std::size_t> dst_bits_;
};

/// Matrix of the edge map I -> J, shape 2^{c(J)} x 2^{c(I)}.
inline F2Matrix edge_map_matrix(const ResolutionCube& cube, Vertex I, Vertex J) {
    EdgeMap e(cube, I, J);
    F2Matrix m(e.target().dim(), e.source().dim());
    for (std::size_t x = 0; x < e.source().dim(); ++x) e.apply(x, [&](std::size_t y) { m.flip(y, x); });
    return m;
}

/// The cube complex: generators laid out vertex by vertex in increasing I.
struct ChainComplexF2 {
    FilteredComplex complex;
    int n = 0;
    std::vector<std::size_t> offset;  // first generator of each vertex, plus a final sentinel

    std::size_t vertex_dim(Vertex I) const { return offset[I + 1] - offset[I]; }
    std::size_t total_dim() const { return offset.back(); }
};

struct FaceFailure {
    Vertex source = 0;
    int bit_a = 0;
    int bit_b = 0;
    std::size_t generator = 0;  // local basis index at the source vertex
};

/// Every edge map of a cube, indexed by (source vertex, flipped twist).
class EdgeTable {
public:
    explicit EdgeTable(const ResolutionCube& cube) : n_(cube.n()), edges_(cube.vertex_count() * static_cast<std::size_t>(cube.n())) {
        for (Vertex I = 0; I < cube.vertex_count(); ++I)
            for (int i = 0; i < n_; ++i)
                if (!((I >> i) & 1U)) edges_[slot(I, i)].emplace(cube, I, I | (Vertex{1} << i));
    }

    const EdgeMap& edge(Vertex I, int twist) const { return *edges_[slot(I, twist)]; }

private:
    std::size_t slot(Vertex I, int i) const { return static_cast<std::size_t>(I) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i); }

    int n_;
    std::vector<std::optional<EdgeMap>> edges_;
};

/// Checks that both paths around every square face agree over GF(2).
inline std::optional<FaceFailure> check_faces(const ResolutionCube& cube, const EdgeTable& edges) {
    const int n = cube.n();
    std::vector<std::size_t> acc;
    std::vector<char> odd;
    for (Vertex I = 0; I < cube.vertex_count(); ++I) {
        for (int a = 0; a < n; ++a) {
            if ((I >> a) & 1U) continue;
            for (int b = a + 1; b < n; ++b) {
                if ((I >> b) & 1U) continue;
                const auto& ia = edges.edge(I, a);
                const auto& ib = edges.edge(I, b);
                const auto& ak = edges.edge(I | (Vertex{1} << a), b);
                const auto& bk = edges.edge(I | (Vertex{1} << b), a);
                odd.assign(ak.target().dim(), 0);
                for (std::size_t x = 0; x < ia.source().dim(); ++x) {
                    acc.clear();
                    auto hit = [&](std::size_t z) {
                        odd[z] ^= 1;
                        acc.push_back(z);
                    };
                    ia.apply(x, [&](std::size_t y) { ak.apply(y, hit); });
                    ib.apply(x, [&](std::size_t y) { bk.apply(y, hit); });
                    bool bad = false;
                    for (auto z : acc) bad = bad || odd[z];
                    for (auto z : acc) odd[z] = 0;
                    if (bad) return FaceFailure{I, a, b, x};
                }
            }
        }
    }
    return std::nullopt;
}

inline std::optional<FaceFailure> check_faces(const ResolutionCube& cube) { return check_faces(cube, EdgeTable(cube)); }

/// Direct sum of the vertex spaces, weighted by |I| - n_minus, with D_1 the
/// sum of all edge maps. Vertex differentials are zero.
inline ChainComplexF2 assemble_complex(const ResolutionCube& cube, bool verify_faces = true) {
    const EdgeTable edges(cube);
    if (verify_faces) {
        if (auto f = check_faces(cube, edges))
            throw InternalError("face at " + vertex_string(f->source, cube.n()) + " (twists " + std::to_string(f->bit_a) +
                                ", " + std::to_string(f->bit_b) + ") does not commute on generator " +
                                std::to_string(f->generator));
    }
    ChainComplexF2 out;
    out.n = cube.n();
    const auto count = cube.vertex_count();
    out.offset.resize(count + 1, 0);
    for (Vertex I = 0; I < count; ++I) out.offset[I + 1] = out.offset[I] + (std::size_t{1} << cube.circles(I));
    std::vector<int> weights(out.offset.back());
    for (Vertex I = 0; I < count; ++I)
        std::fill(weights.begin() + static_cast<std::ptrdiff_t>(out.offset[I]),
                  weights.begin() + static_cast<std::ptrdiff_t>(out.offset[I + 1]), cube.weight(I));
    out.complex = FilteredComplex(std::move(weights));

    SparseF2Matrix d1(out.total_dim(), out.total_dim());
    for (Vertex I = 0; I < count; ++I) {
        for (std::size_t x = 0; x < out.vertex_dim(I); ++x) {
            SparseF2Matrix::Column col;
            for (int i = 0; i < cube.n(); ++i) {
                if ((I >> i) & 1U) continue;
                const Vertex J = I | (Vertex{1} << i);
                edges.edge(I, i).apply(x, [&](std::size_t y) { col.push_back(static_cast<SparseF2Matrix::Index>(out.offset[J] + y)); });
            }
            d1.set_column(out.offset[I] + x, std::move(col));
        }
    }
    if (!d1.is_zero()) out.complex.add_component(1, d1);
    auto check = verify_d_squared(out.complex);
    if (!check.ok)
        throw DSquaredError("assembled cube differential does not square to zero at generator " +
                                std::to_string(*check.witness),
                            std::move(check));
    return out;
}

/// Vertex and local basis index of a global generator.
inline std::pair<Vertex, std::size_t> locate_generator(const ChainComplexF2& c, std::size_t g) {
    auto it = std::upper_bound(c.offset.begin(), c.offset.end(), g);
    auto I = static_cast<Vertex>(std::distance(c.offset.begin(), it) - 1);
    return {I, g - c.offset[I]};
}

}  // namespace twistcube
