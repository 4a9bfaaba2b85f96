#pragma once

// Cross-checks independent of the cube machinery: the link determinant from
// the Goeritz matrix of the plat diagram, and the auxiliary-unknot doubling.
//
// Regions of a plat diagram: between consecutive crossing levels ("slabs",
// s = 0..n) the gaps g = 0..strands separate the strands (gap g lies between
// strands g and g+1, 1-based). A crossing sigma_k pinches gap k and lets all
// other gaps pass. Below the cups (above the caps) gaps are merged by the
// faces of the cup (cap) arc system. The checkerboard colour of a region is
// the parity of its gap; we shade the odd gaps.

#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "twistcube/cube.hpp"
#include "twistcube/errors.hpp"
#include "twistcube/specseq.hpp"
#include "twistcube/tangle.hpp"
#include "twistcube/tqft.hpp"

namespace twistcube {

struct GoeritzData {
    int shaded_regions = 0;
    std::vector<std::vector<long long>> matrix;  // full Goeritz matrix on shaded regions
    long long determinant = 0;                   // |det| of the matrix with one row and column removed
    int link_components = 0;
    int diagram_components = 0;
    bool split = false;  // diagram is disconnected; determinant reported as 0
};

namespace detail {

/// Exact determinant by fraction-free (Bareiss) elimination.
inline long long bareiss_determinant(std::vector<std::vector<long long>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                __int128 num = 0;
                if (__builtin_mul_overflow(a[i][j], a[k][k], &num)) throw InternalError("determinant overflow");
                __int128 sub = 0;
                if (__builtin_mul_overflow(a[i][k], a[k][j], &sub)) throw InternalError("determinant overflow");
                a[i][j] = (num - sub) / prev;
            }
        prev = a[k][k];
    }
    __int128 d = a[n - 1][n - 1] * sign;
    if (d > static_cast<__int128>(INT64_MAX) || d < -static_cast<__int128>(INT64_MAX))
        throw InternalError("determinant overflow");
    return static_cast<long long>(d);
}

/// For each gap 0..n, the id of the face of a one-sided arc system it lies in;
/// gaps under no arc get -1 (the unbounded face).
inline std::vector<int> arc_faces(const std::vector<int>& pairing) {
    const int n = static_cast<int>(pairing.size());
    std::vector<int> face(static_cast<std::size_t>(n + 1), -1);
    for (int g = 0; g <= n; ++g) {
        // innermost arc (a,b) with a <= g < b in 1-based strands, i.e. 0-based a' < g <= b'
        int best = -1;
        int best_width = n + 1;
        for (int a = 0; a < n; ++a) {
            int b = pairing[static_cast<std::size_t>(a)];
            if (b <= a) continue;
            if (a < g && g <= b && b - a < best_width) {
                best = a;
                best_width = b - a;
            }
        }
        face[static_cast<std::size_t>(g)] = best;
    }
    return face;
}

}  // namespace detail

/// Goeritz matrix and |determinant| of the plat closure of b.
inline GoeritzData determinant(const BraidWord& b, const PlatClosure& plat) {
    if (plat.strands() != b.strands) throw InputError("determinant: plat and word strand counts differ");
    const int n = b.strands;
    const int len = static_cast<int>(b.letters.size());
    for (const auto& l : b.letters)
        if (l.index < 1 || l.index >= n) throw InputError("determinant: letter index out of range");

    GoeritzData out;

    // Link components and diagram connectivity.
    {
        auto id = [&](int level, int s) { return static_cast<std::size_t>(level * n + s); };
        detail::UnionFind comp(static_cast<std::size_t>((len + 1) * n));
        for (int s = 0; s < n; ++s) {
            comp.unite(id(0, s), id(0, plat.cups()[static_cast<std::size_t>(s)]));
            comp.unite(id(len, s), id(len, plat.caps()[static_cast<std::size_t>(s)]));
        }
        for (int l = 0; l < len; ++l) {
            const int k = b.letters[static_cast<std::size_t>(l)].index;
            for (int s = 0; s < n; ++s) {
                int t = (s == k - 1) ? k : (s == k ? k - 1 : s);
                comp.unite(id(l, s), id(l + 1, t));
            }
        }
        std::map<std::size_t, int> roots;
        for (std::size_t p = 0; p < static_cast<std::size_t>((len + 1) * n); ++p) roots.emplace(comp.find(p), 0);
        out.link_components = static_cast<int>(roots.size());
        detail::UnionFind diagram(static_cast<std::size_t>((len + 1) * n));
        for (std::size_t p = 0; p < static_cast<std::size_t>((len + 1) * n); ++p) diagram.unite(p, comp.find(p));
        for (int l = 0; l < len; ++l) {
            const int k = b.letters[static_cast<std::size_t>(l)].index;
            diagram.unite(id(l, k - 1), id(l, k));
        }
        std::map<std::size_t, int> droots;
        for (std::size_t p = 0; p < static_cast<std::size_t>((len + 1) * n); ++p) droots.emplace(diagram.find(p), 0);
        out.diagram_components = static_cast<int>(droots.size());
    }

    // Regions: node (slab, gap) -> slab*(n+1)+gap, plus one unbounded region.
    const std::size_t outer = static_cast<std::size_t>((len + 1) * (n + 1));
    auto node = [&](int slab, int gap) { return static_cast<std::size_t>(slab * (n + 1) + gap); };
    detail::UnionFind regions(outer + 1);
    for (int l = 0; l < len; ++l) {
        const int k = b.letters[static_cast<std::size_t>(l)].index;
        for (int g = 0; g <= n; ++g)
            if (g != k) regions.unite(node(l, g), node(l + 1, g));
    }
    auto close_side = [&](const std::vector<int>& pairing, int slab) {
        auto face = detail::arc_faces(pairing);
        std::map<int, std::size_t> first;
        for (int g = 0; g <= n; ++g) {
            int f = face[static_cast<std::size_t>(g)];
            if (f < 0) {
                regions.unite(node(slab, g), outer);
                continue;
            }
            auto [it, fresh] = first.emplace(f, node(slab, g));
            if (!fresh) regions.unite(node(slab, g), it->second);
        }
    };
    close_side(plat.cups(), 0);
    close_side(plat.caps(), len);

    // Shaded regions: odd gaps (the unbounded region sits over even gaps).
    std::map<std::size_t, int> index;
    for (int s = 0; s <= len; ++s)
        for (int g = 1; g <= n; g += 2) index.emplace(regions.find(node(s, g)), 0);
    int next = 0;
    for (auto& [root, i] : index) i = next++;
    out.shaded_regions = next;
    out.matrix.assign(static_cast<std::size_t>(next), std::vector<long long>(static_cast<std::size_t>(next), 0));
    for (int l = 0; l < len; ++l) {
        const auto& letter = b.letters[static_cast<std::size_t>(l)];
        const int k = letter.index;
        std::size_t ra = 0;
        std::size_t rb = 0;
        int eta = 0;
        if (k % 2 == 1) {
            // the pinched gap is shaded: the crossing joins it below and above
            ra = regions.find(node(l, k));
            rb = regions.find(node(l + 1, k));
            eta = letter.sign;
        } else {
            // the side gaps are shaded
            ra = regions.find(node(l, k - 1));
            rb = regions.find(node(l, k + 1));
            eta = -letter.sign;
        }
        if (ra == rb) continue;
        auto i = static_cast<std::size_t>(index.at(ra));
        auto j = static_cast<std::size_t>(index.at(rb));
        out.matrix[i][j] -= eta;
        out.matrix[j][i] -= eta;
        out.matrix[i][i] += eta;
        out.matrix[j][j] += eta;
    }

    out.split = out.diagram_components > 1;
    if (out.split) {
        out.determinant = 0;
        return out;
    }
    std::vector<std::vector<long long>> minor;
    for (std::size_t i = 1; i < out.matrix.size(); ++i)
        minor.emplace_back(out.matrix[i].begin() + 1, out.matrix[i].end());
    out.determinant = std::llabs(detail::bareiss_determinant(std::move(minor)));
    return out;
}

/// Total dimension of E_2 for the cube of the plat closure of b.
inline std::size_t e2_total(const BraidWord& b, const PlatClosure& plat, bool aux_unknot) {
    auto cube = build_plat_cube(b, plat, aux_unknot);
    auto cx = assemble_complex(cube);
    PageOptions opt;
    opt.r_max = 2;
    opt.verify_d_squared = false;  // assemble_complex has checked it
    opt.keep_differentials = false;
    return compute_pages(cx.complex, opt).page(2).total;
}

struct AuxDoubling {
    std::size_t e2_plain = 0;
    std::size_t e2_aux = 0;
    bool pass = false;
};

/// Adding the split auxiliary unknot must exactly double the E_2 total.
inline AuxDoubling aux_doubling_check(const BraidWord& b, const PlatClosure& plat) {
    AuxDoubling out;
    out.e2_plain = e2_total(b, plat, false);
    out.e2_aux = e2_total(b, plat, true);
    out.pass = out.e2_aux == 2 * out.e2_plain;
    return out;
}

}  // namespace twistcube
