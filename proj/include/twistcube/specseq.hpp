#pragma once

// Spectral sequence of a finitely filtered complex over GF(2).
//
// Generators carry integer weights; the filtration is F_p = span{weight >= p}
// and the differential D = sum_r D_r, where D_r raises weight by exactly r.
// Pages are computed from
//
//   Z_r^w = F_w ∩ D^{-1} F_{w+r},   B_{r-1}^w = F_w ∩ D(F_{w-r+1}) = D(Z_{r-1}^{w-r+1}),
//   E_r^w = proj_w(Z_r^w) / proj_w(B_{r-1}^w),
//
// where proj_w keeps the coordinates of weight exactly w (F_w / F_{w+1}).

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistcube/errors.hpp"
#include "twistcube/f2linalg.hpp"

namespace twistcube {

class FilteredComplex {
public:
    FilteredComplex() = default;
    explicit FilteredComplex(std::vector<int> weights) : weights_(std::move(weights)) {}

    std::size_t size() const { return weights_.size(); }
    int weight(std::size_t g) const { return weights_[g]; }
    const std::vector<int>& weights() const { return weights_; }
    const std::map<int, SparseF2Matrix>& components() const { return components_; }

    /// XORs `m` into D_r. Every entry must map a weight-w generator to a
    /// weight-(w+r) generator.
    void add_component(int r, const SparseF2Matrix& m) {
        if (r < 0) throw InputError("differential component D_" + std::to_string(r) + " must have r >= 0");
        if (m.rows() != size() || m.cols() != size())
            throw InputError("differential component has shape " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected " + std::to_string(size()) + "x" +
                             std::to_string(size()));
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (auto i : m.column(j))
                if (weights_[i] - weights_[j] != r)
                    throw InputError("D_" + std::to_string(r) + " entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") shifts weight by " + std::to_string(weights_[i] - weights_[j]));
        auto it = components_.find(r);
        if (it == components_.end())
            components_.emplace(r, m);
        else
            it->second += m;
        if (components_.at(r).is_zero()) components_.erase(r);
    }

    SparseF2Matrix total() const {
        SparseF2Matrix d(size(), size());
        for (const auto& [r, m] : components_) d += m;
        return d;
    }

    int min_weight() const { return weights_.empty() ? 0 : *std::min_element(weights_.begin(), weights_.end()); }
    int max_weight() const { return weights_.empty() ? 0 : *std::max_element(weights_.begin(), weights_.end()); }

    std::map<int, std::size_t> dims_by_weight() const {
        std::map<int, std::size_t> d;
        for (int w : weights_) ++d[w];
        return d;
    }

    /// True when D = D_1 (no internal or higher components).
    bool d1_only() const {
        for (const auto& [r, m] : components_)
            if (r != 1) return false;
        return true;
    }

private:
    std::vector<int> weights_;
    std::map<int, SparseF2Matrix> components_;
};

struct DSquaredCheck {
    bool ok = true;
    std::optional<std::size_t> witness;  // generator g with D(D g) != 0
    std::vector<SparseF2Matrix::Index> image;  // D(D g)
};

inline DSquaredCheck verify_d_squared(const FilteredComplex& fc) {
    auto d = fc.total();
    DSquaredCheck out;
    std::vector<char> odd(d.rows(), 0);
    std::vector<SparseF2Matrix::Index> touched;
    for (std::size_t g = 0; g < d.cols(); ++g) {
        touched.clear();
        for (auto j : d.column(g))
            for (auto i : d.column(j)) {
                odd[i] ^= 1;
                touched.push_back(i);
            }
        bool bad = false;
        for (auto i : touched) bad = bad || odd[i];
        for (auto i : touched) odd[i] = 0;
        if (bad) {
            out.ok = false;
            out.witness = g;
            out.image = d.apply(d.column(g));
            return out;
        }
    }
    return out;
}

/// Thrown when a differential fails to square to zero; carries the witness.
class DSquaredError : public InternalError {
public:
    DSquaredError(const std::string& what, DSquaredCheck check) : InternalError(what), check_(std::move(check)) {}
    const DSquaredCheck& check() const { return check_; }

private:
    DSquaredCheck check_;
};

struct Page {
    int r = 1;
    std::map<int, std::size_t> dims;  // weight -> dim E_r^w
    std::size_t total = 0;
    /// d_r: E_r^w -> E_r^{w+r}, keyed by source weight, in the bases of the
    /// chosen representatives. Only ranks are meaningful across runs.
    std::map<int, F2Matrix> differential;
    std::map<int, std::size_t> differential_rank;
};

struct SpectralPages {
    int min_weight = 0;
    int max_weight = 0;
    std::vector<Page> pages;       // pages[i].r == i + 1
    Page infinity;                 // dims only
    std::optional<int> stabilization;  // least r with E_r = E_infinity, if reached
    bool d1_only = false;          // computed through the block-rank route

    const Page& page(int r) const { return pages.at(static_cast<std::size_t>(r - 1)); }
    int spread() const { return max_weight - min_weight; }
};

struct PageOptions {
    std::optional<int> r_max;
    bool stop_at_stabilization = true;
    bool keep_differentials = true;
    bool force_dense = false;  // skip the block-rank route for D = D_1
    bool verify_d_squared = true;  // callers that already verified D*D = 0 may skip the check
    std::size_t dense_limit = std::size_t{1} << 14;
};

namespace detail {

inline std::size_t total_of(const std::map<int, std::size_t>& dims) {
    std::size_t t = 0;
    for (const auto& [w, d] : dims) t += d;
    return t;
}

/// Dense page engine on generators sorted by weight.
class DensePageEngine {
public:
    explicit DensePageEngine(const FilteredComplex& fc) {
        const std::size_t n = fc.size();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return fc.weight(a) < fc.weight(b); });
        std::vector<std::size_t> pos(n);
        for (std::size_t i = 0; i < n; ++i) pos[order_[i]] = i;
        wmin_ = fc.min_weight();
        wmax_ = fc.max_weight();
        lo_.assign(static_cast<std::size_t>(wmax_ - wmin_ + 2), 0);
        for (std::size_t g = 0; g < n; ++g) ++lo_[static_cast<std::size_t>(fc.weight(g) - wmin_ + 1)];
        for (std::size_t k = 1; k < lo_.size(); ++k) lo_[k] += lo_[k - 1];

        d_ = F2Matrix(n, n);
        auto total = fc.total();
        for (std::size_t j = 0; j < n; ++j)
            for (auto i : total.column(j)) d_.set(pos[i], pos[j], true);
        dt_ = d_.transpose();
    }

    std::size_t n() const { return d_.rows(); }
    int wmin() const { return wmin_; }
    int wmax() const { return wmax_; }

    /// Start index of F_p in sorted order.
    std::size_t start(int p) const {
        if (p <= wmin_) return 0;
        if (p > wmax_) return n();
        return lo_[static_cast<std::size_t>(p - wmin_)];
    }
    std::size_t dim(int w) const { return start(w + 1) - start(w); }

    /// Basis of Z_r^w as full-length row vectors (r >= 0).
    F2Matrix cycles(int w, int r) const {
        const std::size_t c0 = start(w);
        const std::size_t r1 = start(w + r);
        F2Matrix out(0, n());
        std::vector<F2Matrix::Word> v(F2Matrix::words_for(n()));
        auto put = [&](std::size_t j) { v[j / F2Matrix::kWordBits] |= F2Matrix::Word{1} << (j % F2Matrix::kWordBits); };
        if (r1 <= c0) {
            for (std::size_t j = c0; j < n(); ++j) {
                std::fill(v.begin(), v.end(), 0);
                put(j);
                out.push_row(v);
            }
            return out;
        }
        auto k = kernel_vectors(d_.block(c0, r1, c0, n()));
        for (std::size_t i = 0; i < k.rows(); ++i) {
            std::fill(v.begin(), v.end(), 0);
            F2Matrix::for_each_set_bit(k.row(i), [&](std::size_t j) { put(c0 + j); });
            out.push_row(v);
        }
        return out;
    }

    /// D applied to each row vector.
    F2Matrix apply(const F2Matrix& rows) const { return matmul(rows, dt_); }

    /// Coordinates of weight w of each row vector.
    F2Matrix project(const F2Matrix& rows, int w) const { return rows.block(0, rows.rows(), start(w), start(w + 1)); }

    struct WeightPage {
        std::size_t dim = 0;
        F2Matrix reps;                          // full-length lifts of a basis of E_r^w
        std::optional<IncrementalBasis> basis;  // proj(B) first, then proj(Z)
        std::vector<std::size_t> slots;         // insertion index of each representative
    };

    WeightPage page_at(int w, int r, bool keep) const {
        WeightPage out;
        auto z = cycles(w, r);
        auto zw = project(z, w);
        auto bw = project(apply(cycles(w - r + 1, r - 1)), w);
        const std::size_t rank_z = rank(zw);
        const std::size_t rank_b = rank(bw);
        if (rank_b > rank_z) throw InternalError("boundary space exceeds cycle space");
        out.dim = rank_z - rank_b;
        if (!keep) return out;
        IncrementalBasis basis(dim(w), bw.rows() + zw.rows());
        for (std::size_t i = 0; i < bw.rows(); ++i) basis.insert(bw.row(i));
        out.reps = F2Matrix(0, n());
        for (std::size_t i = 0; i < zw.rows(); ++i)
            if (basis.insert(zw.row(i))) {
                out.reps.push_row(z.row(i));
                out.slots.push_back(bw.rows() + i);
            }
        if (out.slots.size() != out.dim) throw InternalError("boundaries are not contained in cycles on a page");
        out.basis.emplace(std::move(basis));
        return out;
    }

    /// Matrix of d_r from E_r^w to E_r^{w+r}.
    F2Matrix differential(const WeightPage& src, int w, const WeightPage& dst, int r) const {
        F2Matrix m(dst.dim, src.dim);
        if (src.dim == 0 || dst.dim == 0) return m;
        auto images = project(apply(src.reps), w + r);
        for (std::size_t c = 0; c < src.reps.rows(); ++c) {
            auto coords = dst.basis->coordinates(images.row(c));
            for (std::size_t k = 0; k < dst.slots.size(); ++k)
                if (test_bit(coords, dst.slots[k])) m.set(k, c, true);
        }
        return m;
    }

private:
    std::vector<std::size_t> order_;
    std::vector<std::size_t> lo_;
    int wmin_ = 0;
    int wmax_ = 0;
    F2Matrix d_;
    F2Matrix dt_;
};

inline void check_page_step(const Page& cur, const Page& next) {
    for (const auto& [w, d] : cur.dims) {
        std::size_t out = cur.differential_rank.count(w) ? cur.differential_rank.at(w) : 0;
        std::size_t in = cur.differential_rank.count(w - cur.r) ? cur.differential_rank.at(w - cur.r) : 0;
        if (out + in > d || next.dims.at(w) != d - out - in)
            throw InternalError("page E_" + std::to_string(next.r) + " at weight " + std::to_string(w) +
                                " disagrees with the ranks of d_" + std::to_string(cur.r));
    }
}

inline SpectralPages dense_pages(const FilteredComplex& fc, const PageOptions& opt) {
    if (fc.size() > opt.dense_limit)
        throw InputError("complex of dimension " + std::to_string(fc.size()) +
                         " exceeds the dense page engine limit of " + std::to_string(opt.dense_limit));
    DensePageEngine eng(fc);
    SpectralPages sp;
    sp.min_weight = eng.wmin();
    sp.max_weight = eng.wmax();
    const int r_inf = std::max(1, eng.wmax() - eng.wmin() + 1);

    sp.infinity.r = 0;
    for (int w = eng.wmin(); w <= eng.wmax(); ++w) sp.infinity.dims[w] = eng.page_at(w, r_inf, false).dim;
    sp.infinity.total = total_of(sp.infinity.dims);

    const int last = opt.r_max ? *opt.r_max : (opt.stop_at_stabilization ? r_inf : r_inf + 1);
    for (int r = 1; r <= last; ++r) {
        Page page;
        page.r = r;
        std::map<int, DensePageEngine::WeightPage> wp;
        for (int w = eng.wmin(); w <= eng.wmax(); ++w) {
            wp.emplace(w, eng.page_at(w, r, true));
            page.dims[w] = wp.at(w).dim;
        }
        page.total = total_of(page.dims);
        for (int w = eng.wmin(); w + r <= eng.wmax(); ++w) {
            auto m = eng.differential(wp.at(w), w, wp.at(w + r), r);
            page.differential_rank[w] = rank(m);
            if (opt.keep_differentials) page.differential.emplace(w, std::move(m));
        }
        if (!sp.pages.empty()) check_page_step(sp.pages.back(), page);
        const bool stable = page.dims == sp.infinity.dims;
        sp.pages.push_back(std::move(page));
        if (stable && !sp.stabilization) sp.stabilization = r;
        if (stable && opt.stop_at_stabilization && !opt.r_max) break;
    }
    return sp;
}

/// D = D_1: E_1 is the chain group, E_2 = E_infinity is the homology of D_1,
/// computed from the ranks of the sparse weight blocks.
inline SpectralPages block_rank_pages(const FilteredComplex& fc, const PageOptions& opt) {
    SpectralPages sp;
    sp.d1_only = true;
    sp.min_weight = fc.min_weight();
    sp.max_weight = fc.max_weight();
    std::map<int, std::vector<std::size_t>> by_weight;
    for (std::size_t g = 0; g < fc.size(); ++g) by_weight[fc.weight(g)].push_back(g);
    for (int w = sp.min_weight; w <= sp.max_weight; ++w) by_weight[w];

    std::vector<SparseF2Matrix::Index> local(fc.size());
    for (auto& [w, gens] : by_weight)
        for (std::size_t i = 0; i < gens.size(); ++i) local[gens[i]] = static_cast<SparseF2Matrix::Index>(i);

    const auto d1 = fc.components().count(1) ? fc.components().at(1) : SparseF2Matrix(fc.size(), fc.size());
    Page e1;
    e1.r = 1;
    for (auto& [w, gens] : by_weight) e1.dims[w] = gens.size();
    e1.total = total_of(e1.dims);
    std::vector<char> cleared(by_weight.at(sp.min_weight).size(), 0);
    for (int w = sp.min_weight; w < sp.max_weight; ++w) {
        const auto& src = by_weight.at(w);
        const auto& dst = by_weight.at(w + 1);
        SparseF2Matrix block(dst.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            if (cleared[c]) continue;
            SparseF2Matrix::Column col;
            for (auto i : d1.column(src[c])) col.push_back(local[i]);
            block.set_column(c, std::move(col));
        }
        // A pivot row i of d_w is the top entry of a cycle, so column i of
        // d_{w+1} depends on earlier columns and can be dropped ("clearing").
        std::vector<char> next(dst.size(), 0);
        e1.differential_rank[w] = block.rank(&next);
        cleared = std::move(next);
        if (opt.keep_differentials && src.size() <= opt.dense_limit && dst.size() <= opt.dense_limit) {
            SparseF2Matrix full(dst.size(), src.size());
            for (std::size_t c = 0; c < src.size(); ++c) {
                SparseF2Matrix::Column col;
                for (auto i : d1.column(src[c])) col.push_back(local[i]);
                full.set_column(c, std::move(col));
            }
            e1.differential.emplace(w, full.to_dense());
        }
    }
    Page e2;
    e2.r = 2;
    for (auto& [w, d] : e1.dims) {
        std::size_t out = e1.differential_rank.count(w) ? e1.differential_rank.at(w) : 0;
        std::size_t in = e1.differential_rank.count(w - 1) ? e1.differential_rank.at(w - 1) : 0;
        e2.dims[w] = d - out - in;
    }
    e2.total = total_of(e2.dims);
    sp.infinity.r = 0;
    sp.infinity.dims = e2.dims;
    sp.infinity.total = e2.total;

    const int r_inf = std::max(1, sp.spread() + 1);
    const int last = opt.r_max ? *opt.r_max : (opt.stop_at_stabilization ? r_inf : r_inf + 1);
    const bool e1_stable = e1.dims == sp.infinity.dims;
    sp.pages.push_back(std::move(e1));
    if (e1_stable) sp.stabilization = 1;
    for (int r = 2; r <= last; ++r) {
        if (sp.stabilization && opt.stop_at_stabilization && !opt.r_max) break;
        Page p = e2;
        p.r = r;
        for (int w = sp.min_weight; w + r <= sp.max_weight; ++w) {
            p.differential_rank[w] = 0;
            if (opt.keep_differentials) p.differential.emplace(w, F2Matrix(p.dims.at(w + r), p.dims.at(w)));
        }
        sp.pages.push_back(std::move(p));
        if (!sp.stabilization) sp.stabilization = r;
    }
    return sp;
}

}  // namespace detail

/// Pages E_1, E_2, ... up to `r_max` or until they agree with E_infinity.
/// Throws DSquaredError if D does not square to zero.
inline SpectralPages compute_pages(const FilteredComplex& fc, const PageOptions& opt = {}) {
    if (opt.r_max && *opt.r_max < 1) throw InputError("r_max must be at least 1");
    if (!opt.verify_d_squared) {
        if (fc.d1_only() && !opt.force_dense) return detail::block_rank_pages(fc, opt);
        return detail::dense_pages(fc, opt);
    }
    auto check = verify_d_squared(fc);
    if (!check.ok)
        throw DSquaredError("D*D is nonzero on generator " + std::to_string(*check.witness), std::move(check));
    if (fc.d1_only() && !opt.force_dense) return detail::block_rank_pages(fc, opt);
    return detail::dense_pages(fc, opt);
}

struct BoundsReport {
    /// (page, total) from E_1 down to the last computed page; each total is an
    /// upper bound for every later one and for the limit.
    std::vector<std::pair<int, std::size_t>> chain;
    std::size_t infinity_total = 0;
    std::map<int, std::vector<std::size_t>> per_weight;  // weight -> dims along the chain
    std::size_t e1_bound = 0;  // sum of vertex homologies: the cube bound on the limit
    bool monotone = true;
};

inline BoundsReport rank_bounds(const SpectralPages& sp) {
    BoundsReport b;
    b.infinity_total = sp.infinity.total;
    for (const auto& p : sp.pages) {
        b.chain.emplace_back(p.r, p.total);
        for (const auto& [w, d] : p.dims) b.per_weight[w].push_back(d);
    }
    if (!sp.pages.empty()) b.e1_bound = sp.pages.front().total;
    for (std::size_t i = 1; i < b.chain.size(); ++i)
        if (b.chain[i].second > b.chain[i - 1].second) b.monotone = false;
    for (const auto& [w, dims] : b.per_weight)
        for (std::size_t i = 1; i < dims.size(); ++i)
            if (dims[i] > dims[i - 1]) b.monotone = false;
    if (!b.chain.empty() && b.chain.back().second < b.infinity_total) b.monotone = false;
    return b;
}

/// A block of a higher differential in generator coordinates: rows are the
/// generators dst_offset.., columns src_offset...
struct GeneratorBlock {
    int shift = 2;
    std::size_t src_offset = 0;
    std::size_t dst_offset = 0;
    F2Matrix block;
};

/// Adds the supplied blocks to D. Rejects blocks with shift < 2 or entries
/// that do not raise weight by exactly `shift`; throws DSquaredError if the
/// augmented differential no longer squares to zero.
inline FilteredComplex load_higher_maps(const FilteredComplex& fc, const std::vector<GeneratorBlock>& blocks) {
    FilteredComplex out = fc;
    std::map<int, SparseF2Matrix> add;
    for (const auto& b : blocks) {
        if (b.shift < 2) throw InputError("higher map block has shift " + std::to_string(b.shift) + " < 2");
        if (b.src_offset + b.block.cols() > fc.size() || b.dst_offset + b.block.rows() > fc.size())
            throw InputError("higher map block exceeds the complex");
        auto [it, fresh] = add.try_emplace(b.shift, fc.size(), fc.size());
        auto& m = it->second;
        std::vector<SparseF2Matrix::Column> cols(b.block.cols());
        for (std::size_t i = 0; i < b.block.rows(); ++i)
            F2Matrix::for_each_set_bit(b.block.row(i), [&](std::size_t j) {
                cols[j].push_back(static_cast<SparseF2Matrix::Index>(b.dst_offset + i));
            });
        SparseF2Matrix piece(fc.size(), fc.size());
        for (std::size_t j = 0; j < cols.size(); ++j) piece.set_column(b.src_offset + j, std::move(cols[j]));
        m += piece;
    }
    for (auto& [r, m] : add) out.add_component(r, m);
    auto check = verify_d_squared(out);
    if (!check.ok)
        throw DSquaredError("higher maps break D*D = 0 at generator " + std::to_string(*check.witness), std::move(check));
    return out;
}

}  // namespace twistcube
