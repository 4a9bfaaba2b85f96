#pragma once

// Exact linear algebra over GF(2).
//
// F2Matrix is dense and bit-packed: one row is a run of 64-bit words, column j
// lives in bit (j % 64) of word (j / 64). Pad bits past `cols` are always zero.
// SparseF2Matrix stores sorted row-index lists per column and is used for the
// large, very sparse cube differentials.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twistcube {

class F2Matrix {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

    static F2Matrix identity(std::size_t n) {
        F2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    /// Rows given as 0/1 strings; character j is column j.
    static F2Matrix from_strings(const std::vector<std::string>& rows, std::size_t cols) {
        F2Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw std::invalid_argument("F2Matrix::from_strings: row " + std::to_string(i) +
                                            " has length " + std::to_string(rows[i].size()) +
                                            ", expected " + std::to_string(cols));
            for (std::size_t j = 0; j < cols; ++j) {
                char c = rows[i][j];
                if (c == '1')
                    m.set(i, j, true);
                else if (c != '0')
                    throw std::invalid_argument("F2Matrix::from_strings: bad character in row " +
                                                std::to_string(i));
            }
        }
        return m;
    }

    static constexpr std::size_t words_for(std::size_t bits) {
        return (bits + kWordBits - 1) / kWordBits;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stride() const { return stride_; }

    bool get(std::size_t i, std::size_t j) const {
        return (data_[i * stride_ + j / kWordBits] >> (j % kWordBits)) & 1U;
    }
    void set(std::size_t i, std::size_t j, bool v) {
        Word& w = data_[i * stride_ + j / kWordBits];
        Word mask = Word{1} << (j % kWordBits);
        w = v ? (w | mask) : (w & ~mask);
    }
    void flip(std::size_t i, std::size_t j) {
        data_[i * stride_ + j / kWordBits] ^= Word{1} << (j % kWordBits);
    }

    std::span<Word> row(std::size_t i) { return {data_.data() + i * stride_, stride_}; }
    std::span<const Word> row(std::size_t i) const { return {data_.data() + i * stride_, stride_}; }

    void xor_row_into(std::size_t dst, std::size_t src) {
        Word* d = data_.data() + dst * stride_;
        const Word* s = data_.data() + src * stride_;
        for (std::size_t k = 0; k < stride_; ++k) d[k] ^= s[k];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                         data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                         data_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
    }
    bool row_is_zero(std::size_t i) const {
        auto r = row(i);
        return std::all_of(r.begin(), r.end(), [](Word w) { return w == 0; });
    }
    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](Word w) { return w == 0; });
    }
    std::size_t popcount() const {
        std::size_t n = 0;
        for (Word w : data_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    /// Appends a row; `bits` must have stride() words with clear pad bits.
    void push_row(std::span<const Word> bits) {
        if (bits.size() != stride_) throw std::invalid_argument("F2Matrix::push_row: width mismatch");
        data_.insert(data_.end(), bits.begin(), bits.end());
        ++rows_;
    }

    F2Matrix transpose() const {
        F2Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for_each_set_bit(row(i), [&](std::size_t j) { t.set(j, i, true); });
        return t;
    }

    /// Rows [r0, r1) and columns [c0, c1).
    F2Matrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
        F2Matrix b(r1 - r0, c1 - c0);
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = c0; j < c1; ++j)
                if (get(i, j)) b.set(i - r0, j - c0, true);
        return b;
    }

    std::string row_string(std::size_t i) const {
        std::string s(cols_, '0');
        for (std::size_t j = 0; j < cols_; ++j)
            if (get(i, j)) s[j] = '1';
        return s;
    }

    /// Storage invariant: pad bits beyond `cols` are zero.
    bool pad_bits_clear() const {
        if (cols_ % kWordBits == 0 || stride_ == 0) return true;
        Word mask = ~Word{0} << (cols_ % kWordBits);
        for (std::size_t i = 0; i < rows_; ++i)
            if (data_[i * stride_ + stride_ - 1] & mask) return false;
        return true;
    }

    friend bool operator==(const F2Matrix& a, const F2Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    template <class F>
    static void for_each_set_bit(std::span<const Word> bits, F&& f) {
        for (std::size_t k = 0; k < bits.size(); ++k) {
            Word w = bits[k];
            while (w) {
                f(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    /// Index of the lowest set bit, or `npos` if none.
    static std::size_t first_set_bit(std::span<const Word> bits) {
        for (std::size_t k = 0; k < bits.size(); ++k)
            if (bits[k]) return k * kWordBits + static_cast<std::size_t>(std::countr_zero(bits[k]));
        return npos;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> data_;
};

inline void xor_into(std::span<F2Matrix::Word> dst, std::span<const F2Matrix::Word> src) {
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= src[k];
}

inline bool test_bit(std::span<const F2Matrix::Word> bits, std::size_t j) {
    return (bits[j / F2Matrix::kWordBits] >> (j % F2Matrix::kWordBits)) & 1U;
}

struct RrefResult {
    F2Matrix echelon;                 // reduced row-echelon form, zero rows at the bottom
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;  // pivot column of echelon row i, i < rank
};

/// Gauss-Jordan elimination with the leftmost available pivot column.
inline RrefResult rref(F2Matrix m) {
    RrefResult out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && m.get(i, c)) m.xor_row_into(i, r);
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    out.echelon = std::move(m);
    return out;
}

/// Rank by forward elimination only (no back substitution).
inline std::size_t rank(F2Matrix m) {
    std::size_t r = 0;
    const std::size_t stride = m.stride();
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        const std::size_t wi = c / F2Matrix::kWordBits;
        const F2Matrix::Word mask = F2Matrix::Word{1} << (c % F2Matrix::kWordBits);
        std::size_t p = r;
        while (p < m.rows() && !(m.row(p)[wi] & mask)) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        auto pr = m.row(r);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            auto ri = m.row(i);
            if (ri[wi] & mask)
                for (std::size_t k = wi; k < stride; ++k) ri[k] ^= pr[k];
        }
        ++r;
    }
    return r;
}

/// Product over GF(2): each set bit a(i,k) XORs row k of b into row i of the result.
inline F2Matrix matmul(const F2Matrix& a, const F2Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: shape mismatch " + std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                                    "x" + std::to_string(b.cols()));
    F2Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        F2Matrix::for_each_set_bit(a.row(i), [&](std::size_t k) { xor_into(ci, b.row(k)); });
    }
    return c;
}

/// A linear subspace of GF(2)^ambient, stored as a reduced row-echelon basis.
class Subspace {
public:
    explicit Subspace(std::size_t ambient = 0) : basis_(0, ambient) {}

    /// Span of the rows of `rows`.
    static Subspace span_of(const F2Matrix& rows) {
        Subspace s(rows.cols());
        auto r = rref(rows);
        s.basis_ = F2Matrix(0, rows.cols());
        for (std::size_t i = 0; i < r.rank; ++i) s.basis_.push_row(r.echelon.row(i));
        s.pivots_ = std::move(r.pivots);
        return s;
    }

    static Subspace full(std::size_t ambient) { return span_of(F2Matrix::identity(ambient)); }

    std::size_t ambient() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    const F2Matrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool contains(std::span<const F2Matrix::Word> v) const {
        std::vector<F2Matrix::Word> w(v.begin(), v.end());
        for (std::size_t i = 0; i < dim(); ++i)
            if (test_bit(w, pivots_[i])) xor_into(w, basis_.row(i));
        return std::all_of(w.begin(), w.end(), [](F2Matrix::Word x) { return x == 0; });
    }

    /// True iff every basis vector of `other` lies in this subspace.
    bool contains(const Subspace& other) const {
        if (other.ambient() != ambient()) return false;
        for (std::size_t i = 0; i < other.dim(); ++i)
            if (!contains(other.basis().row(i))) return false;
        return true;
    }

private:
    F2Matrix basis_;
    std::vector<std::size_t> pivots_;
};

/// Basis of {x : m x = 0}, one vector per free column, as rows of a cols()-wide matrix.
inline F2Matrix kernel_vectors(const F2Matrix& m) {
    auto r = rref(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (auto p : r.pivots) is_pivot[p] = 1;
    F2Matrix k(0, m.cols());
    std::vector<F2Matrix::Word> v(F2Matrix::words_for(m.cols()));
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::fill(v.begin(), v.end(), 0);
        v[f / F2Matrix::kWordBits] |= F2Matrix::Word{1} << (f % F2Matrix::kWordBits);
        for (std::size_t i = 0; i < r.rank; ++i)
            if (r.echelon.get(i, f))
                v[r.pivots[i] / F2Matrix::kWordBits] |= F2Matrix::Word{1}
                                                        << (r.pivots[i] % F2Matrix::kWordBits);
        k.push_row(v);
    }
    return k;
}

inline Subspace kernel_basis(const F2Matrix& m) { return Subspace::span_of(kernel_vectors(m)); }

/// Column space of m, spanned by the pivot columns of its echelon form.
inline Subspace image_basis(const F2Matrix& m) {
    auto r = rref(m);
    auto t = m.transpose();
    F2Matrix cols(0, m.rows());
    for (auto p : r.pivots) cols.push_row(t.row(p));
    return Subspace::span_of(cols);
}

/// dim V - dim W for W a subspace of V.
inline std::size_t quotient_dim(const Subspace& v, const Subspace& w) {
    if (!v.contains(w)) throw std::invalid_argument("quotient_dim: W is not contained in V");
    return v.dim() - w.dim();
}

/// Semi-echelon basis built one vector at a time. Each stored row remembers
/// which inserted vectors it combines (as a bitset over insertion order), so a
/// vector in the span can be written in terms of the inserted ones.
class IncrementalBasis {
public:
    IncrementalBasis(std::size_t ambient, std::size_t max_inserts)
        : ambient_(ambient), tag_words_(F2Matrix::words_for(max_inserts)) {}

    std::size_t dim() const { return pivots_.size(); }
    std::size_t inserted() const { return inserted_; }

    /// Reduces v in place; `tag` (if non-null) accumulates the combination used.
    void reduce(std::vector<F2Matrix::Word>& v, std::vector<F2Matrix::Word>* tag) const {
        for (std::size_t i = 0; i < pivots_.size(); ++i) {
            if (!test_bit(v, pivots_[i])) continue;
            xor_into(v, rows_[i]);
            if (tag) xor_into(*tag, tags_[i]);
        }
    }

    /// Inserts v; returns true iff it was independent of the current span.
    bool insert(std::span<const F2Matrix::Word> v) {
        std::vector<F2Matrix::Word> w(v.begin(), v.end());
        std::vector<F2Matrix::Word> tag(tag_words_, 0);
        tag[inserted_ / F2Matrix::kWordBits] |= F2Matrix::Word{1} << (inserted_ % F2Matrix::kWordBits);
        ++inserted_;
        reduce(w, &tag);
        std::size_t p = F2Matrix::first_set_bit(w);
        if (p == F2Matrix::npos) return false;
        pivots_.push_back(p);
        rows_.push_back(std::move(w));
        tags_.push_back(std::move(tag));
        return true;
    }

    /// Coefficients (over insertion order) expressing v; throws if v is not in the span.
    std::vector<F2Matrix::Word> coordinates(std::span<const F2Matrix::Word> v) const {
        std::vector<F2Matrix::Word> w(v.begin(), v.end());
        std::vector<F2Matrix::Word> tag(tag_words_, 0);
        reduce(w, &tag);
        if (F2Matrix::first_set_bit(w) != F2Matrix::npos)
            throw std::invalid_argument("IncrementalBasis::coordinates: vector not in span");
        return tag;
    }

    bool contains(std::span<const F2Matrix::Word> v) const {
        std::vector<F2Matrix::Word> w(v.begin(), v.end());
        reduce(w, nullptr);
        return F2Matrix::first_set_bit(w) == F2Matrix::npos;
    }

    std::size_t ambient() const { return ambient_; }

private:
    std::size_t ambient_;
    std::size_t tag_words_;
    std::size_t inserted_ = 0;
    std::vector<std::size_t> pivots_;
    std::vector<std::vector<F2Matrix::Word>> rows_;
    std::vector<std::vector<F2Matrix::Word>> tags_;
};

/// Column-sparse matrix over GF(2): each column is a sorted list of row indices.
class SparseF2Matrix {
public:
    using Index = std::uint32_t;
    using Column = std::vector<Index>;

    SparseF2Matrix() = default;
    SparseF2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }
    const Column& column(std::size_t j) const { return columns_[j]; }
    const std::vector<Column>& columns() const { return columns_; }

    /// Sets column j to the GF(2) sum of the listed rows (duplicates cancel).
    void set_column(std::size_t j, Column rows) {
        std::sort(rows.begin(), rows.end());
        Column out;
        for (std::size_t i = 0; i < rows.size();) {
            std::size_t k = i;
            while (k < rows.size() && rows[k] == rows[i]) ++k;
            if ((k - i) % 2 == 1) out.push_back(rows[i]);
            i = k;
        }
        if (!out.empty() && out.back() >= rows_)
            throw std::invalid_argument("SparseF2Matrix::set_column: row index out of range");
        columns_[j] = std::move(out);
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (auto& c : columns_) n += c.size();
        return n;
    }
    bool is_zero() const {
        return std::all_of(columns_.begin(), columns_.end(), [](const Column& c) { return c.empty(); });
    }

    F2Matrix to_dense() const {
        F2Matrix m(rows_, cols());
        for (std::size_t j = 0; j < cols(); ++j)
            for (Index i : columns_[j]) m.set(i, j, true);
        return m;
    }

    static SparseF2Matrix from_dense(const F2Matrix& m) {
        SparseF2Matrix s(m.rows(), m.cols());
        auto t = m.transpose();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Column c;
            F2Matrix::for_each_set_bit(t.row(j), [&](std::size_t i) { c.push_back(static_cast<Index>(i)); });
            s.columns_[j] = std::move(c);
        }
        return s;
    }

    /// Symmetric difference of two sorted index lists.
    static Column add(const Column& a, const Column& b) {
        Column out;
        out.reserve(a.size() + b.size());
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }

    /// this * x for a sparse vector x given as sorted column indices.
    Column apply(const Column& x) const {
        Column acc;
        for (Index j : x) {
            acc.insert(acc.end(), columns_[j].begin(), columns_[j].end());
        }
        std::sort(acc.begin(), acc.end());
        Column out;
        for (std::size_t i = 0; i < acc.size();) {
            std::size_t k = i;
            while (k < acc.size() && acc[k] == acc[i]) ++k;
            if ((k - i) % 2 == 1) out.push_back(acc[i]);
            i = k;
        }
        return out;
    }

    /// this * other.
    SparseF2Matrix compose(const SparseF2Matrix& other) const {
        if (other.rows() != cols()) throw std::invalid_argument("SparseF2Matrix::compose: shape mismatch");
        SparseF2Matrix out(rows_, other.cols());
        for (std::size_t j = 0; j < other.cols(); ++j) out.columns_[j] = apply(other.columns_[j]);
        return out;
    }

    SparseF2Matrix& operator+=(const SparseF2Matrix& o) {
        if (o.rows_ != rows_ || o.cols() != cols()) throw std::invalid_argument("SparseF2Matrix::+=: shape mismatch");
        for (std::size_t j = 0; j < cols(); ++j)
            if (!o.columns_[j].empty()) columns_[j] = add(columns_[j], o.columns_[j]);
        return *this;
    }

    friend bool operator==(const SparseF2Matrix& a, const SparseF2Matrix& b) {
        return a.rows_ == b.rows_ && a.columns_ == b.columns_;
    }

    /// Rank by column reduction keyed on the largest row index of each column.
    /// If `pivot_rows` is given (sized rows()), the pivot rows are marked in it.
    std::size_t rank(std::vector<char>* pivot_rows = nullptr) const {
        constexpr std::size_t kNone = static_cast<std::size_t>(-1);
        std::vector<std::size_t> owner(rows_, kNone);
        std::vector<Column> reduced;
        reduced.reserve(cols());
        std::size_t r = 0;
        Column scratch;
        for (std::size_t j = 0; j < cols(); ++j) {
            Column c = columns_[j];
            while (!c.empty() && owner[c.back()] != kNone) {
                const Column& p = reduced[owner[c.back()]];
                scratch.clear();
                std::set_symmetric_difference(c.begin(), c.end(), p.begin(), p.end(),
                                              std::back_inserter(scratch));
                c.swap(scratch);
            }
            if (c.empty()) continue;
            if (pivot_rows) (*pivot_rows)[c.back()] = 1;
            owner[c.back()] = reduced.size();
            reduced.push_back(std::move(c));
            ++r;
        }
        return r;
    }

private:
    std::size_t rows_ = 0;
    std::vector<Column> columns_;
};

}  // namespace twistcube
