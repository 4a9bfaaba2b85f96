#pragma once

// Page dimensions of a filtered complex from a persistence pairing.
//
// Generators are ordered by decreasing weight so every prefix is a
// subcomplex. Standard column reduction pairs each reduced column j with its
// lowest row i; the pair (i, j) is a class born at weight w_j and killed by
// d_r with r = w_i - w_j, so it is present on E_r for 1 <= r <= w_i - w_j at
// both weights. Unpaired generators survive to E_infinity.

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

struct PersistencePages {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (killed generator, killing generator), original ids
    std::vector<std::size_t> essential;
    std::vector<int> weight;

    std::map<int, std::size_t> page(int r) const {
        std::map<int, std::size_t> dims;
        for (int w : weight) dims[w];
        for (auto g : essential) ++dims[weight[g]];
        for (auto [i, j] : pairs)
            if (weight[i] - weight[j] >= r) {
                ++dims[weight[i]];
                ++dims[weight[j]];
            }
        return dims;
    }

    std::map<int, std::size_t> infinity() const {
        std::map<int, std::size_t> dims;
        for (int w : weight) dims[w];
        for (auto g : essential) ++dims[weight[g]];
        return dims;
    }
};

/// `columns[j]` lists the generators in D(g_j).
inline PersistencePages persistence_pages(const std::vector<int>& weight,
                                          const std::vector<std::vector<std::size_t>>& columns) {
    const std::size_t n = weight.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });
    std::vector<std::size_t> pos(n);
    for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;

    // columns as dense bit rows in sorted coordinates
    std::vector<std::vector<char>> col(n, std::vector<char>(n, 0));
    for (std::size_t j = 0; j < n; ++j)
        for (auto i : columns[j]) col[pos[j]][pos[i]] ^= 1;
    auto low = [&](std::size_t c) -> long {
        for (std::size_t i = n; i-- > 0;)
            if (col[c][i]) return static_cast<long>(i);
        return -1;
    };
    std::vector<long> owner(n, -1);
    std::vector<char> paired(n, 0);
    PersistencePages out;
    out.weight = weight;
    for (std::size_t c = 0; c < n; ++c) {
        long l = low(c);
        while (l >= 0 && owner[static_cast<std::size_t>(l)] >= 0) {
            auto other = static_cast<std::size_t>(owner[static_cast<std::size_t>(l)]);
            for (std::size_t i = 0; i < n; ++i) col[c][i] ^= col[other][i];
            l = low(c);
        }
        if (l >= 0) {
            owner[static_cast<std::size_t>(l)] = static_cast<long>(c);
            paired[static_cast<std::size_t>(l)] = 1;
            paired[c] = 1;
            out.pairs.emplace_back(order[static_cast<std::size_t>(l)], order[c]);
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        if (!paired[k]) out.essential.push_back(order[k]);
    return out;
}

}  // namespace oracle
