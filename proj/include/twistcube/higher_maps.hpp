#pragma once

// Text table of externally supplied higher cube maps mu_{I,J}.
//
// One record per block, whitespace-delimited, '#' starts a comment:
//
//   <r> <I> <J> <row_1> ... <row_m>
//
// r >= 2 is the page shift, I and J are vertex bit strings (character i is the
// bit of twist i) with I < J componentwise and |J| - |I| = r, and the m =
// 2^{c(J)} rows are 0/1 strings of length 2^{c(I)}; character j of a row is
// column j (row-major, column 0 first).

#include <bit>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "twistcube/cube.hpp"
#include "twistcube/errors.hpp"
#include "twistcube/f2linalg.hpp"
#include "twistcube/specseq.hpp"
#include "twistcube/tqft.hpp"

namespace twistcube {

struct HigherMapRecord {
    int r = 2;
    Vertex source = 0;
    Vertex target = 0;
    F2Matrix block;
};

inline std::vector<HigherMapRecord> parse_higher_map_table(std::istream& in, const ChainComplexF2& cx) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    std::vector<HigherMapRecord> out;
    std::set<std::pair<Vertex, Vertex>> seen;
    std::size_t pos = 0;
    auto need = [&](const char* what) -> const std::string& {
        if (pos >= tokens.size())
            throw InputError(std::string("higher-map table: record ") + std::to_string(out.size() + 1) + " is missing " + what);
        return tokens[pos++];
    };
    const auto count = static_cast<Vertex>(cx.offset.size() - 1);
    while (pos < tokens.size()) {
        HigherMapRecord rec;
        const std::string& rt = need("the page shift");
        try {
            std::size_t used = 0;
            rec.r = std::stoi(rt, &used);
            if (used != rt.size()) throw std::invalid_argument(rt);
        } catch (const std::logic_error&) {
            throw InputError("higher-map table: bad page shift '" + rt + "'");
        }
        rec.source = parse_vertex(need("the source vertex"), cx.n);
        rec.target = parse_vertex(need("the target vertex"), cx.n);
        const std::string where = "record " + std::to_string(rec.r) + " " + vertex_string(rec.source, cx.n) + " " +
                                  vertex_string(rec.target, cx.n);
        if (rec.r < 2) throw InputError("higher-map table: " + where + " has shift below 2");
        if (rec.source >= count || rec.target >= count || (rec.source & rec.target) != rec.source ||
            rec.source == rec.target)
            throw InputError("higher-map table: " + where + " does not satisfy I < J");
        if (std::popcount(rec.target) - std::popcount(rec.source) != rec.r)
            throw InputError("higher-map table: " + where + " raises weight by " +
                             std::to_string(std::popcount(rec.target) - std::popcount(rec.source)) + ", not r");
        if (!seen.emplace(rec.source, rec.target).second) throw InputError("higher-map table: duplicate " + where);
        const std::size_t rows = cx.vertex_dim(rec.target);
        const std::size_t cols = cx.vertex_dim(rec.source);
        std::vector<std::string> bits;
        for (std::size_t i = 0; i < rows; ++i) bits.push_back(need("matrix rows"));
        try {
            rec.block = F2Matrix::from_strings(bits, cols);
        } catch (const std::invalid_argument& e) {
            throw InputError("higher-map table: " + where + ": " + e.what());
        }
        out.push_back(std::move(rec));
    }
    return out;
}

inline void write_higher_map_table(std::ostream& os, const std::vector<HigherMapRecord>& records, int n) {
    for (const auto& rec : records) {
        os << rec.r << ' ' << vertex_string(rec.source, n) << ' ' << vertex_string(rec.target, n) << '\n';
        for (std::size_t i = 0; i < rec.block.rows(); ++i) os << "  " << rec.block.row_string(i) << '\n';
    }
}

/// The cube complex with the supplied blocks added to D.
inline ChainComplexF2 load_higher_maps(const ChainComplexF2& cx, const std::vector<HigherMapRecord>& records) {
    std::vector<GeneratorBlock> blocks;
    for (const auto& rec : records) {
        if (rec.block.rows() != cx.vertex_dim(rec.target) || rec.block.cols() != cx.vertex_dim(rec.source))
            throw InputError("higher map block " + vertex_string(rec.source, cx.n) + " -> " +
                             vertex_string(rec.target, cx.n) + " has the wrong shape");
        blocks.push_back({rec.r, cx.offset[rec.source], cx.offset[rec.target], rec.block});
    }
    ChainComplexF2 out = cx;
    out.complex = load_higher_maps(cx.complex, blocks);
    return out;
}

}  // namespace twistcube
