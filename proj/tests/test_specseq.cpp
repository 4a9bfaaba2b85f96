#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles/complexes.hpp"
#include "twistcube/higher_maps.hpp"
#include "twistcube/specseq.hpp"

using namespace twistcube;

namespace {

FilteredComplex two_generator_cone() {
    FilteredComplex fc({0, 1});
    SparseF2Matrix d(2, 2);
    d.set_column(0, {1});
    fc.add_component(1, d);
    return fc;
}

ChainComplexF2 cube_complex(const std::string& word, int strands) {
    return assemble_complex(build_plat_cube(parse_braid_word(word, strands), PlatClosure::standard(strands), false));
}

PageOptions all_pages(const FilteredComplex& fc, bool dense) {
    PageOptions opt;
    opt.r_max = fc.max_weight() - fc.min_weight() + 2;
    opt.force_dense = dense;
    return opt;
}

void expect_matches_persistence(const FilteredComplex& fc) {
    auto sp = compute_pages(fc, all_pages(fc, true));
    auto ref = oracle::persistence_of(fc);
    for (const auto& p : sp.pages) EXPECT_EQ(p.dims, ref.page(p.r)) << "page " << p.r;
    EXPECT_EQ(sp.infinity.dims, ref.infinity());
}

}  // namespace

TEST(FilteredComplex, AddComponentChecksWeights) {
    FilteredComplex fc({0, 1, 2});
    SparseF2Matrix bad(3, 3);
    bad.set_column(0, {2});
    EXPECT_THROW(fc.add_component(1, bad), InputError);
    EXPECT_NO_THROW(fc.add_component(2, bad));
    EXPECT_THROW(fc.add_component(1, SparseF2Matrix(2, 2)), InputError);
    EXPECT_THROW(fc.add_component(-1, SparseF2Matrix(3, 3)), InputError);
    fc.add_component(2, bad);  // cancels
    EXPECT_TRUE(fc.components().empty());
}

TEST(VerifyDSquared, CubeComplexesPass) {
    for (const char* w : {"s2 s2 s2", "s2 s2 s1^-1 s2", "s1 s3 s2^-1"})
        EXPECT_TRUE(verify_d_squared(cube_complex(w, 4).complex).ok) << w;
}

TEST(VerifyDSquared, CorruptedEdgeGivesWitness) {
    auto cx = cube_complex("s2 s2 s2", 4);
    // add a stray entry from generator 0 (vertex 000) into vertex 100
    SparseF2Matrix extra(cx.total_dim(), cx.total_dim());
    extra.set_column(0, {static_cast<SparseF2Matrix::Index>(cx.offset[1] + 1)});
    auto fc = cx.complex;
    fc.add_component(1, extra);
    auto check = verify_d_squared(fc);
    ASSERT_FALSE(check.ok);
    ASSERT_TRUE(check.witness.has_value());
    auto d = fc.total();
    EXPECT_EQ(d.apply(d.column(*check.witness)), check.image);
    EXPECT_FALSE(check.image.empty());
    EXPECT_THROW(compute_pages(fc), DSquaredError);
}

TEST(ComputePages, TwoGeneratorCone) {
    auto fc = two_generator_cone();
    for (bool dense : {false, true}) {
        auto sp = compute_pages(fc, all_pages(fc, dense));
        EXPECT_EQ(sp.page(1).dims, (std::map<int, std::size_t>{{0, 1}, {1, 1}}));
        EXPECT_EQ(sp.page(2).total, 0u);
        EXPECT_EQ(sp.infinity.total, 0u);
        EXPECT_EQ(sp.stabilization, 2);
        auto b = rank_bounds(sp);
        EXPECT_EQ(b.chain.front(), (std::pair<int, std::size_t>{1, 2}));
        EXPECT_EQ(b.infinity_total, 0u);
        EXPECT_TRUE(b.monotone);
    }
}

TEST(ComputePages, UnknotPagesAreAllTwo) {
    auto cx = cube_complex("", 2);
    auto sp = compute_pages(cx.complex, all_pages(cx.complex, false));
    for (const auto& p : sp.pages) EXPECT_EQ(p.total, 2u);
    auto b = rank_bounds(sp);
    EXPECT_EQ(b.e1_bound, 2u);
    EXPECT_EQ(b.infinity_total, 2u);
    EXPECT_EQ(sp.stabilization, 1);
}

TEST(ComputePages, TrefoilE2IsSix) {
    auto cx = cube_complex("s2 s2 s2", 4);
    for (bool dense : {false, true}) {
        PageOptions opt;
        opt.force_dense = dense;
        auto sp = compute_pages(cx.complex, opt);
        EXPECT_EQ(sp.page(1).total, 30u);
        EXPECT_EQ(sp.page(2).total, 6u);
        EXPECT_EQ(sp.infinity.total, 6u);
        EXPECT_EQ(sp.stabilization, 2);
        EXPECT_EQ(sp.page(2).dims, (std::map<int, std::size_t>{{-3, 2}, {-2, 0}, {-1, 2}, {0, 2}}));
        auto b = rank_bounds(sp);
        EXPECT_GE(b.e1_bound, 6u);
        EXPECT_TRUE(b.monotone);
    }
}

TEST(ComputePages, BlockRouteAgreesWithDenseEngine) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 25; ++t) {
        const int strands = 2 * (1 + t % 3);
        auto b = oracle::random_word(rng, strands, 1 + t % 6);
        auto cx = assemble_complex(build_plat_cube(b, PlatClosure::standard(strands), false));
        auto fast = compute_pages(cx.complex, all_pages(cx.complex, false));
        auto dense = compute_pages(cx.complex, all_pages(cx.complex, true));
        EXPECT_TRUE(fast.d1_only);
        ASSERT_EQ(fast.pages.size(), dense.pages.size());
        for (std::size_t i = 0; i < fast.pages.size(); ++i) {
            EXPECT_EQ(fast.pages[i].dims, dense.pages[i].dims) << to_string(b) << " page " << i + 1;
            EXPECT_EQ(fast.pages[i].differential_rank, dense.pages[i].differential_rank);
        }
        EXPECT_EQ(fast.stabilization, dense.stabilization);
        EXPECT_EQ(fast.page(2).dims, fast.infinity.dims);
        expect_matches_persistence(cx.complex);
    }
}

TEST(ComputePages, InjectedBlocksMatchOracles) {
    std::mt19937_64 rng(42);
    int injected = 0;
    int changed_e3 = 0;
    for (int t = 0; t < 40; ++t) {
        auto b = oracle::random_word(rng, 4 + 2 * (t % 2), 3 + t % 3);
        auto cx = assemble_complex(build_plat_cube(b, PlatClosure::standard(b.strands), false));
        auto fc = cx.complex;
        const auto before = compute_pages(fc, all_pages(fc, true));
        bool any = false;
        for (int w = fc.min_weight(); w + 2 <= fc.max_weight(); ++w) any |= oracle::inject_rank_one(rng, fc, w);
        if (!any) continue;
        if (!verify_d_squared(fc).ok) continue;  // two rank-one pieces can interact
        ++injected;
        auto sp = compute_pages(fc, all_pages(fc, true));
        EXPECT_EQ(sp.page(1).dims, before.page(1).dims);
        EXPECT_EQ(sp.page(2).dims, before.page(2).dims);
        if (sp.page(3).total != before.page(3).total) ++changed_e3;
        EXPECT_EQ(sp.infinity.total, oracle::total_homology(fc));
        EXPECT_TRUE(rank_bounds(sp).monotone);
        expect_matches_persistence(fc);
    }
    EXPECT_GT(injected, 20);
    EXPECT_GT(changed_e3, 0);
}

TEST(ComputePages, ConjugationPreservesPages) {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 15; ++t) {
        auto b = oracle::random_word(rng, 4, 2 + t % 4);
        auto cx = assemble_complex(build_plat_cube(b, PlatClosure::standard(4), false));
        auto fc = cx.complex;
        for (int w = fc.min_weight(); w + 2 <= fc.max_weight(); w += 2) oracle::inject_rank_one(rng, fc, w);
        if (!verify_d_squared(fc).ok) continue;
        auto conj = oracle::conjugate(rng, fc, 0.08);
        ASSERT_TRUE(verify_d_squared(conj).ok);
        auto a = compute_pages(fc, all_pages(fc, true));
        auto c = compute_pages(conj, all_pages(conj, true));
        ASSERT_EQ(a.pages.size(), c.pages.size());
        for (std::size_t i = 0; i < a.pages.size(); ++i) EXPECT_EQ(a.pages[i].dims, c.pages[i].dims);
        expect_matches_persistence(conj);
    }
}

TEST(ComputePages, StabilizesBySpreadPlusOne) {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 15; ++t) {
        auto b = oracle::random_word(rng, 4, 2 + t % 4);
        auto cx = assemble_complex(build_plat_cube(b, PlatClosure::standard(4), false));
        auto fc = cx.complex;
        oracle::inject_rank_one(rng, fc, fc.min_weight());
        if (!verify_d_squared(fc).ok) continue;
        PageOptions opt;
        opt.force_dense = true;
        opt.r_max = cx.n + 3;
        auto sp = compute_pages(fc, opt);
        ASSERT_TRUE(sp.stabilization.has_value());
        EXPECT_LE(*sp.stabilization, cx.n + 1);
        for (int r = cx.n + 1; r < cx.n + 3; ++r) EXPECT_EQ(sp.page(r).dims, sp.page(r + 1).dims);
        for (int r = 1; r < cx.n + 3; ++r)
            for (const auto& [w, d] : sp.page(r + 1).dims) EXPECT_LE(d, sp.page(r).dims.at(w));
    }
}

TEST(ComputePages, DifferentialMatricesHavePageShapes) {
    auto cx = cube_complex("s2 s2 s2", 4);
    auto fc = cx.complex;
    std::mt19937_64 rng(45);
    ASSERT_TRUE(oracle::inject_rank_one(rng, fc, -3));
    auto sp = compute_pages(fc, all_pages(fc, true));
    for (const auto& p : sp.pages)
        for (const auto& [w, m] : p.differential) {
            EXPECT_EQ(m.cols(), p.dims.at(w));
            EXPECT_EQ(m.rows(), p.dims.at(w + p.r));
            EXPECT_EQ(rank(m), p.differential_rank.at(w));
        }
}

TEST(ComputePages, Options) {
    auto fc = two_generator_cone();
    PageOptions bad;
    bad.r_max = 0;
    EXPECT_THROW(compute_pages(fc, bad), InputError);
    PageOptions small;
    small.force_dense = true;
    small.dense_limit = 1;
    EXPECT_THROW(compute_pages(fc, small), InputError);
    PageOptions one;
    one.r_max = 1;
    EXPECT_EQ(compute_pages(fc, one).pages.size(), 1u);
}

TEST(LoadHigherMaps, EmptyTableKeepsComplex) {
    auto cx = cube_complex("s2 s2 s2", 4);
    auto out = load_higher_maps(cx.complex, {});
    EXPECT_EQ(out.components(), cx.complex.components());
    EXPECT_EQ(out.weights(), cx.complex.weights());
}

TEST(LoadHigherMaps, ZeroBlockKeepsPages) {
    auto cx = cube_complex("s2 s2 s2", 4);
    GeneratorBlock zero{2, cx.offset[0], cx.offset[3], F2Matrix(cx.vertex_dim(3), cx.vertex_dim(0))};
    auto out = load_higher_maps(cx.complex, {zero});
    EXPECT_EQ(out.components(), cx.complex.components());
    auto a = compute_pages(cx.complex, all_pages(cx.complex, true));
    auto b = compute_pages(out, all_pages(out, true));
    for (std::size_t i = 0; i < a.pages.size(); ++i) EXPECT_EQ(a.pages[i].dims, b.pages[i].dims);
}

TEST(LoadHigherMaps, RejectsBadBlocks) {
    auto cx = cube_complex("s2 s2 s2", 4);
    F2Matrix ones(cx.vertex_dim(1), cx.vertex_dim(0));
    ones.set(0, 0, true);
    // vertex 000 -> 100 raises weight by 1, not 2
    EXPECT_THROW(load_higher_maps(cx.complex, {GeneratorBlock{2, cx.offset[0], cx.offset[1], ones}}), InputError);
    EXPECT_THROW(load_higher_maps(cx.complex, {GeneratorBlock{1, cx.offset[0], cx.offset[1], ones}}), InputError);
    EXPECT_THROW(load_higher_maps(cx.complex, {GeneratorBlock{2, cx.total_dim(), 0, ones}}), InputError);
    // 000 -> 110: weight is right but D*D breaks
    F2Matrix full(cx.vertex_dim(3), cx.vertex_dim(0));
    for (std::size_t i = 0; i < full.rows(); ++i)
        for (std::size_t j = 0; j < full.cols(); ++j) full.set(i, j, true);
    EXPECT_THROW(load_higher_maps(cx.complex, {GeneratorBlock{2, cx.offset[0], cx.offset[3], full}}), DSquaredError);
}

// D = d1 + h on the trefoil cube, h from vertex 000 (weight -3) to the
// weight -1 vertices, built as b phi^T with b a d1-cycle. Every such h keeps
// D*D = 0; the table path (write, parse, load) must reproduce it.
TEST(LoadHigherMaps, TrefoilPerturbationChangesOnlyLaterPages) {
    auto cx = cube_complex("s2 s2 s2", 4);
    const auto d = cx.complex.total().to_dense();
    const auto at = oracle::generators_of_weight(cx.complex, -3);
    const auto top = oracle::generators_of_weight(cx.complex, -1);
    const auto above = oracle::generators_of_weight(cx.complex, 0);
    auto cycles = kernel_vectors(oracle::sub(d, above, top));
    ASSERT_GT(cycles.rows(), 0u);
    ASSERT_LE(cycles.rows(), 12u);
    const auto base = compute_pages(cx.complex, all_pages(cx.complex, true));
    const std::vector<Vertex> targets{3, 5, 6};
    int changed = 0;
    for (unsigned phi = 1; phi < (1U << at.size()); ++phi)
        for (unsigned combo = 1; combo < (1U << cycles.rows()); ++combo) {
            std::vector<std::uint8_t> b(top.size(), 0);
            for (std::size_t i = 0; i < cycles.rows(); ++i)
                if ((combo >> i) & 1U)
                    for (std::size_t j = 0; j < top.size(); ++j) b[j] ^= static_cast<std::uint8_t>(cycles.get(i, j));
            std::vector<HigherMapRecord> records;
            for (Vertex J : targets) {
                HigherMapRecord rec{2, 0, J, F2Matrix(cx.vertex_dim(J), cx.vertex_dim(0))};
                for (std::size_t j = 0; j < top.size(); ++j) {
                    if (!b[j] || top[j] < cx.offset[J] || top[j] >= cx.offset[J + 1]) continue;
                    for (std::size_t x = 0; x < at.size(); ++x)
                        if ((phi >> x) & 1U) rec.block.set(top[j] - cx.offset[J], x, true);
                }
                records.push_back(std::move(rec));
            }
            std::stringstream table;
            write_higher_map_table(table, records, cx.n);
            auto parsed = parse_higher_map_table(table, cx);
            ASSERT_EQ(parsed.size(), records.size());
            for (std::size_t i = 0; i < parsed.size(); ++i) EXPECT_EQ(parsed[i].block, records[i].block);
            auto loaded = load_higher_maps(cx, parsed);
            auto sp = compute_pages(loaded.complex, all_pages(loaded.complex, true));
            EXPECT_EQ(sp.page(1).dims, base.page(1).dims);
            EXPECT_EQ(sp.page(2).dims, base.page(2).dims);
            EXPECT_EQ(sp.infinity.total, oracle::total_homology(loaded.complex));
            if (sp.page(3).total != base.page(3).total) {
                ++changed;
                EXPECT_EQ(sp.page(3).total, 4u);
            }
        }
    EXPECT_GT(changed, 0);
}
