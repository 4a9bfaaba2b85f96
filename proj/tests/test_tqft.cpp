#include <random>

#include <gtest/gtest.h>

#include "oracles/brute_cube.hpp"
#include "twistcube/tqft.hpp"

using namespace twistcube;

namespace {

constexpr AlgBasis kOne = AlgBasis::One;
constexpr AlgBasis kX = AlgBasis::X;

// Elements of A⊗A⊗A as 8-bit masks, bit (4a+2b+c) for a⊗b⊗c.
using Triple = unsigned;

Triple tensor_left(TensorElement t, AlgElement c) {
    Triple out = 0;
    for (int ab = 0; ab < 4; ++ab)
        for (int z = 0; z < 2; ++z)
            if (((t.coeffs >> ab) & 1U) && ((c.coeffs >> z) & 1U)) out ^= 1U << (2 * ab + z);
    return out;
}

Triple tensor_right(AlgElement a, TensorElement t) {
    Triple out = 0;
    for (int x = 0; x < 2; ++x)
        for (int bc = 0; bc < 4; ++bc)
            if (((a.coeffs >> x) & 1U) && ((t.coeffs >> bc) & 1U)) out ^= 1U << (4 * x + bc);
    return out;
}

}  // namespace

TEST(FrobAlgebra, MultiplicationTable) {
    EXPECT_EQ(FrobAlgebra::multiply(kOne, kOne), basis_element(kOne));
    EXPECT_EQ(FrobAlgebra::multiply(kOne, kX), basis_element(kX));
    EXPECT_EQ(FrobAlgebra::multiply(kX, kOne), basis_element(kX));
    EXPECT_EQ(FrobAlgebra::multiply(kX, kX), AlgElement{0});
}

TEST(FrobAlgebra, Comultiplication) {
    EXPECT_EQ(FrobAlgebra::comultiply(basis_element(kOne)).coeffs,
              basis_tensor(kOne, kX).coeffs | basis_tensor(kX, kOne).coeffs);
    EXPECT_EQ(FrobAlgebra::comultiply(basis_element(kX)), basis_tensor(kX, kX));
    EXPECT_EQ(FrobAlgebra::comultiply(AlgElement{3}).coeffs,
              basis_tensor(kOne, kX).coeffs | basis_tensor(kX, kOne).coeffs | basis_tensor(kX, kX).coeffs);
}

TEST(FrobAlgebra, AxiomsHoldOnAllElements) {
    for (std::uint8_t a = 0; a < 4; ++a) {
        AlgElement x{a};
        EXPECT_EQ(FrobAlgebra::multiply(x, FrobAlgebra::unit()), x);
        for (std::uint8_t b = 0; b < 4; ++b) {
            AlgElement y{b};
            EXPECT_EQ(FrobAlgebra::multiply(x, y), FrobAlgebra::multiply(y, x));
            for (std::uint8_t c = 0; c < 4; ++c) {
                AlgElement z{c};
                EXPECT_EQ(FrobAlgebra::multiply(FrobAlgebra::multiply(x, y), z),
                          FrobAlgebra::multiply(x, FrobAlgebra::multiply(y, z)));
            }
        }
        // cocommutative: swap the tensor factors
        auto d = FrobAlgebra::comultiply(x);
        std::uint8_t swapped = 0;
        for (int t = 0; t < 4; ++t)
            if ((d.coeffs >> t) & 1U) swapped ^= static_cast<std::uint8_t>(1U << (((t & 1) << 1) | (t >> 1)));
        EXPECT_EQ(swapped, d.coeffs);
        // coassociative: (Δ⊗1)Δ = (1⊗Δ)Δ
        Triple left = 0;
        Triple right = 0;
        for (int t = 0; t < 4; ++t) {
            if (!((d.coeffs >> t) & 1U)) continue;
            auto first = basis_element(static_cast<AlgBasis>(t >> 1));
            auto second = basis_element(static_cast<AlgBasis>(t & 1));
            left ^= tensor_left(FrobAlgebra::comultiply(first), second);
            right ^= tensor_right(first, FrobAlgebra::comultiply(second));
        }
        EXPECT_EQ(left, right);
        // counit: (ε⊗1)Δ = 1
        AlgElement back{0};
        for (int t = 0; t < 4; ++t)
            if (((d.coeffs >> t) & 1U) && FrobAlgebra::counit(basis_element(static_cast<AlgBasis>(t >> 1))))
                back.coeffs ^= basis_element(static_cast<AlgBasis>(t & 1)).coeffs;
        EXPECT_EQ(back, x);
    }
    // Frobenius relation: Δ(m(x⊗y)) = (m⊗1)(x⊗Δy) on basis pairs
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            auto lhs = FrobAlgebra::comultiply(FrobAlgebra::multiply(static_cast<AlgBasis>(a), static_cast<AlgBasis>(b)));
            auto dy = FrobAlgebra::comultiply(basis_element(static_cast<AlgBasis>(b)));
            std::uint8_t rhs = 0;
            for (int t = 0; t < 4; ++t) {
                if (!((dy.coeffs >> t) & 1U)) continue;
                auto p = FrobAlgebra::multiply(static_cast<AlgBasis>(a), static_cast<AlgBasis>(t >> 1));
                for (int v = 0; v < 2; ++v)
                    if ((p.coeffs >> v) & 1U) rhs ^= static_cast<std::uint8_t>(1U << (2 * v + (t & 1)));
            }
            EXPECT_EQ(lhs.coeffs, rhs);
        }
}

TEST(VertexSpace, BasisOrder) {
    VertexSpace v({0, 2});
    EXPECT_EQ(v.dim(), 4u);
    EXPECT_EQ(v.basis_name(0), "1⊗1");
    EXPECT_EQ(v.basis_name(1), "1⊗X");
    EXPECT_EQ(v.basis_name(2), "X⊗1");
    EXPECT_EQ(v.basis_name(3), "X⊗X");
    EXPECT_EQ(v.position(2), 1u);
    EXPECT_THROW(v.position(5), InternalError);
}

TEST(EdgeMapMatrix, MergeOfTwoCircles) {
    auto cube = build_plat_cube(parse_braid_word("s2", 4), PlatClosure::standard(4), false);
    auto m = edge_map_matrix(cube, 0, 1);
    ASSERT_EQ(m.rows(), 2u);
    ASSERT_EQ(m.cols(), 4u);
    // columns 1⊗1, 1⊗X, X⊗1, X⊗X map to 1, X, X, 0
    EXPECT_EQ(m.row_string(0), "1000");
    EXPECT_EQ(m.row_string(1), "0110");
}

TEST(EdgeMapMatrix, SplitOfOneCircle) {
    auto cube = build_plat_cube(parse_braid_word("s1", 2), PlatClosure::standard(2), false);
    ASSERT_EQ(cube.circles(0), 1);
    ASSERT_EQ(cube.circles(1), 2);
    auto m = edge_map_matrix(cube, 0, 1);
    // 1 -> 1⊗X + X⊗1, X -> X⊗X
    EXPECT_EQ(m.row_string(0), "00");
    EXPECT_EQ(m.row_string(1), "10");
    EXPECT_EQ(m.row_string(2), "10");
    EXPECT_EQ(m.row_string(3), "01");
}

TEST(EdgeMapMatrix, SplitWithSpectatorCircle) {
    // source circles (0, 2); target circles (0, 2, 4) where 0 splits into 0 and 4
    auto cube = build_plat_cube(parse_braid_word("s1", 4), PlatClosure::standard(4), false);
    auto m = edge_map_matrix(cube, 0, 1);
    ASSERT_EQ(m.rows(), 8u);
    ASSERT_EQ(m.cols(), 4u);
    F2Matrix expect(8, 4);
    for (unsigned a = 0; a < 2; ++a)
        for (unsigned s = 0; s < 2; ++s) {
            const unsigned x = (a << 1) | s;
            auto target = [&](unsigned t0, unsigned t1) { return (t0 << 2) | (s << 1) | t1; };
            if (a == 0) {
                expect.flip(target(0, 1), x);
                expect.flip(target(1, 0), x);
            } else {
                expect.flip(target(1, 1), x);
            }
        }
    EXPECT_EQ(m, expect);
}

TEST(AssembleComplex, Unknot) {
    auto cube = build_plat_cube(BraidWord{2, {}}, PlatClosure::standard(2), false);
    auto cx = assemble_complex(cube);
    EXPECT_EQ(cx.total_dim(), 2u);
    EXPECT_TRUE(cx.complex.components().empty());
}

TEST(AssembleComplex, OneTwistHasOneBlock) {
    auto cube = build_plat_cube(parse_braid_word("s1", 2), PlatClosure::standard(2), false);
    auto cx = assemble_complex(cube);
    EXPECT_EQ(cx.total_dim(), 6u);
    ASSERT_EQ(cx.complex.components().size(), 1u);
    const auto& d = cx.complex.components().at(1);
    EXPECT_EQ(d.to_dense().block(2, 6, 0, 2), edge_map_matrix(cube, 0, 1));
    EXPECT_EQ(d.nonzeros(), 3u);
}

TEST(AssembleComplex, TrefoilMatchesIndependentCube) {
    auto b = parse_braid_word("s2 s2 s2", 4);
    auto plat = PlatClosure::standard(4);
    auto cube = build_plat_cube(b, plat, false);
    auto cx = assemble_complex(cube);
    auto bc = oracle::build(b, plat.cups(), plat.caps());
    EXPECT_EQ(cx.total_dim(), 30u);
    EXPECT_EQ(cx.total_dim(), oracle::sum_of_powers(bc));
    auto d = cx.complex.total();
    EXPECT_TRUE(d.compose(d).is_zero());
    // Same generator layout, so the differentials agree entrywise.
    EXPECT_EQ(oracle::from_f2(d.to_dense()), bc.d);
    EXPECT_EQ(cx.complex.weights(), bc.weight);
}

TEST(AssembleComplex, RandomCubesMatchIndependentCube) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 25; ++t) {
        const int strands = 2 * (1 + t % 3);
        std::uniform_int_distribution<int> idx(1, strands - 1);
        std::bernoulli_distribution pos(0.5);
        BraidWord b{strands, {}};
        for (int i = 0; i < 1 + t % 5; ++i) b.letters.push_back({idx(rng), pos(rng) ? 1 : -1});
        auto plat = PlatClosure::standard(strands);
        auto cube = build_plat_cube(b, plat, false);
        EXPECT_FALSE(check_faces(cube).has_value());
        auto cx = assemble_complex(cube);
        auto bc = oracle::build(b, plat.cups(), plat.caps());
        ASSERT_EQ(oracle::from_f2(cx.complex.total().to_dense()), bc.d) << to_string(b);
    }
}

TEST(AssembleComplex, LocateGenerator) {
    auto cube = build_plat_cube(parse_braid_word("s2 s2 s2", 4), PlatClosure::standard(4), false);
    auto cx = assemble_complex(cube);
    EXPECT_EQ(locate_generator(cx, 0), (std::pair<Vertex, std::size_t>{0, 0}));
    EXPECT_EQ(locate_generator(cx, 4), (std::pair<Vertex, std::size_t>{1, 0}));
    EXPECT_EQ(locate_generator(cx, 29).first, 7u);
}
