#include "toddcount/exact_linalg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace toddcount;

namespace {

IntVector iv(std::initializer_list<long> xs)
{
    IntVector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

RatVector rv(std::initializer_list<long> xs)
{
    RatVector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

RationalMatrix rm(std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<RatVector> r;
    for (auto row : rows)
        r.push_back(rv(row));
    return RationalMatrix::from_rows(r);
}

IntegerMatrix im(std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<IntVector> r;
    for (auto row : rows)
        r.push_back(iv(row));
    return IntegerMatrix::from_rows(r);
}

IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long lo, long hi)
{
    std::uniform_int_distribution<long> d(lo, hi);
    IntegerMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = d(rng);
    return m;
}

// Cofactor expansion, independent of the elimination code.
Integer cofactor_det(const IntegerMatrix& a)
{
    const std::size_t n = a.rows();
    if (n == 0)
        return 1;
    if (n == 1)
        return a(0, 0);
    Integer total = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
        IntegerMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, kk = 0; k < n; ++k)
                if (k != j)
                    minor(i - 1, kk++) = a(i, k);
        Integer term = a(0, j) * cofactor_det(minor);
        total += (j % 2 == 0) ? term : Integer(-term);
    }
    return total;
}

} // namespace

TEST(SolveLinear, Identity)
{
    EXPECT_EQ(solve_linear(rm({{1, 0}, {0, 1}}), rv({1, 0})), rv({1, 0}));
}

TEST(SolveLinear, LocalEquationOfTwoRays)
{
    auto x = solve_linear(rm({{0, 1}, {2, -1}}), rv({1, 0}));
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, (RatVector{Rational(1, 2), Rational(1)}));
}

TEST(SolveLinear, UnderdeterminedPicksPivotSolution)
{
    EXPECT_EQ(solve_linear(rm({{1, 1}}), rv({2})), rv({2, 0}));
}

TEST(SolveLinear, Inconsistent)
{
    EXPECT_FALSE(solve_linear(rm({{1, 1}, {2, 2}}), rv({1, 3})));
}

TEST(KernelBasis, Examples)
{
    EXPECT_TRUE(kernel_basis(rm({{1, 0}, {0, 1}})).empty());
    EXPECT_EQ(kernel_basis(rm({{1, 1}})), std::vector<RatVector>{rv({1, -1})});
    EXPECT_EQ(kernel_basis(rm({{2, -1}})), std::vector<RatVector>{rv({1, 2})});
}

TEST(KernelBasis, RandomMatricesAnnihilate)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial)
    {
        auto a = to_rational(random_matrix(rng, 2 + trial % 3, 4, -3, 3));
        auto ker = kernel_basis(a);
        EXPECT_EQ(ker.size() + rank(a), a.cols());
        for (const auto& k : ker)
            for (std::size_t i = 0; i < a.rows(); ++i)
                EXPECT_EQ(dot(a.row(i), k), 0);
    }
}

TEST(Hermite, Examples)
{
    auto h1 = hermite_normal_form(im({{2, 4}}));
    EXPECT_EQ(h1.h, im({{2, 4}}));
    auto h2 = hermite_normal_form(im({{0, 1}, {2, -1}}));
    EXPECT_EQ(abs(determinant(h2.h)), 2);
    auto h3 = hermite_normal_form(IntegerMatrix::identity(3));
    EXPECT_EQ(h3.h, IntegerMatrix::identity(3));
    EXPECT_EQ(h3.u, IntegerMatrix::identity(3));
}

TEST(Hermite, RandomReconstructsAndIsUnimodular)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial)
    {
        std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
        IntegerMatrix a = random_matrix(rng, r, c, -6, 6);
        HermiteForm hf = hermite_normal_form(a);
        EXPECT_EQ(hf.u * a, hf.h);
        EXPECT_EQ(abs(cofactor_det(hf.u)), 1);
        // echelon shape with reduced entries above pivots
        std::size_t lead = 0;
        for (std::size_t i = 0; i < r; ++i)
        {
            std::size_t j = 0;
            while (j < c && hf.h(i, j) == 0)
                ++j;
            if (j == c)
            {
                lead = c + 1;
                continue;
            }
            ASSERT_LE(lead, j);
            EXPECT_GT(hf.h(i, j), 0);
            for (std::size_t k = 0; k < i; ++k)
            {
                EXPECT_GE(hf.h(k, j), 0);
                EXPECT_LT(hf.h(k, j), hf.h(i, j));
            }
            lead = j + 1;
        }
    }
}

TEST(Determinant, BareissMatchesCofactor)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial)
    {
        std::size_t n = 1 + trial % 5;
        IntegerMatrix a = random_matrix(rng, n, n, -9, 9);
        EXPECT_EQ(determinant(a), cofactor_det(a));
        EXPECT_EQ(determinant(to_rational(a)), Rational(cofactor_det(a)));
    }
}

TEST(LatticeBasis, Examples)
{
    std::vector<IntVector> a{iv({2, 4})};
    EXPECT_EQ(lattice_basis_of_span(a, 2), std::vector<IntVector>{iv({1, 2})});
    std::vector<IntVector> b{iv({1, 0}), iv({0, 1})};
    EXPECT_EQ(lattice_basis_of_span(b, 2), b);
    std::vector<IntVector> c{iv({2, 0}), iv({0, 2})};
    EXPECT_EQ(lattice_basis_of_span(c, 2), b);
}

TEST(LatticeBasis, RandomSaturation)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial)
    {
        IntegerMatrix a = random_matrix(rng, 2, 4, -5, 5);
        auto vs = a.to_rows();
        auto basis = lattice_basis_of_span(vs, 4);
        EXPECT_EQ(basis.size(), rank(vs, 4));
        for (const auto& v : vs)
        {
            auto c = coordinates_in(basis, to_rational(v));
            ASSERT_TRUE(c);
            for (const auto& q : *c)
                EXPECT_EQ(denominator(q), 1);
        }
        if (!basis.empty())
            EXPECT_EQ(lattice_index(basis), 1);
    }
}

TEST(PrimitiveVector, Examples)
{
    EXPECT_EQ(primitive_vector(iv({2, 4})), iv({1, 2}));
    EXPECT_EQ(primitive_vector(iv({0, -3})), iv({0, -1}));
    EXPECT_EQ(primitive_vector(iv({6, 10, 15})), iv({6, 10, 15}));
    EXPECT_EQ(primitive_vector(primitive_vector(iv({12, -18}))), primitive_vector(iv({12, -18})));
    EXPECT_THROW(primitive_vector(iv({0, 0})), std::invalid_argument);
}

TEST(LatticeIndex, Examples)
{
    std::vector<IntVector> a{iv({1, 0}), iv({0, 1})};
    std::vector<IntVector> b{iv({0, 1}), iv({2, -1})};
    std::vector<IntVector> c{iv({1, 2})};
    EXPECT_EQ(lattice_index(a), 1);
    EXPECT_EQ(lattice_index(b), 2);
    EXPECT_EQ(lattice_index(c), 1);
    std::vector<IntVector> dep{iv({1, 2}), iv({2, 4})};
    EXPECT_THROW(lattice_index(dep), std::invalid_argument);
}

TEST(LatticeIndex, AgreesWithDeterminantInSaturatedBasis)
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 40; ++trial)
    {
        IntegerMatrix a = random_matrix(rng, 2, 3, -4, 4);
        auto vs = a.to_rows();
        if (rank(vs, 3) < 2)
            continue;
        auto basis = lattice_basis_of_span(vs, 3);
        IntegerMatrix coords(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
        {
            auto c = *coordinates_in(basis, to_rational(vs[i]));
            for (std::size_t j = 0; j < 2; ++j)
                coords(i, j) = numerator(c[j]);
        }
        EXPECT_EQ(lattice_index(vs), abs(cofactor_det(coords)));
    }
}

TEST(RationalText, RoundTrip)
{
    EXPECT_EQ(to_string(Rational(1)), "1/1");
    EXPECT_EQ(to_string(Rational(-3, 6)), "-1/2");
    EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
    EXPECT_EQ(parse_rational("7"), Rational(7));
    EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}
