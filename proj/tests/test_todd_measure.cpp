#include "toddcount/errors.hpp"
#include "toddcount/todd.hpp"
#include "toddcount/verify.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace toddcount;

namespace {

IntVector iv(std::initializer_list<long> xs)
{
    IntVector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

Cone cone(std::initializer_list<std::initializer_list<long>> rays, std::size_t n)
{
    std::vector<IntVector> r;
    for (auto x : rays)
        r.push_back(iv(x));
    return Cone::from_generators(r, n);
}

Rational gram_dot(const RationalMatrix& g, const IntVector& a, const IntVector& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            s += g(i, j) * Rational(a[i]) * Rational(b[j]);
    return s;
}

Integer det2(const IntVector& u, const IntVector& v)
{
    return u[0] * v[1] - u[1] * v[0];
}

// Independent oracle for plane cones under an inner product. A smooth cone
// (u, v) has mu = 1/4 - (<u,v>/<u,u> + <u,v>/<v,v>) / 12; a singular one is
// cut at a lattice point of its half-open parallelogram until smooth.
Rational plane_mu(const RationalMatrix& g, const IntVector& u, const IntVector& v)
{
    Integer d = abs(det2(u, v));
    if (d == 1)
    {
        Rational uv = gram_dot(g, u, v);
        return Rational(1, 4) - (uv / gram_dot(g, u, u) + uv / gram_dot(g, v, v)) / 12;
    }
    long lo0 = std::min({0L, u[0].convert_to<long>(), v[0].convert_to<long>(), (u[0] + v[0]).convert_to<long>()});
    long hi0 = std::max({0L, u[0].convert_to<long>(), v[0].convert_to<long>(), (u[0] + v[0]).convert_to<long>()});
    long lo1 = std::min({0L, u[1].convert_to<long>(), v[1].convert_to<long>(), (u[1] + v[1]).convert_to<long>()});
    long hi1 = std::max({0L, u[1].convert_to<long>(), v[1].convert_to<long>(), (u[1] + v[1]).convert_to<long>()});
    Integer D = det2(u, v);
    for (long x = lo0; x <= hi0; ++x)
        for (long y = lo1; y <= hi1; ++y)
        {
            IntVector p{x, y};
            // p = s u + t v with s = det(p, v)/D, t = det(u, p)/D
            Rational s(det2(p, v), D), t(det2(u, p), D);
            if (s > 0 && t > 0 && s < 1 && t < 1)
                return plane_mu(g, u, primitive_vector(p)) + plane_mu(g, primitive_vector(p), v);
        }
    ADD_FAILURE() << "no interior point";
    return 0;
}

Rational naive_todd_coefficient(const std::vector<Rational>& c, const Fan& f, const ComplementMap& psi,
                                const RayIndexSet& target)
{
    // full expansion of prod_i td(D_i) over every ray of f, a_i >= 0
    const std::size_t r = f.ray_count(), n = f.rank();
    std::vector<unsigned> a(r, 0);
    Rational total = 0;
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned used) {
        if (pos == r)
        {
            Rational w = 1;
            for (auto e : a)
                w *= c[e];
            if (w != 0)
                total += w * evaluate_monomial(f, psi, a).coefficient(target);
            return;
        }
        for (unsigned e = 0; used + e <= n; ++e)
        {
            a[pos] = e;
            rec(pos + 1, used + e);
        }
        a[pos] = 0;
    };
    rec(0, 0);
    return total;
}

} // namespace

TEST(ToddSeries, Examples)
{
    auto c = todd_series_coefficients(4);
    ASSERT_EQ(c.size(), 5u);
    EXPECT_EQ(c[0], 1);
    EXPECT_EQ(c[1], Rational(1, 2));
    EXPECT_EQ(c[2], Rational(1, 12));
    EXPECT_EQ(c[3], 0);
    EXPECT_EQ(c[4], Rational(-1, 720));
}

TEST(ToddSeries, InvertsTheExponentialQuotient)
{
    // (1 - exp(-x))/x = sum (-1)^k x^k / (k+1)!
    const std::size_t n = 14;
    auto c = todd_series_coefficients(n);
    std::vector<Rational> q(n + 1);
    Rational fact = 1;
    for (std::size_t k = 0; k <= n; ++k)
    {
        fact *= Rational(k + 1);
        q[k] = Rational(k % 2 ? -1 : 1) / fact;
    }
    for (std::size_t d = 0; d <= n; ++d)
    {
        Rational s = 0;
        for (std::size_t i = 0; i <= d; ++i)
            s += q[i] * c[d - i];
        EXPECT_EQ(s, d == 0 ? 1 : 0) << "degree " << d;
        if (d >= 3 && d % 2 == 1)
            EXPECT_EQ(c[d], 0);
    }
}

TEST(SmoothToddCycle, Examples)
{
    ComplementMap std2 = ComplementMap::standard(2);
    Fan ray_fan = Fan::of_cone(cone({{1, 0}}, 2));
    EXPECT_EQ(smooth_todd_cycle(ray_fan, std2).coefficient({0}), Rational(1, 2));

    Fan quad = Fan::of_cone(cone({{1, 0}, {0, 1}}, 2));
    EXPECT_EQ(smooth_todd_cycle(quad, std2).coefficient({0, 1}), Rational(1, 4));

    Fan p2 = projective_space_fan(2);
    TorusCycle td = smooth_todd_cycle(p2, cartan_gram(2));
    TorusCycle expect = TorusCycle::point_class();
    for (std::size_t i = 0; i < p2.size(); ++i)
        if (p2.dim(i) == 1)
            expect.add(p2.cones()[i], Rational(1, 2));
        else if (p2.dim(i) == 2)
            expect.add(p2.cones()[i], Rational(1, 3));
    EXPECT_EQ(td, expect);
    EXPECT_EQ(todd_cycle(p2, cartan_gram(2)), expect);

    Fan sing = Fan::of_cone(cone({{0, 1}, {2, -1}}, 2));
    EXPECT_THROW(smooth_todd_cycle(sing, std2), NotSmooth);
}

TEST(SmoothToddCycle, MatchesNaiveExpansion)
{
    Rng rng(11);
    auto c = todd_series_coefficients(3);
    for (int trial = 0; trial < 6; ++trial)
    {
        const std::size_t n = 2 + trial % 2;
        Fan f = resolve(random_simplicial_fan(rng, n, 1)).fan;
        ComplementMap psi = trial % 3 == 2 ? ComplementMap(random_generic_flag(rng, f)) : ComplementMap(random_gram(rng, n));
        TorusCycle td = smooth_todd_cycle(f, psi);
        for (std::size_t i = 0; i < f.size(); ++i)
            EXPECT_EQ(td.coefficient(f.cones()[i]), naive_todd_coefficient(c, f, psi, f.cones()[i]))
                << to_string(f.cone(i));
    }
}

TEST(ToddCycle, Examples)
{
    ComplementMap std2 = ComplementMap::standard(2);
    Fan sing = Fan::of_cone(cone({{0, 1}, {2, -1}}, 2));
    EXPECT_EQ(todd_cycle(sing, std2).coefficient({0, 1}), Rational(3, 10));
    Fan quad = Fan::of_cone(cone({{1, 0}, {0, 1}}, 2));
    EXPECT_EQ(todd_cycle(quad, std2), smooth_todd_cycle(quad, std2));
}

TEST(ToddMeasure, Examples)
{
    ComplementMap std2 = ComplementMap::standard(2);
    EXPECT_EQ(todd_measure(Cone::zero(2), std2), 1);
    EXPECT_EQ(todd_measure(cone({{3, -7}}, 2), std2), Rational(1, 2));
    EXPECT_EQ(todd_measure(cone({{3, -7}}, 2), cartan_gram(2)), Rational(1, 2));
    EXPECT_EQ(todd_measure(cone({{1, 0}, {2, -1}}, 2), std2), Rational(1, 20));
    EXPECT_EQ(todd_measure(cone({{0, 1}, {2, -1}}, 2), std2), Rational(3, 10));
    EXPECT_EQ(todd_measure(cone({{0, 1}, {1, 0}}, 2), std2), Rational(1, 4));
}

TEST(ToddMeasure, PlaneOracle)
{
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial)
    {
        Cone c = random_simplicial_cone(rng, 2, 2, 6);
        InnerProductMap g = trial % 2 ? InnerProductMap::standard(2) : random_gram(rng, 2);
        Rational expect = plane_mu(g.gram, c.rays()[0], c.rays()[1]);
        EXPECT_EQ(todd_measure(c, g), expect) << to_string(c);
        EXPECT_EQ(todd_measure_by_resolution(c, g), expect) << to_string(c);
        EXPECT_EQ(todd_measure_by_decomposition(c, g), expect) << to_string(c);
    }
}

TEST(ToddMeasure, MethodsAgreeInHigherRank)
{
    Rng rng(99);
    for (int trial = 0; trial < 12; ++trial)
    {
        const std::size_t n = 3 + trial % 2;
        Cone c = random_singular_cone(rng, n, n, n == 3 ? 3 : 2);
        ComplementMap psi = trial % 2 ? ComplementMap::standard(n) : ComplementMap(random_gram(rng, n));
        ToddAssignment by_res(psi, MeasureMethod::Resolution), by_dec(psi, MeasureMethod::Decomposition);
        EXPECT_EQ(by_res(c), by_dec(c)) << to_string(c);
    }
}

TEST(ToddMeasure, ConeLocality)
{
    Rng rng(3);
    for (int trial = 0; trial < 6; ++trial)
    {
        const std::size_t n = 2 + trial % 2;
        Fan f = random_complete_fan(rng, n, 2);
        ComplementMap psi = random_gram(rng, n);
        TorusCycle td = todd_cycle(f, psi);
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            Rational mu = todd_measure(f.cone(i), psi);
            EXPECT_EQ(td.coefficient(f.cones()[i]), mu);
            EXPECT_EQ(todd_cycle(Fan::of_cone(f.cone(i)), psi).coefficient(Fan::of_cone(f.cone(i)).cones().back()), mu);
            if (f.dim(i) == 0)
                EXPECT_EQ(mu, 1);
            if (f.dim(i) == 1)
                EXPECT_EQ(mu, Rational(1, 2));
        }
        // every term sits on a cone of the fan
        for (const auto& [rays, q] : td.terms())
            EXPECT_TRUE(f.find(rays).has_value());
    }
}

TEST(ToddMeasure, ResolutionIndependenceExamples)
{
    ComplementMap std2 = ComplementMap::standard(2);
    MeasureReport smooth = verify_resolution_independence(cone({{1, 0}, {0, 1}}, 2), std2);
    EXPECT_TRUE(smooth.ok);
    MeasureReport sing = verify_resolution_independence(cone({{0, 1}, {2, -1}}, 2), std2);
    EXPECT_TRUE(sing.ok);
    for (const auto& [name, v] : sing.values)
        EXPECT_EQ(v, Rational(3, 10)) << name;
    MeasureReport three = verify_resolution_independence(cone({{1, 0, 0}, {0, 1, 0}, {1, 1, 2}}, 3),
                                                         ComplementMap::standard(3));
    EXPECT_TRUE(three.ok) << three.detail;
    EXPECT_GE(three.values.size(), 3u);
}

TEST(ToddMeasure, AdditivityExamples)
{
    ComplementMap std2 = ComplementMap::standard(2);
    Cone tau = cone({{0, 1}, {2, -1}}, 2);
    EXPECT_TRUE(verify_additivity(tau, {cone({{0, 1}, {1, 0}}, 2), cone({{1, 0}, {2, -1}}, 2)}, std2).ok);
    EXPECT_TRUE(verify_additivity(tau, {tau}, std2).ok);
    Cone q = cone({{1, 0}, {0, 1}}, 2);
    EXPECT_TRUE(verify_additivity(q, {cone({{1, 0}, {1, 1}}, 2), cone({{1, 1}, {0, 1}}, 2)}, std2).ok);
    // a wrong split is caught
    EXPECT_FALSE(verify_additivity(q, {cone({{1, 0}, {1, 1}}, 2)}, std2).ok);
}

TEST(FlagMonomial, Examples)
{
    Cone sigma = cone({{1, 0}, {0, 1}}, 2);
    FlagMap flag = FlagMap::from_rows({iv({1, 2}), iv({0, 1})});
    // exponents follow Cone::rays(), which lists (0,1) before (1,0)
    ASSERT_EQ(sigma.rays()[1], iv({1, 0}));
    EXPECT_EQ(flag_monomial_coefficient(sigma, {0, 2}, flag), Rational(1, 2));
    EXPECT_EQ(flag_monomial_coefficient(sigma, {2, 0}, flag), 2);
    EXPECT_EQ(flag_monomial_coefficient(sigma, {1, 1}, flag), 1);

    Cone sing = cone({{0, 1}, {2, -1}}, 2);
    EXPECT_EQ(flag_monomial_coefficient(sing, {1, 1}, flag), Rational(1, 2));

    FlagMap bad = FlagMap::from_rows({iv({1, 0}), iv({0, 1})});
    EXPECT_THROW(flag_monomial_coefficient(sigma, {2, 0}, bad), NonGenericFlag);
}

TEST(FlagMonomial, SmoothToddCycleTermByTerm)
{
    Rng rng(8);
    for (int trial = 0; trial < 6; ++trial)
    {
        const std::size_t n = 2 + trial % 2;
        Fan f = resolve(random_simplicial_fan(rng, n, 1)).fan;
        FlagMap flag = random_generic_flag(rng, f);
        TorusCycle td = smooth_todd_cycle(f, flag);
        auto c = todd_series_coefficients(n);
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            const std::size_t k = f.dim(i);
            if (k == 0)
                continue;
            Cone sigma = f.cone(i);
            Rational sum = 0;
            std::vector<unsigned> a(k, 0);
            std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
                if (pos + 1 == k)
                {
                    a[pos] = left;
                    Rational w = 1;
                    for (auto e : a)
                        w *= c[e];
                    sum += w * flag_monomial_coefficient(sigma, a, flag);
                    return;
                }
                for (unsigned e = 0; e <= left; ++e)
                {
                    a[pos] = e;
                    rec(pos + 1, left - e);
                }
            };
            rec(0, static_cast<unsigned>(k));
            EXPECT_EQ(td.coefficient(f.cones()[i]), sum) << to_string(sigma);
        }
    }
}

TEST(ToddMeasure, FlagOnSingularCone)
{
    // mu through a flag is again additive and sums to 1 on P^2
    FlagMap flag = FlagMap::from_rows({iv({1, 2}), iv({0, 1})});
    Fan p2 = projective_space_fan(2);
    Rational sum = 0;
    for (auto c : p2.maximal_cones())
        sum += todd_measure(p2.cone(c), flag);
    EXPECT_EQ(sum, 1);
}

TEST(Suites, ResolutionAdditivityFlagFormula)
{
    SuiteOptions opt;
    opt.cases = 6;
    for (const char* name : {"resolution", "additivity", "flag-formula", "projective"})
    {
        SuiteResult r = run_suite(name, opt);
        const CaseRecord* bad = r.first_failure();
        EXPECT_TRUE(r.ok()) << name << ": " << (bad ? bad->detail : "");
    }
}
