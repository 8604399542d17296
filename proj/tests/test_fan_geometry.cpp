#include "toddcount/errors.hpp"
#include "toddcount/fan.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

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

Fan projective_plane()
{
    return Fan(2, {iv({1, 0}), iv({0, 1}), iv({-1, -1})}, {{0, 1}, {1, 2}, {0, 2}});
}

Fan square_fan()
{
    return Fan::of_cone(cone({{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}, 3));
}

std::set<RayIndexSet> maximal_sets(const Fan& f)
{
    std::set<RayIndexSet> out;
    for (auto m : f.maximal_cones())
        out.insert(f.cones()[m]);
    return out;
}

bool in_support(const Fan& f, const RatVector& x)
{
    for (auto m : f.maximal_cones())
        if (contains(f.cone(m), x))
            return true;
    return false;
}

Cone random_simplicial_cone(std::mt19937_64& rng, std::size_t n, long bound)
{
    std::uniform_int_distribution<long> d(-bound, bound);
    while (true)
    {
        std::vector<IntVector> r(n, IntVector(n));
        for (auto& v : r)
            for (auto& x : v)
                x = d(rng);
        if (rank(r, n) == n)
            return Cone::from_generators(r, n);
    }
}

// Lattice points of the half-open parallelepiped found by scanning a box.
std::set<IntVector> box_scan(const Cone& c)
{
    const std::size_t n = c.ambient_rank();
    std::vector<long> lo(n, 0), hi(n, 0);
    for (const auto& r : c.rays())
        for (std::size_t k = 0; k < n; ++k)
        {
            long x = r[k].convert_to<long>();
            (x < 0 ? lo[k] : hi[k]) += x;
        }
    std::set<IntVector> out;
    IntVector p(n);
    std::vector<long> cur = lo;
    while (true)
    {
        for (std::size_t k = 0; k < n; ++k)
            p[k] = cur[k];
        auto t = coordinates_in(c.rays(), to_rational(p));
        if (t && std::all_of(t->begin(), t->end(), [](const Rational& q) { return q >= 0 && q < 1; }))
            out.insert(p);
        std::size_t k = 0;
        while (k < n && ++cur[k] > hi[k])
            cur[k] = lo[k], ++k;
        if (k == n)
            break;
    }
    return out;
}

} // namespace

TEST(Cone, CanonicalForm)
{
    Cone a = cone({{0, 2}, {1, 0}, {3, 3}}, 2);
    EXPECT_EQ(a.rays(), (std::vector<IntVector>{iv({0, 1}), iv({1, 0})}));
    EXPECT_EQ(a, cone({{1, 0}, {0, 1}}, 2));
    EXPECT_THROW(cone({{1, 0}, {-1, 0}}, 2), std::invalid_argument);
    EXPECT_THROW(cone({{1, 0}, {0, 1}, {-1, -1}}, 2), std::invalid_argument);
}

TEST(ValidateFan, Examples)
{
    EXPECT_TRUE(validate_fan(projective_plane()).ok);
    Fan overlap(2, {iv({1, 0}), iv({0, 1}), iv({1, 1}), iv({1, -1})}, {{0, 1}, {2, 3}});
    FanReport rep = validate_fan(overlap);
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.offending_pairs.size(), 1u);
    EXPECT_TRUE(validate_fan(Fan::of_cone(cone({{1, 0}, {0, 1}}, 2))).ok);
    EXPECT_TRUE(validate_fan(square_fan()).ok);
}

TEST(ValidateFan, SharedRaysButBadIntersection)
{
    // the two cones share only ray 0 but overlap in a 2-dim region
    Fan f(3, {iv({0, 0, 1}), iv({1, 0, 0}), iv({0, 1, 0}), iv({1, 1, 0}), iv({1, -1, 0})},
          {{0, 1, 2}, {0, 3, 4}});
    EXPECT_FALSE(validate_fan(f).ok);
}

TEST(Faces, Examples)
{
    EXPECT_EQ(faces(cone({{1, 0}, {0, 1}}, 2)).size(), 4u);
    auto ray = faces(cone({{1, 2}}, 2));
    EXPECT_EQ(ray.size(), 2u);
    EXPECT_EQ(ray[0], Cone::zero(2));
    auto sq = faces(cone({{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}, 3));
    EXPECT_EQ(sq.size(), 10u);
    std::map<std::size_t, int> by_dim;
    for (const auto& f : sq)
        ++by_dim[f.dim()];
    EXPECT_EQ(by_dim[1], 4);
    EXPECT_EQ(by_dim[2], 4);
}

TEST(Multiplicity, Examples)
{
    EXPECT_EQ(multiplicity(cone({{1, 0}, {0, 1}}, 2)), 1);
    EXPECT_EQ(multiplicity(cone({{0, 1}, {2, -1}}, 2)), 2);
    EXPECT_EQ(multiplicity(cone({{1, 0, 0}, {0, 1, 0}, {1, 1, 2}}, 3)), 2);
    EXPECT_THROW(multiplicity(cone({{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}, 3)), std::invalid_argument);
}

TEST(IsSmooth, Examples)
{
    EXPECT_TRUE(is_smooth(cone({{1, 0}, {0, 1}}, 2)));
    EXPECT_FALSE(is_smooth(cone({{0, 1}, {2, -1}}, 2)));
    EXPECT_FALSE(is_smooth(cone({{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}, 3)));
}

TEST(StellarSubdivide, TwoDimensionalCone)
{
    Fan f = Fan::of_cone(cone({{0, 1}, {2, -1}}, 2));
    Subdivision s = stellar_subdivide(f, iv({1, 0}));
    std::set<std::set<IntVector>> got;
    for (auto m : s.fan.maximal_cones())
    {
        auto r = s.fan.cone(m).rays();
        got.insert({r.begin(), r.end()});
    }
    std::set<std::set<IntVector>> want{{iv({0, 1}), iv({1, 0})}, {iv({1, 0}), iv({2, -1})}};
    EXPECT_EQ(got, want);
    EXPECT_TRUE(validate_fan(s.fan).ok);
}

TEST(StellarSubdivide, ProjectivePlane)
{
    Fan f = projective_plane();
    Subdivision s = stellar_subdivide(f, iv({1, 1}));
    EXPECT_EQ(s.fan.ray_count(), 4u);
    std::set<RayIndexSet> want{{0, 3}, {1, 3}, {1, 2}, {0, 2}};
    EXPECT_EQ(maximal_sets(s.fan), want);
    EXPECT_TRUE(is_complete(s.fan));
}

TEST(StellarSubdivide, ThreeDimensional)
{
    Fan f = Fan::of_cone(cone({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3));
    Subdivision s = stellar_subdivide(f, iv({1, 1, 1}));
    EXPECT_EQ(s.fan.maximal_cones().size(), 3u);
    EXPECT_TRUE(validate_fan(s.fan).ok);
    // center on a 2-face splits only that face's star
    Subdivision t = stellar_subdivide(f, iv({1, 1, 0}));
    EXPECT_EQ(t.fan.maximal_cones().size(), 2u);
}

TEST(StellarSubdivide, Errors)
{
    Fan f = Fan::of_cone(cone({{0, 1}, {2, -1}}, 2));
    EXPECT_THROW(stellar_subdivide(f, iv({-1, 0})), std::invalid_argument);
    EXPECT_THROW(stellar_subdivide(f, iv({0, 1})), std::invalid_argument);
}

TEST(StellarSubdivide, RandomKeepsSupportAndValidity)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> d(-6, 6);
    for (int trial = 0; trial < 15; ++trial)
    {
        Cone c = random_simplicial_cone(rng, 3, 3);
        Fan f = Fan::of_cone(c);
        IntVector center(3);
        for (auto& r : c.rays())
            for (std::size_t k = 0; k < 3; ++k)
                center[k] += r[k] * (1 + trial % 2);
        center = primitive_vector(center);
        Subdivision s = stellar_subdivide(f, center);
        EXPECT_TRUE(validate_fan(s.fan).ok);
        for (int probe = 0; probe < 30; ++probe)
        {
            RatVector x(3);
            for (auto& v : x)
                v = d(rng);
            EXPECT_EQ(in_support(f, x), in_support(s.fan, x));
        }
    }
}

TEST(Simplicialize, Examples)
{
    Fan p2 = projective_plane();
    EXPECT_EQ(simplicialize(p2).fan, p2);
    Fan quad(2, {iv({1, 0}), iv({0, 1}), iv({-1, 0}), iv({0, -1})}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    EXPECT_EQ(simplicialize(quad).fan, quad);

    Subdivision s = simplicialize(square_fan());
    EXPECT_TRUE(s.fan.is_simplicial());
    EXPECT_EQ(s.fan.rays(), square_fan().rays());
    auto maxes = s.fan.maximal_cones();
    ASSERT_EQ(maxes.size(), 2u);
    // the pieces are simplicial but each has multiplicity 2
    for (auto m : maxes)
        EXPECT_EQ(multiplicity(s.fan.cone(m)), 2);
    // pulled at the lexicographically first ray (-1,0,1)
    auto apex = *s.fan.ray_index(iv({-1, 0, 1}));
    for (auto m : maxes)
        EXPECT_TRUE(std::binary_search(s.fan.cones()[m].begin(), s.fan.cones()[m].end(), apex));
    EXPECT_TRUE(validate_fan(s.fan).ok);
}

TEST(Resolve, SmoothFanUnchanged)
{
    Resolution r = resolve(projective_plane());
    EXPECT_EQ(r.fan, projective_plane());
    EXPECT_TRUE(r.history.empty());
}

TEST(Resolve, OneMove)
{
    Resolution r = resolve(Fan::of_cone(cone({{0, 1}, {2, -1}}, 2)));
    ASSERT_EQ(r.history.size(), 1u);
    EXPECT_EQ(r.history[0], iv({1, 0}));
    EXPECT_TRUE(r.fan.is_smooth());
}

TEST(Resolve, ThreeDimensional)
{
    Fan f = Fan::of_cone(cone({{1, 0, 0}, {0, 1, 0}, {1, 1, 2}}, 3));
    Resolution r = resolve(f);
    EXPECT_FALSE(r.history.empty());
    for (std::size_t i = 0; i < r.fan.size(); ++i)
        if (r.fan.dim(i) > 0)
            EXPECT_EQ(multiplicity(r.fan.cone(i)), 1);
    EXPECT_TRUE(validate_fan(r.fan).ok);
}

TEST(Resolve, HistoryReplaysAndMultiplicityDrops)
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 12; ++trial)
    {
        std::size_t n = 2 + trial % 2;
        Fan f = Fan::of_cone(random_simplicial_cone(rng, n, 3));
        for (CenterRule rule : {CenterRule::MinimalSum, CenterRule::MostZeros})
        {
            Resolution r = resolve(f, {rule, {}});
            EXPECT_TRUE(r.fan.is_smooth());
            Fan cur = simplicialize(f).fan;
            for (const auto& p : r.history)
            {
                Cone sigma = minimal_containing_cone(cur, Cone::from_generators(std::vector<IntVector>{p}, n));
                Integer m = multiplicity(sigma);
                Subdivision s = stellar_subdivide(cur, p);
                std::size_t fresh = s.fan.ray_count() - 1;
                for (std::size_t i = 0; i < s.fan.size(); ++i)
                {
                    const auto& set = s.fan.cones()[i];
                    if (s.fan.dim(i) == sigma.dim() && std::binary_search(set.begin(), set.end(), fresh) &&
                        contains(sigma, s.fan.cone(i)))
                        EXPECT_LT(multiplicity(s.fan.cone(i)), m);
                }
                cur = s.fan;
            }
            EXPECT_EQ(cur, r.fan);
            for (std::size_t i = 0; i < r.fan.size(); ++i)
                EXPECT_TRUE(contains(f.cone(r.map.image[i]), r.fan.cone(i)));
        }
    }
}

TEST(Resolve, AdmissibilityRejectsEverything)
{
    Fan f = Fan::of_cone(cone({{0, 1}, {2, -1}}, 2));
    ResolveOptions opt;
    opt.admissible = [](const Cone& c) { return c.dim() < 2 || c.rays().front() != IntVector{1, 0}; };
    EXPECT_THROW(resolve(f, opt), NotInDomain);
}

TEST(Parallelepiped, MatchesBoxScan)
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::size_t n = 2 + trial % 2;
        Cone c = random_simplicial_cone(rng, n, 3);
        auto pts = parallelepiped_points(c);
        std::set<IntVector> got;
        for (const auto& p : pts)
        {
            got.insert(p.point);
            RatVector sum(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    sum[k] += Rational(p.t_numerators[i], multiplicity(c)) * c.rays()[i][k];
            EXPECT_EQ(sum, to_rational(p.point));
        }
        EXPECT_EQ(pts.size(), multiplicity(c).convert_to<std::size_t>());
        EXPECT_EQ(got, box_scan(c));
    }
}

TEST(Parallelepiped, LowerDimensionalCone)
{
    Cone c = cone({{1, 0, 0}, {1, 2, 0}}, 3);
    auto pts = parallelepiped_points(c);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[1].point, iv({1, 1, 0}));
}

TEST(MinimalContainingCone, Examples)
{
    Cone big = cone({{0, 1}, {2, -1}}, 2);
    Fan f = Fan::of_cone(big);
    EXPECT_EQ(minimal_containing_cone(f, cone({{1, 0}}, 2)), big);
    EXPECT_EQ(minimal_containing_cone(f, big), big);
    EXPECT_EQ(minimal_containing_cone(f, cone({{0, 1}}, 2)), cone({{0, 1}}, 2));
    EXPECT_THROW(minimal_containing_cone(f, cone({{-1, 0}}, 2)), std::invalid_argument);
}

TEST(MinimalContainingCone, ConsistentWithFaces)
{
    Cone sq = cone({{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}, 3);
    Fan f = Fan::of_cone(sq);
    auto fs = faces(sq);
    EXPECT_EQ(fs.size(), f.size());
    for (const auto& t : fs)
        EXPECT_EQ(minimal_containing_cone(f, t), t);
    Cone diag = cone({{1, 0, 1}, {-1, 0, 1}}, 3);
    EXPECT_EQ(minimal_containing_cone(f, diag), sq);
}

TEST(IsComplete, Examples)
{
    EXPECT_TRUE(is_complete(projective_plane()));
    EXPECT_FALSE(is_complete(Fan::of_cone(cone({{1, 0}, {0, 1}}, 2))));
    Fan p1p1(2, {iv({1, 0}), iv({0, 1}), iv({-1, 0}), iv({0, -1})}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    EXPECT_TRUE(is_complete(p1p1));
}
