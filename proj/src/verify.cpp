#include "toddcount/verify.hpp"

#include "toddcount/cycle_ring.hpp"
#include "toddcount/errors.hpp"
#include "toddcount/io.hpp"
#include "toddcount/todd.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace toddcount {

namespace {

int uniform(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

IntVector random_vector(Rng& rng, std::size_t n, int bound)
{
    IntVector v(n);
    for (auto& x : v)
        x = uniform(rng, -bound, bound);
    return v;
}

std::vector<IntVector> independent_vectors(Rng& rng, std::size_t k, std::size_t n, int bound)
{
    while (true)
    {
        std::vector<IntVector> vs;
        for (std::size_t i = 0; i < k; ++i)
            vs.push_back(random_vector(rng, n, bound));
        if (rank(vs, n) == k)
            return vs;
    }
}

Rational random_rational(Rng& rng)
{
    return Rational(uniform(rng, -5, 5), uniform(rng, 1, 4));
}

WeilDivisor random_divisor(Rng& rng, const Fan& f)
{
    WeilDivisor d = WeilDivisor::zero(f.ray_count());
    for (auto& a : d.a)
        a = uniform(rng, -3, 3);
    return d;
}

TorusCycle random_cycle(Rng& rng, const Fan& f)
{
    TorusCycle z;
    int terms = uniform(rng, 1, 3);
    for (int t = 0; t < terms; ++t)
    {
        std::size_t c = std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng);
        z.add(f.cones()[c], random_rational(rng));
    }
    return z;
}

WeilDivisor minus(const WeilDivisor& a, const WeilDivisor& b)
{
    return a + Rational(-1) * b;
}

std::size_t pick(Rng& rng, std::size_t size)
{
    return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

// Random cone of f with dimension at least two, if any.
std::optional<std::size_t> random_cone_of_dim2(Rng& rng, const Fan& f)
{
    std::vector<std::size_t> choices;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.dim(i) >= 2)
            choices.push_back(i);
    if (choices.empty())
        return std::nullopt;
    return choices[pick(rng, choices.size())];
}

Fan apply_moves(Rng& rng, Fan f, std::size_t moves)
{
    for (std::size_t m = 0; m < moves; ++m)
    {
        auto c = random_cone_of_dim2(rng, f);
        if (!c)
            break;
        f = stellar_subdivide(f, random_interior_point(rng, f.cone(*c))).fan;
    }
    return f;
}

// Runs `body` for each case index, turning exceptions into failures.
SuiteResult run_cases(const std::string& name, std::size_t count, const std::function<CaseRecord(std::size_t)>& body)
{
    SuiteResult res{name, {}};
    for (std::size_t i = 0; i < count; ++i)
    {
        CaseRecord rec;
        try
        {
            rec = body(i);
        }
        catch (const std::exception& e)
        {
            rec.ok = false;
            rec.detail = std::string("exception: ") + e.what();
        }
        rec.index = i;
        res.cases.push_back(std::move(rec));
    }
    return res;
}

CaseRecord check(bool ok, std::string detail)
{
    return {0, ok, ok ? std::string() : std::move(detail)};
}

std::string describe(const Fan& f, const ComplementMap& psi)
{
    std::string s = serialize(f);
    if (psi.inner_product())
        s += serialize(*psi.inner_product());
    else
        s += serialize(*psi.flag());
    return s;
}

Rng suite_rng(const SuiteOptions& opt, std::uint64_t salt)
{
    return Rng(opt.seed * 0x9e3779b97f4a7c15ULL + salt);
}

std::size_t or_default(std::size_t v, std::size_t d)
{
    return v ? v : d;
}

std::string measure_detail(const MeasureReport& rep)
{
    std::string s = rep.detail;
    for (const auto& [name, v] : rep.values)
        s += (s.empty() ? "" : "; ") + name + " = " + to_string(v);
    return s;
}

} // namespace

Cone random_simplicial_cone(Rng& rng, std::size_t k, std::size_t n, int bound)
{
    return Cone::from_generators(independent_vectors(rng, k, n, bound), n);
}

Cone random_singular_cone(Rng& rng, std::size_t k, std::size_t n, int bound)
{
    while (true)
    {
        Cone c = random_simplicial_cone(rng, k, n, bound);
        if (multiplicity(c) > 1)
            return c;
    }
}

IntVector random_interior_point(Rng& rng, const Cone& c)
{
    IntVector p(c.ambient_rank());
    for (const auto& r : c.rays())
    {
        int coef = uniform(rng, 1, 3);
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] += coef * r[i];
    }
    return primitive_vector(p);
}

InnerProductMap random_gram(Rng& rng, std::size_t n)
{
    RationalMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = uniform(rng, -1, 1);
    RationalMatrix g = a * a.transpose();
    for (std::size_t i = 0; i < n; ++i)
        g(i, i) += 1;
    return InnerProductMap::from_gram(g);
}

FlagMap random_generic_flag(Rng& rng, const Fan& f)
{
    const std::size_t n = f.rank();
    for (int attempt = 0; attempt < 10000; ++attempt)
    {
        std::vector<IntVector> rows;
        for (std::size_t i = 0; i < n; ++i)
            rows.push_back(random_vector(rng, n, 3));
        if (rank(rows, n) != n)
            continue;
        FlagMap flag = FlagMap::from_rows(rows);
        bool ok = true;
        for (std::size_t c = 0; c < f.size() && ok; ++c)
            ok = is_generic(flag, f.cone(c));
        if (ok)
            return flag;
    }
    throw std::runtime_error("random_generic_flag: no generic flag found");
}

LatticePolytope random_polytope(Rng& rng, std::size_t n, int lo, int hi)
{
    while (true)
    {
        std::size_t count = n + 1 + pick(rng, 4);
        std::vector<IntVector> pts;
        for (std::size_t i = 0; i < count; ++i)
        {
            IntVector v(n);
            for (auto& x : v)
                x = uniform(rng, lo, hi);
            pts.push_back(std::move(v));
        }
        try
        {
            return LatticePolytope::from_points(std::move(pts), n);
        }
        catch (const DegeneratePolytope&)
        {
        }
    }
}

std::vector<LatticePolytope> polytope_corpus(std::uint64_t seed, std::size_t n, std::size_t count)
{
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1000 + n);
    std::vector<LatticePolytope> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(random_polytope(rng, n));
    return out;
}

Fan random_complete_fan(Rng& rng, std::size_t n, std::size_t moves)
{
    return apply_moves(rng, projective_space_fan(n), moves);
}

Fan random_simplicial_fan(Rng& rng, std::size_t n, std::size_t moves)
{
    return apply_moves(rng, Fan::of_cone(random_simplicial_cone(rng, n, n, 3)), moves);
}

Fan projective_space_fan(std::size_t n)
{
    std::vector<IntVector> rays;
    for (std::size_t i = 0; i < n; ++i)
    {
        IntVector e(n);
        e[i] = 1;
        rays.push_back(e);
    }
    rays.push_back(IntVector(n, Integer(-1)));
    std::vector<RayIndexSet> cones;
    for (std::size_t skip = 0; skip <= n; ++skip)
    {
        RayIndexSet c;
        for (std::size_t i = 0; i <= n; ++i)
            if (i != skip)
                c.push_back(i);
        cones.push_back(c);
    }
    return Fan(n, rays, cones);
}

InnerProductMap cartan_gram(std::size_t n)
{
    RationalMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
        g(i, i) = 2;
        if (i + 1 < n)
            g(i, i + 1) = g(i + 1, i) = -1;
    }
    return InnerProductMap::from_gram(g);
}

std::vector<std::pair<std::string, Fan>> complete_fixture_fans()
{
    auto polygon = [](std::vector<IntVector> rays) {
        // rays given counterclockwise; consecutive pairs are the 2-cones
        std::vector<RayIndexSet> cones;
        for (std::size_t i = 0; i < rays.size(); ++i)
        {
            std::size_t j = (i + 1) % rays.size();
            cones.push_back({std::min(i, j), std::max(i, j)});
        }
        return Fan(2, std::move(rays), cones);
    };
    std::vector<std::pair<std::string, Fan>> out;
    out.emplace_back("P1", projective_space_fan(1));
    out.emplace_back("P2", projective_space_fan(2));
    out.emplace_back("P3", projective_space_fan(3));
    out.emplace_back("P1xP1", polygon({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}));
    for (int a = 1; a <= 3; ++a)
        out.emplace_back("F" + std::to_string(a), polygon({{1, 0}, {0, 1}, {-1, a}, {0, -1}}));
    out.emplace_back("weighted P(1,1,2)", polygon({{1, 0}, {-1, 2}, {0, -1}}));
    out.emplace_back("singular quadrilateral", polygon({{1, 0}, {1, 2}, {-3, 1}, {0, -1}}));
    out.emplace_back("singular pentagon", polygon({{2, -1}, {1, 3}, {-1, 2}, {-2, -1}, {1, -4}}));
    return out;
}

bool SuiteResult::ok() const
{
    return first_failure() == nullptr;
}

std::size_t SuiteResult::passed() const
{
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const CaseRecord& c) { return c.ok; }));
}

const CaseRecord* SuiteResult::first_failure() const
{
    for (const auto& c : cases)
        if (!c.ok)
            return &c;
    return nullptr;
}

SuiteResult suite_projective(const SuiteOptions&)
{
    // case i: P^{i+1}; cone by cone, then the whole cycle at once
    return run_cases("projective", 3, [](std::size_t i) {
        const std::size_t n = i + 1;
        Fan f = projective_space_fan(n);
        ComplementMap psi = cartan_gram(n);
        TorusCycle td = todd_cycle(f, psi);
        for (std::size_t c = 0; c < f.size(); ++c)
        {
            Rational expect = f.dim(c) == 0 ? Rational(1) : f.dim(c) == 1 ? Rational(1, 2)
                              : f.dim(c) == n ? Rational(1, n + 1)
                                              : todd_measure(f.cone(c), psi);
            Rational mu = todd_measure(f.cone(c), psi);
            Rational local = td.coefficient(f.cones()[c]);
            if (mu != expect || local != expect)
                return check(false, "P" + std::to_string(n) + " " + to_string(f.cone(c)) + ": mu " + to_string(mu) +
                                        ", cycle " + to_string(local) + ", expected " + to_string(expect));
        }
        return check(true, "");
    });
}

SuiteResult suite_presentation(const SuiteOptions& opt)
{
    Rng rng = suite_rng(opt, 1);
    const std::size_t per_type = or_default(opt.cases, 10);
    return run_cases("presentation", 2 * per_type, [&](std::size_t i) {
        const std::size_t n = 2 + i % 2;
        Fan f = (i / 2) % 2 ? random_complete_fan(rng, n, pick(rng, 2) + 1) : random_simplicial_fan(rng, n, pick(rng, 3));
        ComplementMap psi = i < per_type ? ComplementMap(random_gram(rng, n)) : ComplementMap(random_generic_flag(rng, f));
        RelationReport rep = verify_presentation_relations(f, psi);
        std::string detail = rep.failures.empty() ? "" : rep.failures.front();
        return check(rep.ok && rep.checked > 0, detail + "\n" + describe(f, psi));
    });
}

SuiteResult suite_projection(const SuiteOptions& opt)
{
    Rng rng = suite_rng(opt, 2);
    return run_cases("projection", or_default(opt.cases, 20), [&](std::size_t i) {
        const std::size_t n = 2 + i % 2;
        Fan target = i % 3 == 0 ? random_complete_fan(rng, n, pick(rng, 2)) : random_simplicial_fan(rng, n, pick(rng, 2));
        ComplementMap psi = random_gram(rng, n);
        auto c = random_cone_of_dim2(rng, target);
        Subdivision s = stellar_subdivide(target, random_interior_point(rng, target.cone(*c)));
        WeilDivisor d = random_divisor(rng, target);
        TorusCycle y = random_cycle(rng, s.fan);
        TorusCycle lhs = pushforward_cycle(s.map, divisor_times_cycle(s.fan, psi, pullback_divisor(s.map, d), y));
        TorusCycle rhs = divisor_times_cycle(target, psi, d, pushforward_cycle(s.map, y));
        return check(lhs == rhs, "f_*(f^*D.y) = " + to_string(target, lhs) + ", D.f_*y = " + to_string(target, rhs) +
                                     "\n" + describe(s.fan, psi));
    });
}

SuiteResult suite_stellar(const SuiteOptions& opt)
{
    Rng rng = suite_rng(opt, 3);
    return run_cases("stellar", or_default(opt.cases, 20), [&](std::size_t i) {
        const std::size_t n = 2 + i % 2;
        Fan target = i % 2 ? random_complete_fan(rng, n, pick(rng, 2)) : random_simplicial_fan(rng, n, pick(rng, 2));
        ComplementMap psi = random_gram(rng, n);
        const std::size_t sig = *random_cone_of_dim2(rng, target);
        const RayIndexSet& sigma = target.cones()[sig];
        const std::size_t d = sigma.size();
        IntVector rho0 = random_interior_point(rng, target.cone(sig));
        Subdivision s = stellar_subdivide(target, rho0);
        const std::size_t r = target.ray_count();
        const std::size_t new_ray = r; // appended by stellar_subdivide

        // m_0 = mult sigma, m_j = mult of sigma with v_j replaced by rho0
        std::map<std::size_t, Rational> m;
        m[new_ray] = Rational(multiplicity(target.cone(sig)));
        for (auto j : sigma)
        {
            std::vector<IntVector> rays;
            for (auto l : sigma)
                rays.push_back(l == j ? rho0 : target.rays()[l]);
            m[j] = Rational(multiplicity(Cone::from_generators(rays, n)));
        }

        auto E = [&](std::size_t idx) { return WeilDivisor::prime(r, idx); };
        auto D = [&](std::size_t idx) { return WeilDivisor::prime(r + 1, idx); };
        auto push = [&](const TorusCycle& z) { return pushforward_cycle(s.map, z); };
        auto src_times = [&](const WeilDivisor& div, const TorusCycle& z) {
            return divisor_times_cycle(s.fan, psi, div, z);
        };
        auto tgt_times = [&](const WeilDivisor& div, const TorusCycle& z) {
            return divisor_times_cycle(target, psi, div, z);
        };

        std::vector<std::string> bad;
        TorusCycle w = random_cycle(rng, s.fan);
        TorusCycle pw = push(w);

        // pullback identities
        for (auto a : sigma)
        {
            if (pullback_divisor(s.map, m[new_ray] * E(a)) != m[new_ray] * D(a) + m[a] * D(new_ray))
                bad.push_back("pullback of m_0 E_" + std::to_string(a));
            for (auto b : sigma)
                if (a != b && pullback_divisor(s.map, minus(m[b] * E(a), m[a] * E(b))) !=
                                  minus(m[b] * D(a), m[a] * D(b)))
                    bad.push_back("pullback of m_j E_i - m_i E_j, i=" + std::to_string(a) + " j=" + std::to_string(b));
        }
        // rays away from sigma commute with pushforward
        for (std::size_t a = 0; a < r; ++a)
            if (!std::binary_search(sigma.begin(), sigma.end(), a) && push(src_times(D(a), w)) != tgt_times(E(a), pw))
                bad.push_back("outer ray identity for ray " + std::to_string(a));
        // old rays of sigma against ray j, and the new ray
        for (auto b : sigma)
        {
            TorusCycle pdj = push(src_times(D(b), w));
            TorusCycle ejw = tgt_times(E(b), pw);
            for (auto a : sigma)
            {
                if (a == b)
                    continue;
                Rational q = m[a] / m[b];
                TorusCycle rhs = q * pdj + tgt_times(minus(E(a), q * E(b)), pw);
                if (push(src_times(D(a), w)) != rhs)
                    bad.push_back("old ray identity for i=" + std::to_string(a) + " j=" + std::to_string(b));
            }
            Rational q = m[new_ray] / m[b];
            if (push(src_times(D(new_ray), w)) != Rational(-q) * pdj + q * ejw)
                bad.push_back("new ray identity for j=" + std::to_string(b));
        }
        // D_1 ... D_d W pushes forward to zero
        TorusCycle chain = w;
        for (auto a : sigma)
            chain = src_times(D(a), chain);
        if (!push(chain).is_zero())
            bad.push_back("product of all rays of sigma");
        // monomials of degree < d in the old divisors, applied to [X]
        for (int t = 0; t < 4; ++t)
        {
            std::vector<unsigned> ex_src(r + 1, 0), ex_tgt(r, 0);
            std::size_t deg = pick(rng, d);
            for (std::size_t k = 0; k < deg; ++k)
            {
                std::size_t a = pick(rng, r);
                ++ex_src[a];
                ++ex_tgt[a];
            }
            if (push(evaluate_monomial(s.fan, psi, ex_src)) != evaluate_monomial(target, psi, ex_tgt))
                bad.push_back("low degree monomial of degree " + std::to_string(deg));
        }
        std::string detail;
        for (const auto& b : bad)
            detail += b + "; ";
        return check(bad.empty(), detail + "center " + to_string(rho0) + "\n" + describe(target, psi));
    });
}

SuiteResult suite_resolution(const SuiteOptions& opt)
{
    Rng rng = suite_rng(opt, 4);
    const std::size_t count = or_default(opt.cases, 20);
    return run_cases("resolution", count + 1, [&](std::size_t i) {
        if (i == count)
        {
            Cone c = Cone::from_generators(std::vector<IntVector>{{0, 1}, {2, -1}}, 2);
            MeasureReport rep = verify_resolution_independence(c, ComplementMap::standard(2));
            return check(rep.ok && rep.values.front().second == Rational(3, 10), measure_detail(rep));
        }
        const std::size_t n = 2 + i % 2;
        Cone c = random_singular_cone(rng, n, n, n == 2 ? 5 : 3);
        ComplementMap psi = i % 4 < 2 ? ComplementMap::standard(n) : ComplementMap(random_gram(rng, n));
        MeasureReport rep = verify_resolution_independence(c, psi);
        return check(rep.ok && rep.values.size() >= 3, to_string(c) + ": " + measure_detail(rep));
    });
}

SuiteResult suite_additivity(const SuiteOptions& opt)
{
    Rng rng = suite_rng(opt, 5);
    const std::size_t count = or_default(opt.cases, 20);
    return run_cases("additivity", count + 1, [&](std::size_t i) {
        if (i == count)
        {
            ComplementMap psi = ComplementMap::standard(2);
            Cone tau = Cone::from_generators(std::vector<IntVector>{{0, 1}, {2, -1}}, 2);
            Cone a = Cone::from_generators(std::vector<IntVector>{{0, 1}, {1, 0}}, 2);
            Cone b = Cone::from_generators(std::vector<IntVector>{{1, 0}, {2, -1}}, 2);
            MeasureReport rep = verify_additivity(tau, {a, b}, psi);
            bool worked = todd_measure(tau, psi) == Rational(3, 10) && todd_measure(a, psi) == Rational(1, 4) &&
                          todd_measure(b, psi) == Rational(1, 20);
            return check(rep.ok && worked, measure_detail(rep));
        }
        const std::size_t n = 2 + i % 2;
        Cone tau = random_simplicial_cone(rng, n, n, n == 2 ? 4 : 3);
        Fan f = Fan::of_cone(tau);
        std::size_t moves = 1 + pick(rng, 2);
        for (std::size_t k = 0; k < moves; ++k)
        {
            std::vector<std::size_t> top;
            for (auto c : f.maximal_cones())
                top.push_back(c);
            f = stellar_subdivide(f, random_interior_point(rng, f.cone(top[pick(rng, top.size())]))).fan;
        }
        std::vector<Cone> pieces;
        for (auto c : f.maximal_cones())
            pieces.push_back(f.cone(c));
        ComplementMap psi = i % 2 ? ComplementMap::standard(n) : ComplementMap(random_gram(rng, n));
        MeasureReport rep = verify_additivity(tau, pieces, psi);
        return check(rep.ok, to_string(tau) + ": " + measure_detail(rep));
    });
}

SuiteResult suite_flag_formula(const SuiteOptions& opt)
{
    Rng rng = suite_rng(opt, 6);
    const std::size_t n = or_default(opt.rank, 4);
    const std::size_t kmax = std::min<std::size_t>(n, 4);
    return run_cases("flag-formula", or_default(opt.cases, 10), [&](std::size_t i) {
        const std::size_t k = kmax == 1 ? 1 : 2 + i % (kmax - 1);
        Cone sigma = random_simplicial_cone(rng, k, n, 3);
        Fan f = Fan::of_cone(sigma);
        FlagMap flag = random_generic_flag(rng, f);
        LocalRing ring(sigma, flag);
        std::size_t top = *f.find(sigma);
        std::size_t checked = 0;
        // every exponent vector with sum k
        std::vector<unsigned> a(k, 0);
        std::function<std::string(std::size_t, unsigned)> walk = [&](std::size_t pos, unsigned left) -> std::string {
            if (pos + 1 == k)
            {
                a[pos] = left;
                Rational closed = flag_monomial_coefficient(sigma, a, flag);
                Rational local = ring.monomial_coefficient(a);
                Rational global = evaluate_monomial(f, flag, a).coefficient(f.cones()[top]);
                ++checked;
                if (closed != local || closed != global)
                {
                    std::string ex;
                    for (auto e : a)
                        ex += std::to_string(e) + " ";
                    return "exponents " + ex + ": closed form " + to_string(closed) + ", ring " + to_string(local) +
                           ", fan " + to_string(global);
                }
                return "";
            }
            for (unsigned e = 0; e <= left; ++e)
            {
                a[pos] = e;
                if (auto err = walk(pos + 1, left - e); !err.empty())
                    return err;
            }
            return "";
        };
        std::string err = walk(0, static_cast<unsigned>(k));
        return check(err.empty() && checked > 0, to_string(sigma) + " " + err + "\n" + serialize(flag));
    });
}

SuiteResult suite_normalization(const SuiteOptions& opt)
{
    Rng rng = suite_rng(opt, 7);
    struct Item
    {
        std::string name;
        Fan fan;
        ComplementMap psi;
    };
    std::vector<Item> fans;
    for (auto& [name, f] : complete_fixture_fans())
    {
        fans.push_back({name + " standard", f, ComplementMap::standard(f.rank())});
        fans.push_back({name + " random gram", f, random_gram(rng, f.rank())});
    }
    for (std::size_t n = 2; n <= 3; ++n)
    {
        fans.push_back({"P" + std::to_string(n) + " cartan", projective_space_fan(n), cartan_gram(n)});
        for (int k = 0; k < 3; ++k)
        {
            Fan f = random_complete_fan(rng, n, 1 + pick(rng, 3));
            fans.push_back({"random complete fan", f, random_gram(rng, n)});
        }
    }
    std::vector<LatticePolytope> polys;
    for (std::size_t n = 1; n <= 3; ++n)
        for (auto& p : polytope_corpus(opt.seed, n, or_default(opt.cases, 10)))
            polys.push_back(std::move(p));

    return run_cases("normalization", fans.size() + polys.size(), [&](std::size_t i) {
        if (i < fans.size())
        {
            const Item& it = fans[i];
            if (!is_complete(it.fan))
                return check(false, it.name + " is not complete");
            Rational sum = 0;
            for (auto c : it.fan.maximal_cones())
                sum += todd_measure(it.fan.cone(c), it.psi);
            return check(sum == 1, it.name + ": sum " + to_string(sum) + "\n" + describe(it.fan, it.psi));
        }
        const LatticePolytope& p = polys[i - fans.size()];
        ComplementMap psi = ComplementMap::standard(p.rank());
        Rational sum = 0;
        for (const auto& f : face_lattice(p))
            if (f.dim == 0)
                sum += todd_measure(normal_cone(p, f), psi);
        return check(sum == 1, "vertex sum " + to_string(sum) + "\n" + serialize(p));
    });
}

SuiteResult suite_counting(const SuiteOptions& opt)
{
    std::vector<std::size_t> dims = opt.dims.empty() ? std::vector<std::size_t>{1, 2, 3, 4} : opt.dims;
    std::vector<LatticePolytope> polys;
    for (auto n : dims)
    {
        std::size_t count = or_default(opt.cases, n >= 4 ? 5 : 100);
        for (auto& p : polytope_corpus(opt.seed, n, count))
            polys.push_back(std::move(p));
    }
    return run_cases("counting", polys.size(), [&](std::size_t i) {
        const LatticePolytope& p = polys[i];
        Integer a = count_via_todd(p), b = count_bruteforce(p);
        return check(a == b, "todd " + a.str() + ", brute force " + b.str() + "\n" + serialize(p));
    });
}

SuiteResult suite_ehrhart(const SuiteOptions& opt)
{
    std::vector<LatticePolytope> polys;
    for (std::size_t n = 1; n <= 3; ++n)
    {
        std::size_t count = n == 1 ? 2 : 4;
        for (auto& p : polytope_corpus(opt.seed, n, count))
            polys.push_back(std::move(p));
    }
    if (opt.cases)
        polys.resize(std::min(polys.size(), opt.cases));
    return run_cases("ehrhart", polys.size(), [&](std::size_t i) {
        const LatticePolytope& p = polys[i];
        std::string detail;
        bool ok = true;
        for (const auto& s : ehrhart_samples(p, opt.tmax, ComplementMap::standard(p.rank())))
        {
            detail += "t=" + std::to_string(s.t) + ": " + s.via_todd.str() + " vs " + s.bruteforce.str() + "; ";
            ok &= s.via_todd == s.bruteforce;
        }
        return check(ok, detail + "\n" + serialize(p));
    });
}

std::vector<std::string> suite_names()
{
    return {"projective", "presentation", "projection", "stellar", "resolution",
            "additivity", "flag-formula",     "normalization", "counting", "ehrhart"};
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt)
{
    static const std::map<std::string, SuiteResult (*)(const SuiteOptions&)> table = {
        {"projective", suite_projective}, {"presentation", suite_presentation},
        {"projection", suite_projection}, {"stellar", suite_stellar},
        {"resolution", suite_resolution}, {"additivity", suite_additivity},
        {"flag-formula", suite_flag_formula},     {"normalization", suite_normalization},
        {"counting", suite_counting},     {"ehrhart", suite_ehrhart},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw std::invalid_argument("unknown suite '" + name + "'");
    return it->second(opt);
}

} // namespace toddcount
