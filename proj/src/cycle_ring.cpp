#include "toddcount/cycle_ring.hpp"

#include "toddcount/errors.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace toddcount {

TorusCycle TorusCycle::unit(const RayIndexSet& cone)
{
    TorusCycle z;
    z.add(cone, 1);
    return z;
}

void TorusCycle::add(const RayIndexSet& cone, const Rational& q)
{
    if (q == 0)
        return;
    auto [it, fresh] = terms_.emplace(cone, q);
    if (!fresh)
    {
        it->second += q;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Rational TorusCycle::coefficient(const RayIndexSet& cone) const
{
    auto it = terms_.find(cone);
    return it == terms_.end() ? Rational(0) : it->second;
}

TorusCycle& TorusCycle::operator+=(const TorusCycle& o)
{
    for (const auto& [c, q] : o.terms_)
        add(c, q);
    return *this;
}

TorusCycle& TorusCycle::operator-=(const TorusCycle& o)
{
    for (const auto& [c, q] : o.terms_)
        add(c, -q);
    return *this;
}

TorusCycle& TorusCycle::operator*=(const Rational& q)
{
    if (q == 0)
        terms_.clear();
    for (auto& [c, v] : terms_)
        v *= q;
    return *this;
}

TorusCycle operator+(TorusCycle a, const TorusCycle& b)
{
    return a += b;
}

TorusCycle operator-(TorusCycle a, const TorusCycle& b)
{
    return a -= b;
}

TorusCycle operator*(const Rational& q, TorusCycle a)
{
    return a *= q;
}

std::string to_string(const Fan& f, const TorusCycle& z)
{
    if (z.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [c, q] : z.terms())
    {
        os << (first ? "" : " + ") << to_string(q) << "*V(";
        for (std::size_t i = 0; i < c.size(); ++i)
            os << (i ? "," : "") << to_string(f.rays()[c[i]]);
        os << ')';
        first = false;
    }
    return os.str();
}

WeilDivisor WeilDivisor::prime(std::size_t rays, std::size_t i)
{
    WeilDivisor d = zero(rays);
    d.a.at(i) = 1;
    return d;
}

WeilDivisor operator+(const WeilDivisor& a, const WeilDivisor& b)
{
    if (a.a.size() != b.a.size())
        throw std::invalid_argument("divisors live on different fans");
    WeilDivisor out = a;
    for (std::size_t i = 0; i < out.a.size(); ++i)
        out.a[i] += b.a[i];
    return out;
}

WeilDivisor operator*(const Rational& q, const WeilDivisor& d)
{
    WeilDivisor out = d;
    for (auto& x : out.a)
        x *= q;
    return out;
}

namespace {

Integer set_multiplicity(const Fan& f, const RayIndexSet& s)
{
    if (s.empty())
        return 1;
    std::vector<IntVector> r;
    for (auto k : s)
        r.push_back(f.rays()[k]);
    return lattice_index(r);
}

} // namespace

RatVector local_equation(const Fan& f, const WeilDivisor& d, const RayIndexSet& sigma)
{
    if (d.a.size() != f.ray_count())
        throw std::invalid_argument("local_equation: divisor has wrong length");
    const std::size_t n = f.rank();
    if (sigma.empty())
        return RatVector(n);
    std::vector<IntVector> rows;
    RatVector rhs;
    for (auto k : sigma)
    {
        rows.push_back(f.rays()[k]);
        rhs.push_back(d.a[k]);
    }
    auto m = solve_linear(rational_rows(rows, n), rhs);
    if (!m)
        throw std::invalid_argument("local_equation: cone is not simplicial");
    return *m;
}

Rational cofacet_coefficient(const Fan& f, const ComplementMap& psi, std::size_t tau, std::size_t sigma,
                             const RatVector& m)
{
    const RayIndexSet& t = f.cones()[tau];
    const RayIndexSet& s = f.cones()[sigma];
    std::size_t fresh = f.ray_count();
    for (auto k : s)
        if (!std::binary_search(t.begin(), t.end(), k))
            fresh = k;
    RatVector p = psi.project_pi_tau(f.cone(tau), m);
    Rational k = Rational(set_multiplicity(f, s)) / Rational(set_multiplicity(f, t));
    return dot(p, f.rays()[fresh]) / k;
}

TorusCycle divisor_times_cycle(const Fan& f, const ComplementMap& psi, const WeilDivisor& d, const TorusCycle& z)
{
    if (!f.is_simplicial())
        throw std::invalid_argument("divisor_times_cycle: fan is not simplicial");
    TorusCycle out;
    for (const auto& [cone, q] : z.terms())
    {
        auto tau = f.find(cone);
        if (!tau)
            throw std::invalid_argument("divisor_times_cycle: cycle has a cone outside the fan");
        for (auto sigma : f.cofacets(*tau))
        {
            const RayIndexSet& s = f.cones()[sigma];
            if (std::all_of(s.begin(), s.end(), [&](std::size_t k) { return d.a[k] == 0; }))
                continue;
            RatVector m = local_equation(f, d, s);
            out.add(s, q * cofacet_coefficient(f, psi, *tau, sigma, m));
        }
    }
    return out;
}

TorusCycle evaluate_product(const Fan& f, const ComplementMap& psi, const std::vector<std::size_t>& order)
{
    TorusCycle z = TorusCycle::point_class();
    for (auto i : order)
    {
        z = divisor_times_cycle(f, psi, WeilDivisor::prime(f.ray_count(), i), z);
        if (z.is_zero())
            break;
    }
    return z;
}

TorusCycle evaluate_monomial(const Fan& f, const ComplementMap& psi, const std::vector<unsigned>& exponents)
{
    if (exponents.size() != f.ray_count())
        throw std::invalid_argument("evaluate_monomial: one exponent per ray expected");
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < exponents.size(); ++i)
        for (unsigned e = 0; e < exponents[i]; ++e)
            order.push_back(i);
    if (order.size() > f.rank())
        return {};
    return evaluate_product(f, psi, order);
}

WeilDivisor principal_divisor(const Fan& f, const RatVector& u)
{
    WeilDivisor d;
    for (const auto& v : f.rays())
        d.a.push_back(dot(u, v));
    return d;
}

WeilDivisor pullback_divisor(const SubdivisionMap& s, const WeilDivisor& d)
{
    const Fan& src = s.source;
    const Fan& tgt = s.target;
    WeilDivisor out = WeilDivisor::zero(src.ray_count());
    for (std::size_t r = 0; r < src.ray_count(); ++r)
    {
        std::size_t idx = *src.find(RayIndexSet{r});
        std::size_t home = s.image[idx];
        const RayIndexSet& sigma = tgt.cones()[home];
        if (tgt.dim(home) != sigma.size())
            throw std::invalid_argument("pullback_divisor: ray lies in a non-simplicial cone");
        const IntVector& v = src.rays()[r];
        out.a[r] = dot(local_equation(tgt, d, sigma), v);
        // every simplicial cone containing sigma must agree
        for (std::size_t j = 0; j < tgt.size(); ++j)
        {
            const RayIndexSet& t = tgt.cones()[j];
            if (j == home || tgt.dim(j) != t.size() ||
                !std::includes(t.begin(), t.end(), sigma.begin(), sigma.end()))
                continue;
            if (dot(local_equation(tgt, d, t), v) != out.a[r])
                throw std::logic_error("pullback_divisor: local equations disagree");
        }
    }
    return out;
}

TorusCycle pushforward_cycle(const SubdivisionMap& s, const TorusCycle& z)
{
    TorusCycle out;
    for (const auto& [cone, q] : z.terms())
    {
        auto idx = s.source.find(cone);
        if (!idx)
            throw std::invalid_argument("pushforward_cycle: cycle has a cone outside the source fan");
        std::size_t home = s.image[*idx];
        if (s.target.dim(home) == s.source.dim(*idx))
            out.add(s.target.cones()[home], q);
    }
    return out;
}

namespace {

void check_zero(RelationReport& rep, const Fan& f, const TorusCycle& z, const std::string& what)
{
    ++rep.checked;
    if (!z.is_zero())
    {
        rep.ok = false;
        rep.failures.push_back(what + " = " + to_string(f, z));
    }
}

std::string cone_label(const Fan& f, const RayIndexSet& s)
{
    return to_string(f.cone(*f.find(s)));
}

} // namespace

RelationReport verify_presentation_relations(const Fan& f, const ComplementMap& psi)
{
    if (!f.is_simplicial())
        throw std::invalid_argument("verify_presentation_relations: fan is not simplicial");
    const std::size_t n = f.rank();
    const std::size_t r = f.ray_count();
    RelationReport rep;

    // Each relation is a list of divisors whose product must vanish.
    struct Relation
    {
        std::vector<WeilDivisor> factors;
        std::string label;
    };
    auto relations_for = [&](std::size_t dim) {
        std::vector<Relation> out;
        if (auto* ip = psi.inner_product())
        {
            for (std::size_t i = 0; i < r; ++i)
            {
                WeilDivisor e = WeilDivisor::zero(r);
                RatVector gv(n);
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        gv[a] += ip->gram(a, b) * f.rays()[i][b];
                for (std::size_t j = 0; j < r; ++j)
                    e.a[j] = dot(gv, f.rays()[j]);
                out.push_back({{WeilDivisor::prime(r, i), e}, "D_" + std::to_string(i) + "*sum_j<v_i,v_j>D_j"});
            }
        }
        else
        {
            const auto& rows = psi.flag()->rows;
            std::vector<IntVector> us;
            if (dim == n)
                us = IntegerMatrix::identity(n).to_rows();
            else
                us = integer_kernel_basis(IntegerMatrix::from_rows({rows.begin(), rows.begin() + (n - dim)}, n));
            for (const auto& u : us)
                out.push_back({{principal_divisor(f, to_rational(u))}, "div(chi^" + to_string(u) + ")"});
        }
        return out;
    };

    for (std::size_t t = 0; t < f.size(); ++t)
    {
        const RayIndexSet& tau = f.cones()[t];
        if (psi.inner_product() && tau.size() + 2 > n)
            continue;
        for (const auto& rel : relations_for(tau.size()))
        {
            const std::string where = rel.label + " on " + cone_label(f, tau);
            TorusCycle fwd = TorusCycle::unit(tau), rev = TorusCycle::unit(tau);
            for (std::size_t k = 0; k < rel.factors.size(); ++k)
            {
                fwd = divisor_times_cycle(f, psi, rel.factors[k], fwd);
                rev = divisor_times_cycle(f, psi, rel.factors[rel.factors.size() - 1 - k], rev);
            }
            check_zero(rep, f, fwd, where);
            check_zero(rep, f, rev, where + " (reversed)");

            // relation first, then the monomial mult(tau) * prod_{j in tau} D_j
            TorusCycle late = TorusCycle::point_class();
            for (const auto& d : rel.factors)
                late = divisor_times_cycle(f, psi, d, late);
            for (auto j : tau)
                late = divisor_times_cycle(f, psi, WeilDivisor::prime(r, j), late);
            check_zero(rep, f, late, where + " (relation applied first)");
        }
    }

    // minimal non-faces of size at most n
    std::vector<RayIndexSet> frontier;
    for (std::size_t i = 0; i < r; ++i)
        frontier.push_back({i});
    for (std::size_t size = 2; size <= n && !frontier.empty(); ++size)
    {
        std::vector<RayIndexSet> next;
        for (const auto& base : frontier)
            for (std::size_t j = base.back() + 1; j < r; ++j)
            {
                RayIndexSet s = base;
                s.push_back(j);
                bool all_faces = true;
                for (std::size_t drop = 0; drop + 1 < s.size() && all_faces; ++drop)
                {
                    RayIndexSet sub;
                    for (std::size_t k = 0; k < s.size(); ++k)
                        if (k != drop)
                            sub.push_back(s[k]);
                    all_faces = f.find(sub).has_value();
                }
                if (!all_faces)
                    continue;
                if (f.find(s))
                    next.push_back(s);
                else
                {
                    std::string label = "Stanley-Reisner monomial on rays";
                    for (auto k : s)
                        label += " " + to_string(f.rays()[k]);
                    check_zero(rep, f, evaluate_product(f, psi, s), label);
                }
            }
        frontier = std::move(next);
    }
    return rep;
}

} // namespace toddcount
