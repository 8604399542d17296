#include "toddcount/fan.hpp"

#include "toddcount/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace toddcount {

struct ConeBuilder
{
    // rays must already be primitive, distinct, extreme and sorted
    static Cone make(std::vector<IntVector> rays, std::size_t n, std::size_t dim)
    {
        return Cone(std::move(rays), n, dim);
    }
};

namespace {

template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn)
{
    if (k > n)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true)
    {
        fn(static_cast<const std::vector<std::size_t>&>(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

bool is_subset(const RayIndexSet& small, const RayIndexSet& big)
{
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

RayIndexSet set_intersection(const RayIndexSet& a, const RayIndexSet& b)
{
    RayIndexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Geometry of the cone generated by `gens` (nonzero, any order), computed in
// coordinates of a lattice basis of the span. Facets come from (d-1)-subsets
// of generators whose hyperplane leaves every generator on one side.
ConeGeometry geometry_of(const std::vector<IntVector>& gens, std::size_t n)
{
    ConeGeometry g;
    g.span_basis = lattice_basis_of_span(gens, n);
    const std::size_t d = g.span_basis.size();
    for (const auto& v : gens)
    {
        auto c = coordinates_in(g.span_basis, to_rational(v));
        IntVector ic(d);
        for (std::size_t i = 0; i < d; ++i)
            ic[i] = boost::multiprecision::numerator((*c)[i]);
        g.ray_coords.push_back(std::move(ic));
    }
    if (d == 0)
        return g;
    std::set<IntVector> seen;
    for_each_combination(gens.size(), d - 1, [&](const std::vector<std::size_t>& subset) {
        std::vector<IntVector> rows;
        for (auto i : subset)
            rows.push_back(g.ray_coords[i]);
        RationalMatrix m = rational_rows(rows, d);
        auto ker = kernel_basis(m);
        if (ker.size() != 1)
            return;
        IntVector w = primitive_integer_multiple(ker.front());
        bool pos = false, neg = false;
        for (const auto& c : g.ray_coords)
        {
            Integer s = dot(w, c);
            pos |= s > 0;
            neg |= s < 0;
        }
        if (pos && neg)
            return;
        if (neg)
            for (auto& x : w)
                x = -x;
        if (!seen.insert(w).second)
            return;
        std::vector<std::size_t> on;
        for (std::size_t i = 0; i < g.ray_coords.size(); ++i)
            if (dot(w, g.ray_coords[i]) == 0)
                on.push_back(i);
        g.facet_normals.push_back(std::move(w));
        g.facet_rays.push_back(std::move(on));
    });
    return g;
}

// Index subsets of `gens` (assumed extreme rays of a pointed cone) that span
// faces, including the empty face and the whole cone.
std::vector<RayIndexSet> face_index_sets(const std::vector<IntVector>& gens, std::size_t n, std::size_t dim)
{
    std::vector<RayIndexSet> out;
    if (gens.size() == dim)
    {
        for (std::size_t mask = 0; mask < (std::size_t{1} << gens.size()); ++mask)
        {
            RayIndexSet s;
            for (std::size_t i = 0; i < gens.size(); ++i)
                if (mask & (std::size_t{1} << i))
                    s.push_back(i);
            out.push_back(std::move(s));
        }
        return out;
    }
    ConeGeometry g = geometry_of(gens, n);
    std::set<RayIndexSet> all;
    RayIndexSet full(gens.size());
    for (std::size_t i = 0; i < full.size(); ++i)
        full[i] = i;
    all.insert(full);
    std::vector<RayIndexSet> frontier(g.facet_rays.begin(), g.facet_rays.end());
    for (auto& f : frontier)
        all.insert(f);
    while (!frontier.empty())
    {
        std::vector<RayIndexSet> next;
        for (const auto& a : frontier)
            for (const auto& f : g.facet_rays)
            {
                RayIndexSet x = set_intersection(a, f);
                if (all.insert(x).second)
                    next.push_back(std::move(x));
            }
        frontier = std::move(next);
    }
    all.insert(RayIndexSet{});
    return {all.begin(), all.end()};
}

struct ExtremeCheck
{
    bool pointed = true;
    std::vector<bool> extreme;
    std::size_t dim = 0;
};

// gens: primitive and distinct
ExtremeCheck check_extreme(const std::vector<IntVector>& gens, std::size_t n)
{
    ExtremeCheck out;
    out.extreme.assign(gens.size(), true);
    out.dim = rank(gens, n);
    const std::size_t d = out.dim;
    if (gens.size() == d)
        return out;
    if (d == 1)
    {
        // two distinct primitive vectors on a line are opposite
        out.pointed = false;
        return out;
    }
    ConeGeometry g = geometry_of(gens, n);
    if (g.facet_normals.empty() || rank(g.facet_normals, d) < d)
    {
        out.pointed = false;
        return out;
    }
    for (std::size_t i = 0; i < gens.size(); ++i)
    {
        std::vector<IntVector> normals;
        for (std::size_t f = 0; f < g.facet_rays.size(); ++f)
            if (std::binary_search(g.facet_rays[f].begin(), g.facet_rays[f].end(), i))
                normals.push_back(g.facet_normals[f]);
        out.extreme[i] = normals.size() >= d - 1 && rank(normals, d) == d - 1;
    }
    return out;
}

RatVector ambient_functional(const ConeGeometry& g, const IntVector& span_normal)
{
    // u with <u, b_j> = w_j for each span basis row b_j
    const std::size_t n = g.span_basis.front().size();
    auto u = solve_linear(rational_rows(g.span_basis, n), to_rational(span_normal));
    return *u;
}

// Inequality description of a cone in ambient coordinates.
struct HalfspaceForm
{
    std::vector<RatVector> equations;   // u·x = 0
    std::vector<RatVector> inequalities; // u·x >= 0
};

HalfspaceForm halfspaces(const Cone& c)
{
    HalfspaceForm h;
    const std::size_t n = c.ambient_rank();
    if (c.dim() == 0)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            RatVector e(n);
            e[i] = 1;
            h.equations.push_back(std::move(e));
        }
        return h;
    }
    h.equations = kernel_basis(rational_rows(c.rays(), n));
    ConeGeometry g = cone_geometry(c);
    for (const auto& w : g.facet_normals)
        h.inequalities.push_back(ambient_functional(g, w));
    return h;
}

// Extreme rays of {x : E x = 0, A x >= 0}, assumed pointed.
std::vector<IntVector> extreme_rays(const HalfspaceForm& h, std::size_t n)
{
    std::vector<IntVector> out;
    std::size_t re = rank(RationalMatrix::from_rows(h.equations, n));
    if (re >= n)
        return out;
    const std::size_t need = n - 1 - re;
    std::set<IntVector> found;
    for_each_combination(h.inequalities.size(), need, [&](const std::vector<std::size_t>& subset) {
        std::vector<RatVector> rows = h.equations;
        for (auto i : subset)
            rows.push_back(h.inequalities[i]);
        RationalMatrix m = RationalMatrix::from_rows(rows, n);
        auto ker = kernel_basis(m);
        if (ker.size() != 1)
            return;
        for (int sign : {1, -1})
        {
            RatVector x = ker.front();
            if (sign < 0)
                for (auto& v : x)
                    v = -v;
            bool ok = std::all_of(h.inequalities.begin(), h.inequalities.end(),
                                  [&](const RatVector& u) { return dot(u, x) >= 0; });
            if (ok)
                found.insert(primitive_integer_multiple(x));
        }
    });
    return {found.begin(), found.end()};
}

// Membership tests against the cones of one fan, with facet data cached.
class ConeLocator
{
  public:
    explicit ConeLocator(const Fan& f)
    {
        cones_.reserve(f.size());
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            Entry e{f.cone(i), {}};
            if (!e.cone.is_simplicial())
                e.geometry = geometry_of(e.cone.rays(), e.cone.ambient_rank());
            cones_.push_back(std::move(e));
        }
    }

    bool contains(std::size_t i, const RatVector& x) const
    {
        const Entry& e = cones_[i];
        if (!e.geometry)
            return toddcount::contains(e.cone, x);
        auto coords = coordinates_in(e.geometry->span_basis, x);
        if (!coords)
            return false;
        for (const auto& w : e.geometry->facet_normals)
            if (dot(*coords, w) < 0)
                return false;
        return true;
    }

    // cones are sorted by dimension, so the first hit is the smallest
    std::optional<std::size_t> smallest_containing(const RatVector& x) const
    {
        for (std::size_t i = 0; i < cones_.size(); ++i)
            if (contains(i, x))
                return i;
        return std::nullopt;
    }

    std::optional<std::size_t> smallest_containing(const std::vector<IntVector>& rays, std::size_t n) const
    {
        RatVector sum(n);
        for (const auto& r : rays)
            for (std::size_t k = 0; k < n; ++k)
                sum[k] += r[k];
        auto i = smallest_containing(sum);
        if (!i)
            return std::nullopt;
        for (const auto& r : rays)
            if (!contains(*i, to_rational(r)))
                return std::nullopt;
        return i;
    }

  private:
    struct Entry
    {
        Cone cone;
        std::optional<ConeGeometry> geometry;
    };
    std::vector<Entry> cones_;
};

} // namespace

// ---------------------------------------------------------------------------
// Cone

Cone::Cone(std::vector<IntVector> rays, std::size_t ambient_rank, std::size_t dim)
    : rays_(std::move(rays)), ambient_rank_(ambient_rank), dim_(dim)
{
}

Cone Cone::zero(std::size_t ambient_rank)
{
    return Cone({}, ambient_rank, 0);
}

Cone Cone::from_generators(std::span<const IntVector> generators, std::size_t ambient_rank)
{
    std::vector<IntVector> gens;
    for (const auto& g : generators)
    {
        if (g.size() != ambient_rank)
            throw std::invalid_argument("Cone: generator length differs from ambient rank");
        if (is_zero(g))
            throw std::invalid_argument("Cone: zero generator");
        gens.push_back(primitive_vector(g));
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    ExtremeCheck chk = check_extreme(gens, ambient_rank);
    if (!chk.pointed)
        throw std::invalid_argument("Cone: generators do not span a strictly convex cone");
    std::vector<IntVector> rays;
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (chk.extreme[i])
            rays.push_back(std::move(gens[i]));
    return Cone(std::move(rays), ambient_rank, chk.dim);
}

std::string to_string(const Cone& c)
{
    std::ostringstream os;
    os << "cone(";
    for (std::size_t i = 0; i < c.rays().size(); ++i)
        os << (i ? "," : "") << to_string(c.rays()[i]);
    os << ')';
    return os.str();
}

ConeGeometry cone_geometry(const Cone& c)
{
    return geometry_of(c.rays(), c.ambient_rank());
}

bool contains(const Cone& c, const RatVector& x)
{
    if (c.dim() == 0)
        return is_zero(x);
    if (c.is_simplicial())
    {
        auto lambda = coordinates_in(c.rays(), x);
        return lambda && std::all_of(lambda->begin(), lambda->end(), [](const Rational& q) { return q >= 0; });
    }
    ConeGeometry g = cone_geometry(c);
    auto coords = coordinates_in(g.span_basis, x);
    if (!coords)
        return false;
    for (const auto& w : g.facet_normals)
        if (dot(*coords, w) < 0)
            return false;
    return true;
}

bool contains(const Cone& c, const IntVector& x)
{
    return contains(c, to_rational(x));
}

bool contains(const Cone& outer, const Cone& inner)
{
    return std::all_of(inner.rays().begin(), inner.rays().end(),
                       [&](const IntVector& r) { return contains(outer, r); });
}

std::vector<Cone> faces(const Cone& c)
{
    std::vector<Cone> out;
    for (const auto& s : face_index_sets(c.rays(), c.ambient_rank(), c.dim()))
    {
        std::vector<IntVector> r;
        for (auto i : s)
            r.push_back(c.rays()[i]);
        std::size_t d = c.is_simplicial() ? r.size() : rank(r, c.ambient_rank());
        out.push_back(ConeBuilder::make(std::move(r), c.ambient_rank(), d));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Integer multiplicity(const Cone& c)
{
    if (!c.is_simplicial())
        throw std::invalid_argument("multiplicity: cone is not simplicial");
    return lattice_index(c.rays());
}

bool is_smooth(const Cone& c)
{
    return c.is_simplicial() && multiplicity(c) == 1;
}

// ---------------------------------------------------------------------------
// Fan

Fan::Fan(std::size_t rank, std::vector<IntVector> rays, const std::vector<RayIndexSet>& cones)
    : rank_(rank), rays_(std::move(rays))
{
    for (const auto& r : rays_)
    {
        if (r.size() != rank_)
            throw std::invalid_argument("Fan: ray length differs from rank");
        if (is_zero(r))
            throw std::invalid_argument("Fan: zero ray");
    }
    std::set<RayIndexSet> closed;
    closed.insert(RayIndexSet{});
    std::map<RayIndexSet, std::size_t> dim_of;
    dim_of[{}] = 0;
    for (auto s : cones)
    {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (closed.count(s))
            continue;
        std::vector<IntVector> gens;
        for (auto i : s)
        {
            if (i >= rays_.size())
                throw std::invalid_argument("Fan: ray index out of range");
            gens.push_back(primitive_vector(rays_[i]));
        }
        std::size_t d = toddcount::rank(gens, rank_);
        bool simplicial = d == gens.size();
        if (!simplicial)
        {
            std::vector<IntVector> sorted = gens;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw std::invalid_argument("Fan: cone lists a ray twice");
            ExtremeCheck chk = check_extreme(gens, rank_);
            if (!chk.pointed)
                throw std::invalid_argument("Fan: cone is not strictly convex");
            if (std::find(chk.extreme.begin(), chk.extreme.end(), false) != chk.extreme.end())
                throw std::invalid_argument("Fan: cone lists a non-extreme ray");
        }
        for (const auto& face : face_index_sets(gens, rank_, d))
        {
            RayIndexSet global;
            for (auto i : face)
                global.push_back(s[i]);
            if (closed.insert(global).second)
            {
                std::vector<IntVector> fr;
                for (auto i : face)
                    fr.push_back(gens[i]);
                dim_of[global] = simplicial ? global.size() : toddcount::rank(fr, rank_);
            }
        }
    }
    cones_.assign(closed.begin(), closed.end());
    std::stable_sort(cones_.begin(), cones_.end(), [&](const RayIndexSet& a, const RayIndexSet& b) {
        std::size_t da = dim_of[a], db = dim_of[b];
        if (da != db)
            return da < db;
        return a < b;
    });
    dims_.reserve(cones_.size());
    for (std::size_t i = 0; i < cones_.size(); ++i)
    {
        dims_.push_back(dim_of[cones_[i]]);
        index_[cones_[i]] = i;
    }
    cofacets_.assign(cones_.size(), {});
    for (std::size_t i = 0; i < cones_.size(); ++i)
    {
        const auto& s = cones_[i];
        if (dims_[i] == 0)
            continue;
        if (dims_[i] == s.size())
        {
            for (std::size_t drop = 0; drop < s.size(); ++drop)
            {
                RayIndexSet t;
                for (std::size_t k = 0; k < s.size(); ++k)
                    if (k != drop)
                        t.push_back(s[k]);
                cofacets_[index_.at(t)].push_back(i);
            }
        }
        else
        {
            for (std::size_t j = 0; j < cones_.size(); ++j)
                if (dims_[j] + 1 == dims_[i] && is_subset(cones_[j], s))
                    cofacets_[j].push_back(i);
        }
    }
    for (auto& c : cofacets_)
        std::sort(c.begin(), c.end());
}

Fan Fan::of_cone(const Cone& c)
{
    RayIndexSet all(c.rays().size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    return Fan(c.ambient_rank(), c.rays(), {all});
}

Cone Fan::cone(std::size_t idx) const
{
    const auto& s = cones_[idx];
    std::vector<IntVector> r;
    r.reserve(s.size());
    for (auto i : s)
        r.push_back(primitive_vector(rays_[i]));
    std::sort(r.begin(), r.end());
    return ConeBuilder::make(std::move(r), rank_, dims_[idx]);
}

std::optional<std::size_t> Fan::find(const RayIndexSet& rays) const
{
    RayIndexSet s = rays;
    std::sort(s.begin(), s.end());
    auto it = index_.find(s);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Fan::find(const Cone& c) const
{
    RayIndexSet s;
    for (const auto& r : c.rays())
    {
        auto i = ray_index(r);
        if (!i)
            return std::nullopt;
        s.push_back(*i);
    }
    return find(s);
}

std::optional<std::size_t> Fan::ray_index(const IntVector& ray) const
{
    for (std::size_t i = 0; i < rays_.size(); ++i)
        if (rays_[i] == ray)
            return i;
    return std::nullopt;
}

std::vector<std::size_t> Fan::maximal_cones() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cones_.size(); ++i)
    {
        bool maximal = true;
        for (std::size_t j = 0; j < cones_.size() && maximal; ++j)
            if (j != i && cones_[j].size() > cones_[i].size() && is_subset(cones_[i], cones_[j]))
                maximal = false;
        if (maximal)
            out.push_back(i);
    }
    return out;
}

bool Fan::is_simplicial() const
{
    for (std::size_t i = 0; i < cones_.size(); ++i)
        if (dims_[i] != cones_[i].size())
            return false;
    return true;
}

bool Fan::is_smooth() const
{
    if (!is_simplicial())
        return false;
    for (std::size_t i = 0; i < cones_.size(); ++i)
    {
        std::vector<IntVector> r;
        for (auto k : cones_[i])
            r.push_back(rays_[k]);
        if (lattice_index(r) != 1)
            return false;
    }
    return true;
}


// ---------------------------------------------------------------------------
// Validation and containment

FanReport validate_fan(const Fan& f)
{
    FanReport rep;
    const std::size_t n = f.rank();
    for (std::size_t i = 0; i < f.ray_count(); ++i)
    {
        if (primitive_vector(f.rays()[i]) != f.rays()[i])
            rep.violations.push_back("ray " + to_string(f.rays()[i]) + " is not primitive");
        for (std::size_t j = 0; j < i; ++j)
            if (f.rays()[i] == f.rays()[j])
                rep.violations.push_back("ray " + to_string(f.rays()[i]) + " is listed twice");
    }

    auto maxes = f.maximal_cones();
    std::vector<std::set<RayIndexSet>> face_sets(maxes.size());
    std::vector<HalfspaceForm> forms(maxes.size());
    for (std::size_t a = 0; a < maxes.size(); ++a)
    {
        const RayIndexSet& s = f.cones()[maxes[a]];
        std::vector<IntVector> gens;
        for (auto k : s)
            gens.push_back(f.rays()[k]);
        for (const auto& face : face_index_sets(gens, n, f.dim(maxes[a])))
        {
            RayIndexSet g;
            for (auto k : face)
                g.push_back(s[k]);
            face_sets[a].insert(g);
        }
        forms[a] = halfspaces(f.cone(maxes[a]));
    }

    for (std::size_t a = 0; a < maxes.size(); ++a)
        for (std::size_t b = a + 1; b < maxes.size(); ++b)
        {
            HalfspaceForm both = forms[a];
            both.equations.insert(both.equations.end(), forms[b].equations.begin(), forms[b].equations.end());
            both.inequalities.insert(both.inequalities.end(), forms[b].inequalities.begin(),
                                     forms[b].inequalities.end());
            std::vector<IntVector> meet = extreme_rays(both, n);
            RayIndexSet idx;
            bool ok = true;
            for (const auto& r : meet)
            {
                auto k = f.ray_index(r);
                if (!k)
                {
                    ok = false;
                    break;
                }
                idx.push_back(*k);
            }
            std::sort(idx.begin(), idx.end());
            ok = ok && face_sets[a].count(idx) && face_sets[b].count(idx);
            if (!ok)
            {
                rep.violations.push_back(to_string(f.cone(maxes[a])) + " and " + to_string(f.cone(maxes[b])) +
                                         " do not meet in a common face");
                rep.offending_pairs.emplace_back(maxes[a], maxes[b]);
            }
        }
    rep.ok = rep.violations.empty();
    return rep;
}

std::size_t minimal_containing_cone_index(const Fan& f, const Cone& c)
{
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.dim(i) >= c.dim() && contains(f.cone(i), c))
            return i;
    throw std::invalid_argument("minimal_containing_cone: " + to_string(c) + " lies in no cone of the fan");
}

Cone minimal_containing_cone(const Fan& f, const Cone& c)
{
    return f.cone(minimal_containing_cone_index(f, c));
}

SubdivisionMap SubdivisionMap::between(Fan source, Fan target)
{
    if (source.rank() != target.rank())
        throw std::invalid_argument("SubdivisionMap: rank mismatch");
    ConeLocator loc(target);
    std::vector<std::size_t> image(source.size());
    for (std::size_t i = 0; i < source.size(); ++i)
    {
        std::vector<IntVector> rays;
        for (auto k : source.cones()[i])
            rays.push_back(source.rays()[k]);
        auto j = loc.smallest_containing(rays, source.rank());
        if (!j)
            throw std::invalid_argument("SubdivisionMap: " + to_string(source.cone(i)) +
                                        " is not inside a cone of the target fan");
        image[i] = *j;
    }
    return {std::move(source), std::move(target), std::move(image)};
}

SubdivisionMap SubdivisionMap::identity(const Fan& f)
{
    std::vector<std::size_t> image(f.size());
    for (std::size_t i = 0; i < image.size(); ++i)
        image[i] = i;
    return {f, f, std::move(image)};
}

SubdivisionMap compose(const SubdivisionMap& a, const SubdivisionMap& b)
{
    if (!(a.target == b.source))
        throw std::invalid_argument("compose: maps do not chain");
    std::vector<std::size_t> image(a.image.size());
    for (std::size_t i = 0; i < image.size(); ++i)
        image[i] = b.image[a.image[i]];
    return {a.source, b.target, std::move(image)};
}

// ---------------------------------------------------------------------------
// Subdivisions

namespace {

// Facets of the cone on global ray indices s, as global index sets.
std::vector<RayIndexSet> facets_of(const Fan& f, const RayIndexSet& s, std::size_t dim)
{
    std::vector<IntVector> gens;
    for (auto k : s)
        gens.push_back(f.rays()[k]);
    std::vector<RayIndexSet> out;
    if (dim == s.size())
    {
        for (std::size_t drop = 0; drop < s.size(); ++drop)
        {
            RayIndexSet t;
            for (std::size_t k = 0; k < s.size(); ++k)
                if (k != drop)
                    t.push_back(s[k]);
            out.push_back(std::move(t));
        }
        return out;
    }
    ConeGeometry g = geometry_of(gens, f.rank());
    for (const auto& fr : g.facet_rays)
    {
        RayIndexSet t;
        for (auto k : fr)
            t.push_back(s[k]);
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<RayIndexSet> pull(const Fan& f, const RayIndexSet& s, std::size_t dim)
{
    if (dim == s.size())
        return {s};
    std::size_t apex = s.front();
    for (auto k : s)
        if (f.rays()[k] < f.rays()[apex])
            apex = k;
    std::vector<RayIndexSet> out;
    for (const auto& facet : facets_of(f, s, dim))
    {
        if (std::binary_search(facet.begin(), facet.end(), apex))
            continue;
        std::vector<IntVector> gens;
        for (auto k : facet)
            gens.push_back(f.rays()[k]);
        for (auto piece : pull(f, facet, rank(gens, f.rank())))
        {
            piece.push_back(apex);
            std::sort(piece.begin(), piece.end());
            out.push_back(std::move(piece));
        }
    }
    return out;
}

} // namespace

Subdivision stellar_subdivide(const Fan& f, const IntVector& center)
{
    const std::size_t n = f.rank();
    if (center.size() != n || is_zero(center))
        throw std::invalid_argument("stellar_subdivide: bad center");
    IntVector p = primitive_vector(center);
    if (f.ray_index(p))
        throw std::invalid_argument("stellar_subdivide: center is already a ray");
    ConeLocator loc(f);
    auto si = loc.smallest_containing(to_rational(p));
    if (!si)
        throw std::invalid_argument("stellar_subdivide: center is outside the support");
    const RayIndexSet& sigma = f.cones()[*si];

    std::vector<IntVector> rays = f.rays();
    const std::size_t fresh = rays.size();
    rays.push_back(p);
    std::vector<RayIndexSet> cones;
    for (auto m : f.maximal_cones())
    {
        const RayIndexSet& tau = f.cones()[m];
        if (!is_subset(sigma, tau))
        {
            cones.push_back(tau);
            continue;
        }
        for (auto facet : facets_of(f, tau, f.dim(m)))
        {
            if (is_subset(sigma, facet))
                continue;
            facet.push_back(fresh);
            cones.push_back(std::move(facet));
        }
    }
    Fan out(n, std::move(rays), cones);
    auto map = SubdivisionMap::between(out, f);
    return {std::move(out), std::move(map)};
}

Subdivision simplicialize(const Fan& f)
{
    if (f.is_simplicial())
        return {f, SubdivisionMap::identity(f)};
    std::vector<RayIndexSet> cones;
    for (auto m : f.maximal_cones())
        for (auto& piece : pull(f, f.cones()[m], f.dim(m)))
            cones.push_back(std::move(piece));
    Fan out(f.rank(), f.rays(), cones);
    auto map = SubdivisionMap::between(out, f);
    return {std::move(out), std::move(map)};
}

// ---------------------------------------------------------------------------
// Parallelepiped points and resolution

namespace {

struct BoxData
{
    std::vector<IntVector> rays;
    std::int64_t m = 1;
    std::vector<std::int64_t> diag;                   // HNF diagonal
    std::vector<std::vector<std::int64_t>> step;      // row k of adj, mod m
    std::vector<std::vector<std::int64_t>> wrap;      // diag[k] * row k, mod m
};

std::int64_t mod_to_i64(const Integer& x, const Integer& m)
{
    Integer r = x % m;
    if (r < 0)
        r += m;
    return r.convert_to<std::int64_t>();
}

BoxData box_data(const Cone& c)
{
    if (!c.is_simplicial())
        throw std::invalid_argument("parallelepiped_points: cone is not simplicial");
    BoxData b;
    b.rays = c.rays();
    const std::size_t d = c.dim();
    if (d == 0)
        return b;
    ConeGeometry g = cone_geometry(c);
    IntegerMatrix cm = IntegerMatrix::from_rows(g.ray_coords, d);
    Integer det = determinant(cm);
    Integer m = abs(det);
    if (m >= (Integer(1) << 62))
        throw std::overflow_error("parallelepiped_points: multiplicity too large to enumerate");
    b.m = m.convert_to<std::int64_t>();
    // adj(C) = det * C^{-1}; t = x * C^{-1} = x * adj / det
    RationalMatrix inv(d, d);
    {
        RationalMatrix aug(d, 2 * d);
        for (std::size_t i = 0; i < d; ++i)
        {
            for (std::size_t j = 0; j < d; ++j)
                aug(i, j) = cm(i, j);
            aug(i, d + i) = 1;
        }
        RowEchelon e = row_reduce(aug);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                inv(i, j) = e.reduced(i, d + j);
    }
    HermiteForm h = hermite_normal_form(cm);
    b.diag.resize(d);
    b.step.assign(d, std::vector<std::int64_t>(d));
    b.wrap.assign(d, std::vector<std::int64_t>(d));
    for (std::size_t k = 0; k < d; ++k)
    {
        b.diag[k] = h.h(k, k).convert_to<std::int64_t>();
        for (std::size_t j = 0; j < d; ++j)
        {
            Rational a = inv(k, j) * m;
            Integer ai = boost::multiprecision::numerator(a);
            b.step[k][j] = mod_to_i64(ai, m);
            b.wrap[k][j] = mod_to_i64(ai * b.diag[k], m);
        }
    }
    return b;
}

// Calls fn(t_numerators) for every coset of the ray lattice, origin first.
template <typename Fn>
void enumerate_box(const BoxData& b, Fn&& fn)
{
    const std::size_t d = b.diag.size();
    std::vector<std::int64_t> x(d, 0), r(d, 0);
    while (true)
    {
        fn(static_cast<const std::vector<std::int64_t>&>(r));
        std::size_t k = 0;
        for (; k < d; ++k)
        {
            if (++x[k] < b.diag[k])
            {
                for (std::size_t j = 0; j < d; ++j)
                {
                    r[j] += b.step[k][j];
                    if (r[j] >= b.m)
                        r[j] -= b.m;
                }
                break;
            }
            x[k] = 0;
            // undo diag[k]-1 steps: add step once and subtract diag*step
            for (std::size_t j = 0; j < d; ++j)
            {
                r[j] += b.step[k][j];
                if (r[j] >= b.m)
                    r[j] -= b.m;
                r[j] -= b.wrap[k][j];
                if (r[j] < 0)
                    r[j] += b.m;
            }
        }
        if (k == d)
            return;
    }
}

IntVector point_of(const BoxData& b, const std::vector<std::int64_t>& t)
{
    const std::size_t n = b.rays.front().size();
    IntVector p(n);
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t k = 0; k < n; ++k)
            p[k] += Integer(t[i]) * b.rays[i][k];
    for (auto& x : p)
        x /= b.m;
    return p;
}

using TKey = std::vector<std::int64_t>;

bool better_sum(const TKey& a, const TKey& b)
{
    __int128 sa = 0, sb = 0;
    for (auto v : a)
        sa += v;
    for (auto v : b)
        sb += v;
    if (sa != sb)
        return sa < sb;
    return a < b;
}

bool better_zeros(const TKey& a, const TKey& b)
{
    auto za = std::count(a.begin(), a.end(), 0);
    auto zb = std::count(b.begin(), b.end(), 0);
    if (za != zb)
        return za > zb;
    return a < b;
}

std::optional<TKey> best_candidate(const BoxData& b, CenterRule rule)
{
    std::optional<TKey> best;
    auto better = rule == CenterRule::MinimalSum ? better_sum : better_zeros;
    enumerate_box(b, [&](const TKey& t) {
        if (std::all_of(t.begin(), t.end(), [](std::int64_t v) { return v == 0; }))
            return;
        if (!best || better(t, *best))
            best = t;
    });
    return best;
}

} // namespace

std::vector<ParallelepipedPoint> parallelepiped_points(const Cone& c)
{
    BoxData b = box_data(c);
    std::vector<ParallelepipedPoint> out;
    if (c.dim() == 0)
    {
        out.push_back({IntVector(c.ambient_rank()), {}});
        return out;
    }
    enumerate_box(b, [&](const TKey& t) {
        ParallelepipedPoint pp;
        pp.point = point_of(b, t);
        for (auto v : t)
            pp.t_numerators.emplace_back(v);
        out.push_back(std::move(pp));
    });
    return out;
}

namespace {

// Simplicial fan stored by maximal cones, with the singular cones indexed in
// processing order.
class WorkingFan
{
  public:
    WorkingFan(const Fan& f) : n_(f.rank()), rays_(f.rays())
    {
        for (auto m : f.maximal_cones())
            add_maximal(f.cones()[m]);
        for (std::size_t i = 1; i < f.size(); ++i)
            note_cone(f.cones()[i]);
    }

    bool smooth() const { return singular_.empty(); }
    std::pair<Cone, RayIndexSet> next_singular() const { return *singular_.begin(); }

    Cone make_cone(const RayIndexSet& s) const
    {
        std::vector<IntVector> r;
        for (auto k : s)
            r.push_back(rays_[k]);
        std::sort(r.begin(), r.end());
        return ConeBuilder::make(std::move(r), n_, s.size());
    }

    // Maximal cones after subdividing sigma at p; p is not yet a ray.
    std::vector<RayIndexSet> split(const RayIndexSet& sigma, std::size_t fresh) const
    {
        std::vector<RayIndexSet> out;
        for (const auto& tau : star(sigma))
            for (auto s : sigma)
            {
                RayIndexSet t;
                for (auto k : tau)
                    if (k != s)
                        t.push_back(k);
                t.push_back(fresh);
                out.push_back(std::move(t));
            }
        return out;
    }

    // All cones that a split would create: faces containing the new ray.
    std::vector<Cone> created_cones(const std::vector<RayIndexSet>& pieces, const IntVector& p, std::size_t fresh)
    {
        rays_.push_back(p);
        std::set<RayIndexSet> seen;
        std::vector<Cone> out;
        for (const auto& piece : pieces)
            for_each_subset_with(piece, fresh, [&](const RayIndexSet& s) {
                if (seen.insert(s).second)
                    out.push_back(make_cone(s));
            });
        rays_.pop_back();
        return out;
    }

    void apply(const RayIndexSet& sigma, const IntVector& p)
    {
        std::size_t fresh = rays_.size();
        auto pieces = split(sigma, fresh);
        rays_.push_back(p);
        for (const auto& tau : star(sigma))
            remove_maximal(tau);
        for (auto it = singular_.begin(); it != singular_.end();)
        {
            if (is_subset(sigma, it->second))
                it = singular_.erase(it);
            else
                ++it;
        }
        for (const auto& piece : pieces)
        {
            add_maximal(piece);
            for_each_subset_with(piece, fresh, [&](const RayIndexSet& s) { note_cone(s); });
        }
    }

    Fan to_fan() const { return Fan(n_, rays_, {maximal_.begin(), maximal_.end()}); }
    const std::vector<IntVector>& rays() const { return rays_; }

  private:
    template <typename Fn>
    static void for_each_subset_with(const RayIndexSet& piece, std::size_t must, Fn&& fn)
    {
        RayIndexSet others;
        for (auto k : piece)
            if (k != must)
                others.push_back(k);
        for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask)
        {
            RayIndexSet s{must};
            for (std::size_t i = 0; i < others.size(); ++i)
                if (mask & (std::size_t{1} << i))
                    s.push_back(others[i]);
            std::sort(s.begin(), s.end());
            fn(static_cast<const RayIndexSet&>(s));
        }
    }

    std::vector<RayIndexSet> star(const RayIndexSet& sigma) const
    {
        std::vector<RayIndexSet> out;
        auto it = by_ray_.find(sigma.front());
        if (it == by_ray_.end())
            return out;
        for (const auto& tau : it->second)
            if (is_subset(sigma, tau))
                out.push_back(tau);
        return out;
    }

    void add_maximal(const RayIndexSet& s)
    {
        maximal_.insert(s);
        for (auto k : s)
            by_ray_[k].insert(s);
    }

    void remove_maximal(const RayIndexSet& s)
    {
        maximal_.erase(s);
        for (auto k : s)
            by_ray_[k].erase(s);
    }

    void note_cone(const RayIndexSet& s)
    {
        if (s.size() < 2)
            return;
        std::vector<IntVector> r;
        for (auto k : s)
            r.push_back(rays_[k]);
        if (lattice_index(r) != 1)
            singular_.emplace(make_cone(s), s);
    }

    std::size_t n_;
    std::vector<IntVector> rays_;
    std::set<RayIndexSet> maximal_;
    std::map<std::size_t, std::set<RayIndexSet>> by_ray_;
    std::map<Cone, RayIndexSet> singular_;
};

} // namespace

Resolution resolve(const Fan& f, const ResolveOptions& options)
{
    Subdivision simp = simplicialize(f);
    if (options.admissible)
        for (std::size_t i = 0; i < simp.fan.size(); ++i)
            if (!options.admissible(simp.fan.cone(i)))
                throw NotInDomain("resolve: " + to_string(simp.fan.cone(i)) +
                                  " of the simplicial refinement is not admissible");

    WorkingFan work(simp.fan);
    std::vector<IntVector> history;
    while (!work.smooth())
    {
        auto [sigma, idx] = work.next_singular();
        BoxData b = box_data(sigma);
        // box rays follow the sorted cone rays; idx is sorted by ray index
        const std::size_t fresh = work.rays().size();
        auto pieces = work.split(idx, fresh);
        auto ok = [&](const IntVector& p) {
            if (!options.admissible)
                return true;
            for (const auto& c : work.created_cones(pieces, p, fresh))
                if (!options.admissible(c))
                    return false;
            return true;
        };

        std::optional<IntVector> chosen;
        CenterRule other = options.rule == CenterRule::MinimalSum ? CenterRule::MostZeros : CenterRule::MinimalSum;
        for (CenterRule rule : {options.rule, other})
        {
            auto t = best_candidate(b, rule);
            if (!t)
                throw std::logic_error("resolve: singular cone without interior lattice point");
            IntVector p = primitive_vector(point_of(b, *t));
            if (ok(p))
            {
                chosen = p;
                break;
            }
            if (!options.admissible)
                break;
        }
        if (!chosen)
        {
            std::vector<TKey> all;
            enumerate_box(b, [&](const TKey& t) {
                if (std::any_of(t.begin(), t.end(), [](std::int64_t v) { return v != 0; }))
                    all.push_back(t);
            });
            std::sort(all.begin(), all.end(), better_sum);
            for (const auto& t : all)
            {
                IntVector p = primitive_vector(point_of(b, t));
                if (ok(p))
                {
                    chosen = p;
                    break;
                }
            }
        }
        if (!chosen)
            throw NotInDomain("resolve: no admissible stellar center in " + to_string(sigma));
        work.apply(idx, *chosen);
        history.push_back(*chosen);
    }

    Fan out = work.to_fan();
    auto map = SubdivisionMap::between(out, f);
    return {std::move(out), std::move(map), std::move(history)};
}

bool is_complete(const Fan& f)
{
    const std::size_t n = f.rank();
    auto maxes = f.maximal_cones();
    for (auto m : maxes)
        if (f.dim(m) != n)
            return false;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.dim(i) + 1 == n && f.cofacets(i).size() != 2)
            return false;
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<long long> coord(-1000000, 1000000);
    std::vector<Cone> cones;
    for (auto m : maxes)
        cones.push_back(f.cone(m));
    for (int trial = 0; trial < 100; ++trial)
    {
        RatVector x(n);
        for (auto& v : x)
            v = coord(rng);
        bool inside = std::any_of(cones.begin(), cones.end(), [&](const Cone& c) { return contains(c, x); });
        if (!inside)
            return false;
    }
    return true;
}

} // namespace toddcount
