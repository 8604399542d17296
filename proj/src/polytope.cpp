#include "toddcount/polytope.hpp"

#include "toddcount/errors.hpp"
#include "toddcount/todd.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace toddcount {

namespace {

// Calls fn on every k-subset of {0..n-1}, in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn)
{
    if (k > n)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true)
    {
        fn(idx);
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

IntVector minus(const IntVector& a, const IntVector& b)
{
    IntVector d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = a[i] - b[i];
    return d;
}

std::size_t affine_rank(std::span<const IntVector> pts, std::size_t n)
{
    if (pts.empty())
        return 0;
    std::vector<IntVector> diffs;
    for (std::size_t i = 1; i < pts.size(); ++i)
        diffs.push_back(minus(pts[i], pts[0]));
    return rank(diffs, n);
}

// Facets of conv(pts): hyperplanes through n affinely independent points with
// every point on one side.
std::vector<Facet> hull_facets(const std::vector<IntVector>& pts, std::size_t n)
{
    std::map<IntVector, Facet> found;
    for_each_subset(pts.size(), n, [&](const std::vector<std::size_t>& s) {
        std::vector<IntVector> diffs;
        for (std::size_t i = 1; i < s.size(); ++i)
            diffs.push_back(minus(pts[s[i]], pts[s[0]]));
        RationalMatrix a = rational_rows(diffs, n);
        auto ker = kernel_basis(a);
        if (ker.size() != 1)
            return;
        IntVector u = primitive_integer_multiple(ker[0]);
        Integer b = dot(u, pts[s[0]]);
        bool above = false, below = false;
        for (const auto& p : pts)
        {
            Integer v = dot(u, p);
            above |= v > b;
            below |= v < b;
        }
        if (above && below)
            return;
        if (above)
        {
            for (auto& x : u)
                x = -x;
            b = -b;
        }
        if (found.count(u))
            return;
        Facet f{u, b, {}};
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (dot(u, pts[i]) == b)
                f.vertices.push_back(i);
        found.emplace(u, std::move(f));
    });
    std::vector<Facet> out;
    for (auto& [u, f] : found)
        out.push_back(std::move(f));
    return out;
}

bool is_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

using Simplex = std::vector<std::size_t>;

// Pulling triangulation of face `fi` from its first vertex, built from the
// faces of P. Simplices are vertex index lists of P.
const std::vector<Simplex>& triangulate(std::size_t fi, const std::vector<Face>& faces,
                                        std::map<std::size_t, std::vector<Simplex>>& memo)
{
    if (auto it = memo.find(fi); it != memo.end())
        return it->second;
    const Face& f = faces[fi];
    std::vector<Simplex> out;
    if (f.dim == 0)
    {
        out.push_back({f.vertices[0]});
    }
    else
    {
        std::size_t apex = f.vertices[0];
        for (std::size_t gi = 0; gi < faces.size(); ++gi)
        {
            const Face& g = faces[gi];
            if (g.dim + 1 != f.dim || !is_subset(g.vertices, f.vertices))
                continue;
            if (std::binary_search(g.vertices.begin(), g.vertices.end(), apex))
                continue;
            for (const auto& s : triangulate(gi, faces, memo))
            {
                Simplex t = s;
                t.insert(t.begin(), apex);
                out.push_back(std::move(t));
            }
        }
    }
    return memo.emplace(fi, std::move(out)).first->second;
}

Integer factorial(std::size_t d)
{
    Integer r = 1;
    for (std::size_t i = 2; i <= d; ++i)
        r *= static_cast<unsigned long>(i);
    return r;
}

Rational volume_of_face(const LatticePolytope& p, const std::vector<Face>& faces, std::size_t fi,
                        std::map<std::size_t, std::vector<Simplex>>& memo)
{
    const Face& f = faces[fi];
    if (f.dim == 0)
        return 1;
    const auto& verts = p.vertices();
    Integer total = 0;
    for (const auto& s : triangulate(fi, faces, memo))
    {
        std::vector<IntVector> edges;
        for (std::size_t i = 1; i < s.size(); ++i)
            edges.push_back(minus(verts[s[i]], verts[s[0]]));
        total += lattice_index(edges);
    }
    return Rational(total, factorial(f.dim));
}

template <typename T>
Integer scan_box(const std::vector<std::vector<T>>& normals, const std::vector<T>& offsets, const std::vector<T>& lo,
                 const std::vector<T>& hi)
{
    const std::size_t n = lo.size();
    std::vector<T> x = lo;
    std::vector<T> val(normals.size());
    Integer count = 0;
    while (true)
    {
        bool inside = true;
        for (std::size_t f = 0; f < normals.size() && inside; ++f)
        {
            T s = 0;
            for (std::size_t i = 0; i < n; ++i)
                s += normals[f][i] * x[i];
            inside = s <= offsets[f];
        }
        if (inside)
            ++count;
        std::size_t i = 0;
        while (i < n && x[i] == hi[i])
        {
            x[i] = lo[i];
            ++i;
        }
        if (i == n)
            return count;
        ++x[i];
    }
}

} // namespace

LatticePolytope LatticePolytope::from_points(std::vector<IntVector> points, std::size_t ambient_rank)
{
    for (const auto& p : points)
        if (p.size() != ambient_rank)
            throw std::invalid_argument("polytope: point of wrong length");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.empty() || affine_rank(points, ambient_rank) != ambient_rank)
        throw DegeneratePolytope("polytope is not full-dimensional");

    std::vector<Facet> facets = hull_facets(points, ambient_rank);
    // vertices are the points whose facet normals span everything
    std::vector<IntVector> verts;
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        std::vector<IntVector> normals;
        for (const auto& f : facets)
            if (std::binary_search(f.vertices.begin(), f.vertices.end(), i))
                normals.push_back(f.normal);
        if (toddcount::rank(normals, ambient_rank) == ambient_rank)
            verts.push_back(points[i]);
    }

    LatticePolytope p;
    p.rank_ = ambient_rank;
    p.vertices_ = std::move(verts);
    for (auto& f : facets)
    {
        f.vertices.clear();
        for (std::size_t i = 0; i < p.vertices_.size(); ++i)
            if (dot(f.normal, p.vertices_[i]) == f.offset)
                f.vertices.push_back(i);
    }
    p.facets_ = std::move(facets);
    return p;
}

const std::vector<Facet>& facet_description(const LatticePolytope& p)
{
    return p.facets();
}

std::vector<Face> face_lattice(const LatticePolytope& p)
{
    const std::size_t nv = p.vertices().size();
    std::vector<std::size_t> all(nv);
    for (std::size_t i = 0; i < nv; ++i)
        all[i] = i;

    std::set<std::vector<std::size_t>> seen{all};
    std::vector<std::vector<std::size_t>> queue{all};
    for (std::size_t q = 0; q < queue.size(); ++q)
    {
        for (const auto& f : p.facets())
        {
            std::vector<std::size_t> meet;
            std::set_intersection(queue[q].begin(), queue[q].end(), f.vertices.begin(), f.vertices.end(),
                                  std::back_inserter(meet));
            if (!meet.empty() && seen.insert(meet).second)
                queue.push_back(std::move(meet));
        }
    }

    std::vector<Face> faces;
    for (const auto& vs : seen)
    {
        Face face;
        face.vertices = vs;
        for (std::size_t fi = 0; fi < p.facets().size(); ++fi)
            if (is_subset(vs, p.facets()[fi].vertices))
                face.facets.push_back(fi);
        std::vector<IntVector> pts, diffs;
        for (auto v : vs)
            pts.push_back(p.vertices()[v]);
        for (std::size_t i = 1; i < pts.size(); ++i)
            diffs.push_back(minus(pts[i], pts[0]));
        face.span_basis = lattice_basis_of_span(diffs, p.rank());
        face.dim = face.span_basis.size();
        faces.push_back(std::move(face));
    }
    std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
        return a.dim != b.dim ? a.dim < b.dim : a.vertices < b.vertices;
    });
    return faces;
}

Cone normal_cone(const LatticePolytope& p, const Face& f)
{
    std::vector<IntVector> normals;
    for (auto fi : f.facets)
        normals.push_back(p.facets()[fi].normal);
    if (normals.empty())
        return Cone::zero(p.rank());
    return Cone::from_generators(normals, p.rank());
}

Rational relative_volume(const LatticePolytope& p, const Face& f)
{
    auto faces = face_lattice(p);
    auto it = std::find_if(faces.begin(), faces.end(), [&](const Face& g) { return g.vertices == f.vertices; });
    if (it == faces.end())
        throw std::invalid_argument("relative_volume: not a face of the polytope");
    std::map<std::size_t, std::vector<Simplex>> memo;
    return volume_of_face(p, faces, static_cast<std::size_t>(it - faces.begin()), memo);
}

AffineProjection project_to_affine_lattice(std::span<const IntVector> points)
{
    if (points.empty())
        throw std::invalid_argument("project_to_affine_lattice: no points");
    AffineProjection out;
    out.origin = *std::min_element(points.begin(), points.end());
    const std::size_t n = out.origin.size();
    std::vector<IntVector> diffs;
    for (const auto& p : points)
        diffs.push_back(minus(p, out.origin));
    out.basis = lattice_basis_of_span(diffs, n);
    for (const auto& d : diffs)
    {
        IntVector c;
        if (!out.basis.empty())
        {
            auto q = coordinates_in(out.basis, to_rational(d));
            for (const auto& x : *q)
                c.push_back(numerator(x));
        }
        out.coordinates.push_back(std::move(c));
    }
    return out;
}

Rational relative_volume(std::span<const IntVector> points)
{
    AffineProjection proj = project_to_affine_lattice(points);
    const std::size_t d = proj.basis.size();
    if (d == 0)
        return 1;
    LatticePolytope q = LatticePolytope::from_points(proj.coordinates, d);
    auto faces = face_lattice(q);
    std::map<std::size_t, std::vector<Simplex>> memo;
    return volume_of_face(q, faces, faces.size() - 1, memo);
}

Integer count_via_todd(const LatticePolytope& p, const ComplementMap& psi)
{
    auto mu = shared_assignment(psi);
    auto faces = face_lattice(p);
    std::map<std::size_t, std::vector<Simplex>> memo;
    Rational total = 0;
    for (std::size_t fi = 0; fi < faces.size(); ++fi)
        total += (*mu)(normal_cone(p, faces[fi])) * volume_of_face(p, faces, fi, memo);
    if (denominator(total) != 1)
        throw NonIntegerTotal("lattice point total " + to_string(total) + " is not an integer");
    return numerator(total);
}

Integer count_via_todd(const LatticePolytope& p)
{
    return count_via_todd(p, ComplementMap::standard(p.rank()));
}

Integer count_bruteforce(const LatticePolytope& p)
{
    const std::size_t n = p.rank();
    IntVector lo = p.vertices().front(), hi = lo;
    for (const auto& v : p.vertices())
        for (std::size_t i = 0; i < n; ++i)
        {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }

    // machine integers whenever every product stays far from overflow
    const Integer bound = Integer(1) << 24;
    bool small = true;
    for (std::size_t i = 0; i < n; ++i)
        small &= abs(lo[i]) < bound && abs(hi[i]) < bound;
    for (const auto& f : p.facets())
    {
        small &= abs(f.offset) < bound * bound;
        for (const auto& x : f.normal)
            small &= abs(x) < bound;
    }
    if (small)
    {
        std::vector<std::vector<std::int64_t>> normals;
        std::vector<std::int64_t> offsets, l, h;
        for (const auto& f : p.facets())
        {
            std::vector<std::int64_t> u;
            for (const auto& x : f.normal)
                u.push_back(x.convert_to<std::int64_t>());
            normals.push_back(std::move(u));
            offsets.push_back(f.offset.convert_to<std::int64_t>());
        }
        for (std::size_t i = 0; i < n; ++i)
        {
            l.push_back(lo[i].convert_to<std::int64_t>());
            h.push_back(hi[i].convert_to<std::int64_t>());
        }
        return scan_box(normals, offsets, l, h);
    }
    std::vector<std::vector<Integer>> normals;
    std::vector<Integer> offsets;
    for (const auto& f : p.facets())
    {
        normals.push_back(f.normal);
        offsets.push_back(f.offset);
    }
    return scan_box(normals, offsets, lo, hi);
}

LatticePolytope dilate(const LatticePolytope& p, const Integer& t)
{
    if (t <= 0)
        throw std::invalid_argument("dilate: factor must be positive");
    std::vector<IntVector> pts = p.vertices();
    for (auto& v : pts)
        for (auto& x : v)
            x *= t;
    return LatticePolytope::from_points(std::move(pts), p.rank());
}

std::vector<EhrhartSample> ehrhart_samples(const LatticePolytope& p, unsigned t_max, const ComplementMap& psi)
{
    if (t_max < 1)
        throw std::invalid_argument("ehrhart_samples: t_max must be at least 1");
    std::vector<EhrhartSample> out;
    for (unsigned t = 1; t <= t_max; ++t)
    {
        LatticePolytope q = dilate(p, t);
        out.push_back({t, count_via_todd(q, psi), count_bruteforce(q)});
    }
    return out;
}

} // namespace toddcount
