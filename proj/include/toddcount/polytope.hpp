// Full-dimensional lattice polytopes in M = Z^n: facets, face lattice,
// outer normal cones, lattice-normalized volumes and lattice point counts.

#pragma once

#include "toddcount/complement_map.hpp"
#include "toddcount/exact_linalg.hpp"
#include "toddcount/fan.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace toddcount {

/// Supporting hyperplane <normal, x> <= offset of a facet.
struct Facet
{
    IntVector normal; // primitive, outer, in N
    Integer offset;
    std::vector<std::size_t> vertices;
};

class LatticePolytope
{
  public:
    LatticePolytope() = default;

    /// Convex hull of `points`. Duplicates and non-extreme points are dropped,
    /// vertices are sorted lexicographically. Throws DegeneratePolytope if the
    /// hull is not full-dimensional, std::invalid_argument on ragged input.
    static LatticePolytope from_points(std::vector<IntVector> points, std::size_t ambient_rank);

    std::size_t rank() const { return rank_; }
    const std::vector<IntVector>& vertices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }

    friend bool operator==(const LatticePolytope& a, const LatticePolytope& b)
    {
        return a.rank_ == b.rank_ && a.vertices_ == b.vertices_;
    }

  private:
    std::size_t rank_ = 0;
    std::vector<IntVector> vertices_;
    std::vector<Facet> facets_;
};

const std::vector<Facet>& facet_description(const LatticePolytope& p);

struct Face
{
    std::vector<std::size_t> vertices; // indices into P.vertices()
    std::vector<std::size_t> facets;   // indices of the facets containing it
    std::size_t dim = 0;
    std::vector<IntVector> span_basis; // saturated basis of the direction space
};

/// Every nonempty face, P included, sorted by (dim, vertex indices).
std::vector<Face> face_lattice(const LatticePolytope& p);

/// Cone of the outer normals of the facets containing f; {0} for f = P.
Cone normal_cone(const LatticePolytope& p, const Face& f);

/// Volume of the face in its affine lattice; 1 for vertices.
Rational relative_volume(const LatticePolytope& p, const Face& f);

/// Same for the convex hull of arbitrary lattice points.
Rational relative_volume(std::span<const IntVector> points);

/// Coordinates of lattice points in the saturated lattice of their affine span.
struct AffineProjection
{
    IntVector origin;
    std::vector<IntVector> basis;
    std::vector<IntVector> coordinates;
};
AffineProjection project_to_affine_lattice(std::span<const IntVector> points);

/// sum over faces of mu(C(F,P)) vol(F). Throws NonIntegerTotal if the sum is
/// not an integer.
Integer count_via_todd(const LatticePolytope& p, const ComplementMap& psi);
Integer count_via_todd(const LatticePolytope& p);

/// Lattice points of the bounding box passing every facet inequality.
Integer count_bruteforce(const LatticePolytope& p);

LatticePolytope dilate(const LatticePolytope& p, const Integer& t);

struct EhrhartSample
{
    unsigned t = 0;
    Integer via_todd;
    Integer bruteforce;
};

/// Both counts for tP, t = 1..t_max.
std::vector<EhrhartSample> ehrhart_samples(const LatticePolytope& p, unsigned t_max, const ComplementMap& psi);

} // namespace toddcount
