// Rational polyhedral cones and fans in N = Z^n: face structure,
// multiplicities, stellar subdivision, simplicialization and resolution of
// singularities.

#pragma once

#include "toddcount/exact_linalg.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace toddcount {

/// Strictly convex rational polyhedral cone, stored by its primitive extreme
/// rays in lexicographic order. Equality is structural.
class Cone
{
  public:
    Cone() = default;

    static Cone zero(std::size_t ambient_rank);

    /// Cone generated by `generators`. Zero generators are rejected, the rest
    /// are made primitive, duplicates and non-extreme generators are dropped.
    /// Throws std::invalid_argument if the cone contains a line.
    static Cone from_generators(std::span<const IntVector> generators, std::size_t ambient_rank);

    const std::vector<IntVector>& rays() const { return rays_; }
    std::size_t ambient_rank() const { return ambient_rank_; }
    std::size_t dim() const { return dim_; }
    bool is_simplicial() const { return rays_.size() == dim_; }

    friend bool operator==(const Cone& a, const Cone& b)
    {
        return a.ambient_rank_ == b.ambient_rank_ && a.rays_ == b.rays_;
    }
    friend bool operator<(const Cone& a, const Cone& b)
    {
        if (a.dim_ != b.dim_)
            return a.dim_ < b.dim_;
        return a.rays_ < b.rays_;
    }

  private:
    friend struct ConeBuilder;
    Cone(std::vector<IntVector> rays, std::size_t ambient_rank, std::size_t dim);

    std::vector<IntVector> rays_;
    std::size_t ambient_rank_ = 0;
    std::size_t dim_ = 0;
};

std::string to_string(const Cone& c);

/// Facet data of a cone in coordinates of a lattice basis of its span.
struct ConeGeometry
{
    std::vector<IntVector> span_basis;                // saturated lattice basis, rows
    std::vector<IntVector> ray_coords;                // rays in span_basis coordinates
    std::vector<IntVector> facet_normals;             // inward, primitive, in span coordinates
    std::vector<std::vector<std::size_t>> facet_rays; // indices into Cone::rays()
};

ConeGeometry cone_geometry(const Cone& c);

bool contains(const Cone& c, const RatVector& x);
bool contains(const Cone& c, const IntVector& x);
bool contains(const Cone& outer, const Cone& inner);

/// All faces including {0} and c itself, sorted by (dim, rays).
std::vector<Cone> faces(const Cone& c);

/// Index of the ray lattice in the saturated lattice of the span. Throws
/// std::invalid_argument for non-simplicial cones.
Integer multiplicity(const Cone& c);
bool is_smooth(const Cone& c);

/// Sorted list of ray indices; identifies a cone inside a fan.
using RayIndexSet = std::vector<std::size_t>;

class Fan
{
  public:
    Fan() = default;

    /// Fan with global ray list `rays` and the face closure of `cones`.
    /// Checks index ranges and that each listed ray set spans a strictly
    /// convex cone whose extreme rays are exactly those rays; intersection
    /// compatibility is left to validate_fan.
    Fan(std::size_t rank, std::vector<IntVector> rays, const std::vector<RayIndexSet>& cones);

    /// The fan of a single cone and its faces.
    static Fan of_cone(const Cone& c);

    std::size_t rank() const { return rank_; }
    const std::vector<IntVector>& rays() const { return rays_; }
    std::size_t ray_count() const { return rays_.size(); }

    /// Cones sorted by (dim, index set); index 0 is always {0}.
    const std::vector<RayIndexSet>& cones() const { return cones_; }
    std::size_t size() const { return cones_.size(); }
    std::size_t dim(std::size_t idx) const { return dims_[idx]; }
    Cone cone(std::size_t idx) const;
    std::optional<std::size_t> find(const RayIndexSet& rays) const;
    std::optional<std::size_t> find(const Cone& c) const;
    std::optional<std::size_t> ray_index(const IntVector& ray) const;

    /// Cones containing cone idx as a face, one dimension higher.
    const std::vector<std::size_t>& cofacets(std::size_t idx) const { return cofacets_[idx]; }
    std::vector<std::size_t> maximal_cones() const;
    bool is_simplicial() const;
    bool is_smooth() const;

    friend bool operator==(const Fan& a, const Fan& b)
    {
        return a.rank_ == b.rank_ && a.rays_ == b.rays_ && a.cones_ == b.cones_;
    }

  private:
    std::size_t rank_ = 0;
    std::vector<IntVector> rays_;
    std::vector<RayIndexSet> cones_;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<std::size_t>> cofacets_;
    std::map<RayIndexSet, std::size_t> index_;
};

struct FanReport
{
    bool ok = true;
    std::vector<std::string> violations;
    std::vector<std::pair<std::size_t, std::size_t>> offending_pairs; // cone indices
};

/// Exhaustive check of the fan axioms: rays primitive and distinct, every
/// face present, every pair of cones meeting in a common face.
FanReport validate_fan(const Fan& f);

/// Index of the unique smallest cone of f containing c. Throws
/// std::invalid_argument if no cone of f contains c.
std::size_t minimal_containing_cone_index(const Fan& f, const Cone& c);
Cone minimal_containing_cone(const Fan& f, const Cone& c);

/// Refinement `source` -> `target`; image[i] is the smallest target cone
/// containing source cone i.
struct SubdivisionMap
{
    Fan source;
    Fan target;
    std::vector<std::size_t> image;

    /// Builds the map by search; throws if some source cone is not inside a
    /// target cone.
    static SubdivisionMap between(Fan source, Fan target);
    static SubdivisionMap identity(const Fan& f);
};

/// a: A -> B followed by b: B -> C.
SubdivisionMap compose(const SubdivisionMap& a, const SubdivisionMap& b);

struct Subdivision
{
    Fan fan;
    SubdivisionMap map;
};

/// Stellar subdivision at a primitive vector in the support that is not a
/// ray of f. The new ray is appended to the ray list.
Subdivision stellar_subdivide(const Fan& f, const IntVector& center);

/// Pulls every non-simplicial cone at its rays, in lexicographic ray order,
/// until the fan is simplicial. Keeps the ray list.
Subdivision simplicialize(const Fan& f);

/// How a resolution picks the stellar center inside a singular cone with
/// rays v_i: candidates are the nonzero lattice points sum t_i v_i, 0 <= t_i < 1.
enum class CenterRule
{
    MinimalSum, // minimize sum t_i, then lexicographically smallest t
    MostZeros,  // maximize the number of t_i == 0, then lexicographically smallest t
};

struct ResolveOptions
{
    CenterRule rule = CenterRule::MinimalSum;
    /// When set, every cone created by a stellar move must satisfy it. A
    /// rejected center is replaced by the best center under the other rule,
    /// then by the first admissible candidate in MinimalSum order.
    std::function<bool(const Cone&)> admissible;
};

struct Resolution
{
    Fan fan;
    SubdivisionMap map;              // fan -> input fan
    std::vector<IntVector> history;  // stellar centers applied after simplicialize
};

/// simplicialize followed by stellar moves until every cone is smooth. The
/// singular cone handled next has minimal dimension (ties: lexicographic ray
/// list); each move strictly lowers the multiplicity of the cones it splits.
/// Throws NotInDomain when `admissible` rejects every candidate.
Resolution resolve(const Fan& f, const ResolveOptions& options = {});

/// Lattice points sum t_i v_i with 0 <= t_i < 1 of a simplicial cone, as
/// (point, numerators of t over multiplicity). Includes the origin.
struct ParallelepipedPoint
{
    IntVector point;
    std::vector<Integer> t_numerators;
};
std::vector<ParallelepipedPoint> parallelepiped_points(const Cone& c);

/// Complete fan test: maximal cones full-dimensional, every codimension-1
/// cone on exactly two maximal cones, and 100 fixed pseudo-random directions
/// each inside some cone.
bool is_complete(const Fan& f);

} // namespace toddcount
