// Randomized and fixture-driven checks of the identities the library relies
// on, shared by `toddcount verify` and the test binaries.

#pragma once

#include "toddcount/complement_map.hpp"
#include "toddcount/fan.hpp"
#include "toddcount/polytope.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace toddcount {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t default_seed = 0x746f6464;

// --- random objects -------------------------------------------------------

/// Simplicial cone of dimension k in Z^n with coordinates in [-bound, bound].
Cone random_simplicial_cone(Rng& rng, std::size_t k, std::size_t n, int bound = 4);
/// Same, but never smooth.
Cone random_singular_cone(Rng& rng, std::size_t k, std::size_t n, int bound = 4);
/// Primitive point sum c_i v_i with c_i in [1, 3], in the relative interior.
IntVector random_interior_point(Rng& rng, const Cone& c);
/// Symmetric positive definite Gram matrix A A^T + I with small integer A.
InnerProductMap random_gram(Rng& rng, std::size_t n);
/// Integer flag generic for every cone of f (and for f's cones only).
FlagMap random_generic_flag(Rng& rng, const Fan& f);
/// Full-dimensional hull of n+1..n+4 random points with coordinates in [lo, hi].
LatticePolytope random_polytope(Rng& rng, std::size_t n, int lo = -5, int hi = 5);
/// The first `count` polytopes of the fixed corpus for dimension n.
std::vector<LatticePolytope> polytope_corpus(std::uint64_t seed, std::size_t n, std::size_t count);
/// Complete simplicial fan: the fan of P^n after a few random stellar moves.
Fan random_complete_fan(Rng& rng, std::size_t n, std::size_t moves);
/// Simplicial fan: one random cone and its faces after random stellar moves.
Fan random_simplicial_fan(Rng& rng, std::size_t n, std::size_t moves);

/// Fan of P^n: rays e_1..e_n and -(e_1+...+e_n).
Fan projective_space_fan(std::size_t n);
/// The A_n Cartan matrix, tridiagonal 2 / -1.
InnerProductMap cartan_gram(std::size_t n);
/// Complete 2-dimensional fans used as fixtures: P^2, Hirzebruch F_a,
/// weighted P(1,1,2) and others.
std::vector<std::pair<std::string, Fan>> complete_fixture_fans();

// --- suites ---------------------------------------------------------------

struct CaseRecord
{
    std::size_t index = 0;
    bool ok = true;
    std::string detail;
};

struct SuiteResult
{
    std::string name;
    std::vector<CaseRecord> cases;

    bool ok() const;
    std::size_t passed() const;
    /// First failing case, if any.
    const CaseRecord* first_failure() const;
};

struct SuiteOptions
{
    std::uint64_t seed = default_seed;
    std::size_t cases = 0;          // 0 keeps each suite's own default
    std::vector<std::size_t> dims;  // counting: polytope dimensions
    std::size_t rank = 0;           // flag-formula: ambient rank, 0 means 4
    unsigned tmax = 4;              // ehrhart: largest dilation
};

/// mu of P^n fans under the Cartan Gram matrix: 1/(n+1), 1/2 and 1.
SuiteResult suite_projective(const SuiteOptions& opt);
/// Quadratic and linear relations plus Stanley-Reisner vanishing.
SuiteResult suite_presentation(const SuiteOptions& opt);
/// f_*(f^*(D) y) = D f_*(y) on random stellar subdivisions.
SuiteResult suite_projection(const SuiteOptions& opt);
/// Pushforward of divisor products and the pullback identities on stellar moves.
SuiteResult suite_stellar(const SuiteOptions& opt);
SuiteResult suite_resolution(const SuiteOptions& opt);
SuiteResult suite_additivity(const SuiteOptions& opt);
/// Flag closed form against the ring walk for every exponent vector.
SuiteResult suite_flag_formula(const SuiteOptions& opt);
/// Sum of mu over maximal cones of complete fans and over vertex cones.
SuiteResult suite_normalization(const SuiteOptions& opt);
SuiteResult suite_counting(const SuiteOptions& opt);
SuiteResult suite_ehrhart(const SuiteOptions& opt);

std::vector<std::string> suite_names();
/// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt);

} // namespace toddcount
