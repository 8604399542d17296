// Torus-invariant cycles with rational coefficients and the product
// D . [V(tau)] defined through a complement map.

#pragma once

#include "toddcount/complement_map.hpp"
#include "toddcount/exact_linalg.hpp"
#include "toddcount/fan.hpp"

#include <map>
#include <string>
#include <vector>

namespace toddcount {

/// Finite sum of orbit closures [V(sigma)], keyed by the cone's ray index
/// set in some fan. The fan is passed to every operation explicitly.
class TorusCycle
{
  public:
    TorusCycle() = default;
    static TorusCycle point_class() { return unit({}); }
    static TorusCycle unit(const RayIndexSet& cone);

    void add(const RayIndexSet& cone, const Rational& q);
    Rational coefficient(const RayIndexSet& cone) const;
    const std::map<RayIndexSet, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend bool operator==(const TorusCycle& a, const TorusCycle& b) { return a.terms_ == b.terms_; }
    TorusCycle& operator+=(const TorusCycle& o);
    TorusCycle& operator-=(const TorusCycle& o);
    TorusCycle& operator*=(const Rational& q);

  private:
    std::map<RayIndexSet, Rational> terms_;
};

TorusCycle operator+(TorusCycle a, const TorusCycle& b);
TorusCycle operator-(TorusCycle a, const TorusCycle& b);
TorusCycle operator*(const Rational& q, TorusCycle a);

std::string to_string(const Fan& f, const TorusCycle& z);

/// D = sum a_i D_i, one coefficient per ray of the fan.
struct WeilDivisor
{
    std::vector<Rational> a;

    static WeilDivisor zero(std::size_t rays) { return {std::vector<Rational>(rays)}; }
    static WeilDivisor prime(std::size_t rays, std::size_t i);
    friend bool operator==(const WeilDivisor&, const WeilDivisor&) = default;
};

WeilDivisor operator+(const WeilDivisor& a, const WeilDivisor& b);
WeilDivisor operator*(const Rational& q, const WeilDivisor& d);

/// m with <m, v_i> = a_i for the rays of the simplicial cone `sigma`. For a
/// lower-dimensional cone the free coordinates are zero.
RatVector local_equation(const Fan& f, const WeilDivisor& d, const RayIndexSet& sigma);

/// Coefficient of [V(sigma)] in D.[V(tau)] for a cofacet sigma of tau, given
/// a local equation m of D on sigma. Independent of which m is supplied.
Rational cofacet_coefficient(const Fan& f, const ComplementMap& psi, std::size_t tau, std::size_t sigma,
                             const RatVector& m);

/// D.z extended linearly from D.[V(tau)] = sum over cofacets. The fan must be
/// simplicial; NotInDomain when psi is undefined on a cone of z.
TorusCycle divisor_times_cycle(const Fan& f, const ComplementMap& psi, const WeilDivisor& d, const TorusCycle& z);

/// D_{order[k-1]} ... D_{order[0]} . [V({0})], multiplying in the listed order.
TorusCycle evaluate_product(const Fan& f, const ComplementMap& psi, const std::vector<std::size_t>& order);

/// prod D_i^{a_i} . [V({0})], factors applied by increasing ray index.
TorusCycle evaluate_monomial(const Fan& f, const ComplementMap& psi, const std::vector<unsigned>& exponents);

/// div(chi^u) = sum <u, v_i> D_i.
WeilDivisor principal_divisor(const Fan& f, const RatVector& u);

/// Divisor on s.source whose local equation on each cone is the local
/// equation of d on the containing target cone.
WeilDivisor pullback_divisor(const SubdivisionMap& s, const WeilDivisor& d);

/// [V(sigma')] goes to [V(sigma)] for the smallest containing target cone
/// when the dimensions agree and to zero otherwise.
TorusCycle pushforward_cycle(const SubdivisionMap& s, const TorusCycle& z);

struct RelationReport
{
    bool ok = true;
    std::size_t checked = 0;
    std::vector<std::string> failures;
};

/// Evaluates every quadratic (inner product) or linear (flag) relation of
/// the ring presentation on every cone, plus the squarefree monomials of
/// minimal non-faces, and checks that each gives the zero cycle.
RelationReport verify_presentation_relations(const Fan& f, const ComplementMap& psi);

} // namespace toddcount
