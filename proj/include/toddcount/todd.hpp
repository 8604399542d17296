// Todd classes of toric varieties as torus-invariant cycles, and the Todd
// measure mu(sigma) of a cone.

#pragma once

#include "toddcount/complement_map.hpp"
#include "toddcount/cycle_ring.hpp"
#include "toddcount/fan.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace toddcount {

/// Coefficients of x / (1 - exp(-x)) through degree n.
std::vector<Rational> todd_series_coefficients(std::size_t n);

/// Products of the prime divisors of one simplicial cone, tracked only on
/// the faces of that cone. Enough to read off any coefficient of [V(sigma)].
class LocalRing
{
  public:
    LocalRing(const Cone& sigma, const ComplementMap& psi);

    std::size_t dim() const { return k_; }

    /// Coefficient of [V(sigma)] in prod D_i^{a_i}, rays in Cone::rays() order.
    Rational monomial_coefficient(const std::vector<unsigned>& exponents) const;

    /// Coefficient of [V(sigma)] in prod_i td(D_i) over the rays of sigma.
    Rational todd_coefficient() const;

  private:
    using State = std::vector<Rational>; // indexed by face bitmask
    State multiply(std::size_t ray, const State& x) const;
    const Rational& coef(std::size_t mask, std::size_t j, std::size_t i) const
    {
        return coef_[(mask * k_ + j) * k_ + i];
    }

    std::size_t k_ = 0;
    std::vector<Rational> coef_;
};

/// t_Psi(X) for a smooth fan. Throws NotSmooth or NotInDomain.
TorusCycle smooth_todd_cycle(const Fan& f, const ComplementMap& psi);

/// Pushforward of smooth_todd_cycle from a resolution of f.
TorusCycle todd_cycle(const Fan& f, const ComplementMap& psi, CenterRule rule = CenterRule::MinimalSum);

enum class MeasureMethod
{
    Auto,          // Decomposition for inner products, Resolution for flags
    Resolution,    // coefficient of [V(sigma)] in todd_cycle of sigma's faces
    Decomposition, // signed unimodular decomposition, inner products only
};

/// mu(sigma) through a resolution of the fan of sigma.
Rational todd_measure_by_resolution(const Cone& sigma, const ComplementMap& psi,
                                    CenterRule rule = CenterRule::MinimalSum);

/// mu(sigma) as a signed sum of mu over unimodular cones whose indicator
/// functions add up to that of sigma modulo lower-dimensional cones.
Rational todd_measure_by_decomposition(const Cone& sigma, const ComplementMap& psi);

/// Memoized mu for one complement map. Safe to share between threads.
class ToddAssignment
{
  public:
    explicit ToddAssignment(ComplementMap psi, MeasureMethod method = MeasureMethod::Auto);

    Rational operator()(const Cone& sigma) const;
    const ComplementMap& map() const { return psi_; }
    std::size_t cached() const;

  private:
    ComplementMap psi_;
    MeasureMethod method_;
    mutable std::mutex mutex_;
    mutable std::map<Cone, Rational> memo_;
};

/// Session-wide assignment for psi, shared by every caller with the same map.
std::shared_ptr<ToddAssignment> shared_assignment(const ComplementMap& psi);

/// mu(sigma) through shared_assignment(psi).
Rational todd_measure(const Cone& sigma, const ComplementMap& psi);

/// (1/mult sigma) prod t_i^{a_i - 1} where sum t_i v_i spans the meet of
/// F_{n-k+1} with span(sigma). Throws NonGenericFlag if some t_i vanishes or
/// the meet is not a line.
Rational flag_monomial_coefficient(const Cone& sigma, const std::vector<unsigned>& exponents, const FlagMap& flag);

struct MeasureReport
{
    bool ok = true;
    std::vector<std::pair<std::string, Rational>> values;
    std::string detail;
};

/// mu(sigma) from both center rules and from a further refined resolution.
MeasureReport verify_resolution_independence(const Cone& sigma, const ComplementMap& psi);

/// mu(tau) against the sum of mu over pieces subdividing tau.
MeasureReport verify_additivity(const Cone& tau, const std::vector<Cone>& pieces, const ComplementMap& psi);

} // namespace toddcount
