// Complement maps: a rational subspace Psi(sigma) complementary to the span
// of each cone, built either from an inner product or from a complete flag.

#pragma once

#include "toddcount/exact_linalg.hpp"
#include "toddcount/fan.hpp"

#include <string>
#include <variant>
#include <vector>

namespace toddcount {

/// Psi(sigma) is the orthogonal complement of span(sigma) under `gram`.
struct InnerProductMap
{
    RationalMatrix gram;

    static InnerProductMap standard(std::size_t n);
    /// Throws std::invalid_argument unless symmetric positive definite.
    static InnerProductMap from_gram(RationalMatrix gram);
};

/// Psi(sigma) = F_{n - dim sigma}, where F_k is spanned by the first k rows.
struct FlagMap
{
    std::vector<IntVector> rows;

    /// Throws std::invalid_argument unless the rows form a basis.
    static FlagMap from_rows(std::vector<IntVector> rows);
};

/// F_{n - dim sigma} meets span(sigma) only in 0.
bool is_generic(const FlagMap& flag, const Cone& sigma);

class ComplementMap
{
  public:
    ComplementMap() = default;
    ComplementMap(InnerProductMap m) : map_(std::move(m)) {}
    ComplementMap(FlagMap m) : map_(std::move(m)) {}

    static ComplementMap standard(std::size_t n) { return InnerProductMap::standard(n); }

    std::size_t rank() const;
    const InnerProductMap* inner_product() const { return std::get_if<InnerProductMap>(&map_); }
    const FlagMap* flag() const { return std::get_if<FlagMap>(&map_); }

    bool in_domain(const Cone& sigma) const;

    /// Basis of Psi(sigma). Throws NotInDomain for a non-generic flag.
    std::vector<RatVector> psi(const Cone& sigma) const;

    /// The m' in tau-perp with m - m' in Psi(tau)-perp.
    RatVector project_pi_tau(const Cone& tau, const RatVector& m) const;

    /// Stable text identifying the map; equal maps give equal strings.
    std::string fingerprint() const;

  private:
    std::variant<InnerProductMap, FlagMap> map_;
};

} // namespace toddcount
