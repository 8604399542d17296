#include "toddcount/complement_map.hpp"

#include "toddcount/errors.hpp"

#include <sstream>
#include <stdexcept>

namespace toddcount {

InnerProductMap InnerProductMap::standard(std::size_t n)
{
    return {RationalMatrix::identity(n)};
}

InnerProductMap InnerProductMap::from_gram(RationalMatrix gram)
{
    const std::size_t n = gram.rows();
    if (gram.cols() != n)
        throw std::invalid_argument("gram matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (gram(i, j) != gram(j, i))
                throw std::invalid_argument("gram matrix is not symmetric");
    for (std::size_t k = 1; k <= n; ++k)
    {
        RationalMatrix lead(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                lead(i, j) = gram(i, j);
        if (determinant(lead) <= 0)
            throw std::invalid_argument("gram matrix is not positive definite");
    }
    return {std::move(gram)};
}

FlagMap FlagMap::from_rows(std::vector<IntVector> rows)
{
    const std::size_t n = rows.size();
    for (const auto& r : rows)
        if (r.size() != n)
            throw std::invalid_argument("flag basis must be square");
    if (rank(rows, n) != n)
        throw std::invalid_argument("flag rows are linearly dependent");
    return {std::move(rows)};
}

bool is_generic(const FlagMap& flag, const Cone& sigma)
{
    const std::size_t n = flag.rows.size();
    std::vector<IntVector> all(flag.rows.begin(), flag.rows.begin() + (n - sigma.dim()));
    for (const auto& r : sigma.rays())
        all.push_back(r);
    return rank(all, n) == n;
}

std::size_t ComplementMap::rank() const
{
    if (auto* ip = inner_product())
        return ip->gram.rows();
    return flag()->rows.size();
}

bool ComplementMap::in_domain(const Cone& sigma) const
{
    if (auto* f = flag())
        return is_generic(*f, sigma);
    return true;
}

std::vector<RatVector> ComplementMap::psi(const Cone& sigma) const
{
    const std::size_t n = rank();
    if (auto* f = flag())
    {
        if (!is_generic(*f, sigma))
            throw NotInDomain("flag is not generic for " + to_string(sigma));
        std::vector<RatVector> out;
        for (std::size_t k = 0; k < n - sigma.dim(); ++k)
            out.push_back(to_rational(f->rows[k]));
        return out;
    }
    if (sigma.dim() == 0)
        return RationalMatrix::identity(n).to_rows();
    // y with <v, G y> = 0 for every ray v
    RationalMatrix vg = rational_rows(sigma.rays(), n) * inner_product()->gram;
    return kernel_basis(vg);
}

RatVector ComplementMap::project_pi_tau(const Cone& tau, const RatVector& m) const
{
    const std::size_t n = rank();
    std::vector<RatVector> rows;
    RatVector rhs;
    for (const auto& b : lattice_basis_of_span(tau.rays(), n))
    {
        rows.push_back(to_rational(b));
        rhs.emplace_back(0);
    }
    for (const auto& p : psi(tau))
    {
        rhs.push_back(dot(m, p));
        rows.push_back(p);
    }
    auto x = solve_linear(RationalMatrix::from_rows(rows, n), rhs);
    if (!x)
        throw std::logic_error("project_pi_tau: complement is not complementary");
    return *x;
}

std::string ComplementMap::fingerprint() const
{
    std::ostringstream os;
    if (auto* ip = inner_product())
    {
        os << "gram";
        for (std::size_t i = 0; i < ip->gram.rows(); ++i)
        {
            os << (i ? ";" : ":");
            for (std::size_t j = 0; j < ip->gram.cols(); ++j)
                os << (j ? "," : "") << to_string(ip->gram(i, j));
        }
    }
    else
    {
        os << "flag";
        for (std::size_t i = 0; i < flag()->rows.size(); ++i)
            os << (i ? ";" : ":") << to_string(flag()->rows[i]);
    }
    return os.str();
}

} // namespace toddcount
