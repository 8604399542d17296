#include "toddcount/todd.hpp"

#include "toddcount/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace toddcount {

std::vector<Rational> todd_series_coefficients(std::size_t n)
{
    // (1 - e^{-x}) td(x) = x, where (1 - e^{-x}) = sum_{m>=1} (-1)^{m+1} x^m / m!
    std::vector<Rational> fact(n + 2, Rational(1));
    for (std::size_t i = 1; i < fact.size(); ++i)
        fact[i] = fact[i - 1] * Rational(i);
    std::vector<Rational> c(n + 1);
    c[0] = 1;
    for (std::size_t j = 1; j <= n; ++j)
    {
        Rational s = 0;
        for (std::size_t i = 0; i < j; ++i)
        {
            std::size_t m = j - i + 1;
            Rational term = c[i] / fact[m];
            s += (m % 2 == 0) ? Rational(-term) : term;
        }
        c[j] = -s;
    }
    return c;
}

namespace {

std::vector<IntVector> subset_rays(const std::vector<IntVector>& rays, std::size_t mask)
{
    std::vector<IntVector> out;
    for (std::size_t i = 0; i < rays.size(); ++i)
        if (mask & (std::size_t{1} << i))
            out.push_back(rays[i]);
    return out;
}

RationalMatrix inverse(const RationalMatrix& a)
{
    const std::size_t d = a.rows();
    RationalMatrix aug(d, 2 * d);
    for (std::size_t i = 0; i < d; ++i)
    {
        for (std::size_t j = 0; j < d; ++j)
            aug(i, j) = a(i, j);
        aug(i, d + i) = 1;
    }
    RowEchelon e = row_reduce(aug);
    RationalMatrix inv(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            inv(i, j) = e.reduced(i, d + j);
    return inv;
}

// <v_a, v_b> under the Gram matrix, scaled to integers; the coefficients
// of the ring only see ratios of these.
IntegerMatrix scaled_ray_gram(const std::vector<IntVector>& rays, const RationalMatrix& gram)
{
    const std::size_t n = gram.rows(), k = rays.size();
    Integer scale = 1;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            scale = boost::multiprecision::lcm(scale, Integer(denominator(gram(a, b))));
    IntegerMatrix g(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            g(a, b) = numerator(Rational(gram(a, b) * scale));
    IntegerMatrix h(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b)
        {
            Integer sum = 0;
            for (std::size_t x = 0; x < n; ++x)
            {
                if (rays[a][x] == 0)
                    continue;
                for (std::size_t y = 0; y < n; ++y)
                    if (rays[b][y] != 0 && g(x, y) != 0)
                        sum += g(x, y) * rays[a][x] * rays[b][y];
            }
            h(a, b) = sum;
            h(b, a) = std::move(sum);
        }
    return h;
}

} // namespace

LocalRing::LocalRing(const Cone& sigma, const ComplementMap& psi) : k_(sigma.dim())
{
    if (!sigma.is_simplicial())
        throw std::invalid_argument("LocalRing: cone is not simplicial");
    const auto& rays = sigma.rays();
    const std::size_t n = sigma.ambient_rank();
    const std::size_t faces = std::size_t{1} << k_;
    std::vector<Integer> mult(faces, Integer(1));
    // faces of a smooth cone are smooth
    if (lattice_index(rays) != 1)
        for (std::size_t mask = 1; mask < faces; ++mask)
            mult[mask] = lattice_index(subset_rays(rays, mask));
    coef_.assign(faces * k_ * k_, Rational(0));

    if (auto* ip = psi.inner_product())
    {
        IntegerMatrix h = scaled_ray_gram(rays, ip->gram);
        for (std::size_t mask = 0; mask + 1 < faces; ++mask)
        {
            std::vector<std::size_t> in;
            for (std::size_t i = 0; i < k_; ++i)
                if (mask & (std::size_t{1} << i))
                    in.push_back(i);
            const std::size_t s = in.size();
            // adjugate and determinant of h restricted to the face
            IntegerMatrix adj(s, s);
            Integer det = 1;
            if (s > 0)
            {
                IntegerMatrix hs(s, s);
                for (std::size_t a = 0; a < s; ++a)
                    for (std::size_t b = 0; b < s; ++b)
                        hs(a, b) = h(in[a], in[b]);
                det = determinant(hs);
                for (std::size_t a = 0; a < s; ++a)
                    for (std::size_t b = 0; b < s; ++b)
                    {
                        IntegerMatrix minor(s - 1, s - 1);
                        for (std::size_t r = 0, rr = 0; r < s; ++r)
                        {
                            if (r == b)
                                continue;
                            for (std::size_t c = 0, cc = 0; c < s; ++c)
                                if (c != a)
                                    minor(rr, cc++) = hs(r, c);
                            ++rr;
                        }
                        adj(a, b) = s == 1 ? Integer(1) : determinant(minor);
                        if ((a + b) % 2)
                            adj(a, b) = -adj(a, b);
                    }
            }
            for (std::size_t j = 0; j < k_; ++j)
            {
                if (mask & (std::size_t{1} << j))
                    continue;
                Rational ratio = Rational(mult[mask | (std::size_t{1} << j)]) / Rational(mult[mask]);
                coef_[(mask * k_ + j) * k_ + j] = 1 / ratio;
                for (std::size_t b = 0; b < s; ++b)
                {
                    Integer w = 0;
                    for (std::size_t a = 0; a < s; ++a)
                        w += h(j, in[a]) * adj(a, b);
                    coef_[(mask * k_ + j) * k_ + in[b]] = Rational(-w, det) / ratio;
                }
            }
        }
        return;
    }

    for (std::size_t mask = 0; mask + 1 < faces; ++mask)
    {
        Cone face = mask ? Cone::from_generators(subset_rays(rays, mask), n) : Cone::zero(n);
        for (std::size_t j = 0; j < k_; ++j)
        {
            if (mask & (std::size_t{1} << j))
                continue;
            std::size_t up = mask | (std::size_t{1} << j);
            Rational ratio = Rational(mult[up]) / Rational(mult[mask]);
            std::vector<IntVector> rows = subset_rays(rays, up);
            for (std::size_t i = 0; i < k_; ++i)
            {
                if (!(up & (std::size_t{1} << i)))
                    continue;
                RatVector rhs;
                for (std::size_t l = 0; l < k_; ++l)
                    if (up & (std::size_t{1} << l))
                        rhs.emplace_back(l == i ? 1 : 0);
                RatVector m = *solve_linear(rational_rows(rows, n), rhs);
                RatVector p = psi.project_pi_tau(face, m);
                coef_[(mask * k_ + j) * k_ + i] = dot(p, rays[j]) / ratio;
            }
        }
    }
}

LocalRing::State LocalRing::multiply(std::size_t ray, const State& x) const
{
    State y(x.size());
    const std::size_t bit = std::size_t{1} << ray;
    for (std::size_t mask = 0; mask < x.size(); ++mask)
    {
        if (x[mask] == 0)
            continue;
        for (std::size_t j = 0; j < k_; ++j)
        {
            std::size_t jb = std::size_t{1} << j;
            if ((mask & jb) || !((mask & bit) || j == ray))
                continue;
            const Rational& c = coef(mask, j, ray);
            if (c != 0)
                y[mask | jb] += x[mask] * c;
        }
    }
    return y;
}

Rational LocalRing::monomial_coefficient(const std::vector<unsigned>& exponents) const
{
    if (exponents.size() != k_)
        throw std::invalid_argument("monomial_coefficient: one exponent per ray expected");
    State s(std::size_t{1} << k_);
    s[0] = 1;
    for (std::size_t l = 0; l < k_; ++l)
        for (unsigned e = 0; e < exponents[l]; ++e)
            s = multiply(l, s);
    return s.back();
}

Rational LocalRing::todd_coefficient() const
{
    auto c = todd_series_coefficients(k_);
    State s(std::size_t{1} << k_);
    s[0] = 1;
    for (std::size_t l = 0; l < k_; ++l)
    {
        State acc = s, cur = s;
        for (std::size_t e = 1; e <= k_; ++e)
        {
            cur = multiply(l, cur);
            if (c[e] != 0)
                for (std::size_t i = 0; i < acc.size(); ++i)
                    acc[i] += c[e] * cur[i];
        }
        s = std::move(acc);
    }
    return s.back();
}

TorusCycle smooth_todd_cycle(const Fan& f, const ComplementMap& psi)
{
    if (!f.is_smooth())
        throw NotSmooth("smooth_todd_cycle: fan is not smooth");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!psi.in_domain(f.cone(i)))
            throw NotInDomain("smooth_todd_cycle: complement map undefined on " + to_string(f.cone(i)));
    TorusCycle z;
    for (std::size_t i = 0; i < f.size(); ++i)
        z.add(f.cones()[i], LocalRing(f.cone(i), psi).todd_coefficient());
    return z;
}

namespace {

ResolveOptions options_for(const ComplementMap& psi, CenterRule rule)
{
    ResolveOptions opt;
    opt.rule = rule;
    if (psi.flag())
        opt.admissible = [psi](const Cone& c) { return psi.in_domain(c); };
    return opt;
}

} // namespace

TorusCycle todd_cycle(const Fan& f, const ComplementMap& psi, CenterRule rule)
{
    Resolution r = resolve(f, options_for(psi, rule));
    return pushforward_cycle(r.map, smooth_todd_cycle(r.fan, psi));
}

namespace {

// Sum of the local Todd coefficients of the pieces of `res` that have the
// dimension of cone `top` of `base` and sit inside it.
Rational pieces_sum(const Fan& refined, const SubdivisionMap& map, std::size_t top, const ComplementMap& psi)
{
    Rational mu = 0;
    const std::size_t d = map.target.dim(top);
    for (std::size_t i = 0; i < refined.size(); ++i)
        if (refined.dim(i) == d && map.image[i] == top)
            mu += LocalRing(refined.cone(i), psi).todd_coefficient();
    return mu;
}

} // namespace

Rational todd_measure_by_resolution(const Cone& sigma, const ComplementMap& psi, CenterRule rule)
{
    if (sigma.dim() == 0)
        return 1;
    Fan f = Fan::of_cone(sigma);
    std::size_t top = *f.find(sigma);
    Resolution r = resolve(f, options_for(psi, rule));
    return pieces_sum(r.fan, r.map, top, psi);
}

namespace {

Integer round_div(const Integer& a, const Integer& d)
{
    // nearest integer to a/d for d > 0, halves rounded up
    Integer num = 2 * a + d;
    Integer den = 2 * d;
    Integer q = num / den;
    if ((num % den != 0) && (num < 0))
        q -= 1;
    return q;
}

// LLL on integer rows with floating point Gram-Schmidt; returns the
// unimodular transform. Only used to find short candidates, so precision
// loss costs quality, never correctness.
IntegerMatrix lll_transform(std::vector<IntVector> b)
{
    const std::size_t d = b.size();
    const std::size_t cols = d ? b[0].size() : 0;
    IntegerMatrix t = IntegerMatrix::identity(d);
    std::vector<std::vector<double>> bd(d, std::vector<double>(cols));
    auto refresh = [&](std::size_t i) {
        for (std::size_t c = 0; c < cols; ++c)
            bd[i][c] = b[i][c].convert_to<double>();
    };
    for (std::size_t i = 0; i < d; ++i)
        refresh(i);
    std::vector<std::vector<double>> mu(d, std::vector<double>(d)), star(d);
    std::vector<double> norm(d);
    auto gram_schmidt = [&]() {
        for (std::size_t i = 0; i < d; ++i)
        {
            star[i] = bd[i];
            for (std::size_t j = 0; j < i; ++j)
            {
                double s = 0;
                for (std::size_t c = 0; c < cols; ++c)
                    s += star[j][c] * bd[i][c];
                mu[i][j] = norm[j] == 0 ? 0 : s / norm[j];
                for (std::size_t c = 0; c < cols; ++c)
                    star[i][c] -= mu[i][j] * star[j][c];
            }
            norm[i] = 0;
            for (std::size_t c = 0; c < cols; ++c)
                norm[i] += star[i][c] * star[i][c];
        }
    };
    std::size_t k = 1;
    std::size_t guard = 0;
    while (k < d && guard++ < 10000)
    {
        gram_schmidt();
        for (std::size_t jj = k; jj-- > 0;)
        {
            double r = std::round(mu[k][jj]);
            if (r == 0 || !std::isfinite(r))
                continue;
            Integer q(static_cast<long long>(r));
            for (std::size_t c = 0; c < cols; ++c)
                b[k][c] -= q * b[jj][c];
            for (std::size_t c = 0; c < d; ++c)
                t(k, c) -= q * t(jj, c);
            refresh(k);
            for (std::size_t l = 0; l < jj; ++l)
                mu[k][l] -= r * mu[jj][l];
            mu[k][jj] -= r;
        }
        gram_schmidt();
        if (norm[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * norm[k - 1])
            ++k;
        else
        {
            std::swap(b[k], b[k - 1]);
            std::swap(bd[k], bd[k - 1]);
            for (std::size_t c = 0; c < d; ++c)
                std::swap(t(k, c), t(k - 1, c));
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    return t;
}

// Coordinates of the rays of a simplicial cone in a saturated basis of its
// span.
void simplicial_coords(const Cone& sigma, std::vector<IntVector>& basis, std::vector<IntVector>& coords)
{
    const std::size_t k = sigma.dim(), n = sigma.ambient_rank();
    if (k == n)
    {
        basis = IntegerMatrix::identity(n).to_rows();
        coords = sigma.rays();
        return;
    }
    basis = lattice_basis_of_span(sigma.rays(), n);
    coords.clear();
    for (const auto& r : sigma.rays())
    {
        IntVector c;
        RatVector q = *coordinates_in(basis, to_rational(r));
        for (const auto& x : q)
            c.push_back(numerator(x));
        coords.push_back(std::move(c));
    }
}

// Todd coefficient of a smooth cone under an inner product, with integer
// arithmetic: a state entry on a face with p rays carries the implicit
// denominator (l t)^p, where l clears every face Gram determinant and t the
// Todd series.
Rational unimodular_todd(const std::vector<IntVector>& rays, const RationalMatrix& gram)
{
    const std::size_t k = rays.size();
    const std::size_t faces = std::size_t{1} << k;
    IntegerMatrix h = scaled_ray_gram(rays, gram);

    // w[(mask * k + j) * k + i] = (h_{j,S} adj(h_SS))_i and det_S
    std::vector<Integer> det(faces, Integer(1));
    std::vector<Integer> w(faces * k * k);
    for (std::size_t mask = 1; mask + 1 < faces; ++mask)
    {
        std::vector<std::size_t> in;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::size_t{1} << i))
                in.push_back(i);
        const std::size_t s = in.size();
        IntegerMatrix hs(s, s);
        for (std::size_t a = 0; a < s; ++a)
            for (std::size_t b = 0; b < s; ++b)
                hs(a, b) = h(in[a], in[b]);
        det[mask] = determinant(hs);
        IntegerMatrix adj(s, s);
        for (std::size_t a = 0; a < s; ++a)
            for (std::size_t b = 0; b < s; ++b)
            {
                if (s == 1)
                {
                    adj(a, b) = 1;
                    continue;
                }
                IntegerMatrix minor(s - 1, s - 1);
                for (std::size_t r = 0, rr = 0; r < s; ++r)
                {
                    if (r == b)
                        continue;
                    for (std::size_t c = 0, cc = 0; c < s; ++c)
                        if (c != a)
                            minor(rr, cc++) = hs(r, c);
                    ++rr;
                }
                adj(a, b) = determinant(minor);
                if ((a + b) % 2)
                    adj(a, b) = -adj(a, b);
            }
        for (std::size_t j = 0; j < k; ++j)
        {
            if (mask & (std::size_t{1} << j))
                continue;
            for (std::size_t b = 0; b < s; ++b)
            {
                Integer v = 0;
                for (std::size_t a = 0; a < s; ++a)
                    v += h(j, in[a]) * adj(a, b);
                w[(mask * k + j) * k + in[b]] = std::move(v);
            }
        }
    }
    Integer l = 1;
    for (const auto& d : det)
        l = boost::multiprecision::lcm(l, d);
    std::vector<Integer> scale(faces);
    for (std::size_t mask = 0; mask < faces; ++mask)
        scale[mask] = l / det[mask];

    auto series = todd_series_coefficients(k);
    Integer tden = 1;
    for (const auto& c : series)
        tden = boost::multiprecision::lcm(tden, Integer(denominator(c)));
    std::vector<Integer> tnum;
    for (const auto& c : series)
        tnum.push_back(numerator(Rational(c * tden)));

    auto multiply = [&](std::size_t ray, const std::vector<Integer>& x) {
        std::vector<Integer> y(faces);
        const std::size_t bit = std::size_t{1} << ray;
        for (std::size_t mask = 0; mask < faces; ++mask)
        {
            if (x[mask] == 0)
                continue;
            for (std::size_t j = 0; j < k; ++j)
            {
                std::size_t jb = std::size_t{1} << j;
                if (mask & jb)
                    continue;
                if (j == ray)
                    y[mask | jb] += x[mask] * l;
                else if (mask & bit)
                    y[mask | jb] -= x[mask] * w[(mask * k + j) * k + ray] * scale[mask];
            }
        }
        return y;
    };

    // the degree of each entry is the popcount of its mask, so summing the
    // powers of one D_l needs them brought to the same scale first
    std::vector<Integer> st(faces);
    st[0] = 1;
    for (std::size_t ray = 0; ray < k; ++ray)
    {
        std::vector<Integer> cur = st, acc(faces);
        for (std::size_t e = 0; e <= k; ++e)
        {
            if (e > 0)
                cur = multiply(ray, cur);
            if (tnum[e] == 0)
                continue;
            for (std::size_t mask = 0; mask < faces; ++mask)
                if (cur[mask] != 0)
                    acc[mask] += tnum[e] * cur[mask];
        }
        st = std::move(acc);
    }
    Integer den = 1;
    for (std::size_t i = 0; i < k; ++i)
        den *= l * tden;
    return Rational(st[faces - 1], den);
}

struct SignedPiece
{
    Cone cone;
    int sign;
};

// One step of the signed decomposition of a singular simplicial cone.
std::vector<SignedPiece> signed_split(const Cone& sigma)
{
    const std::size_t k = sigma.dim();
    const std::size_t n = sigma.ambient_rank();
    std::vector<IntVector> span_basis, ray_coords;
    simplicial_coords(sigma, span_basis, ray_coords);
    IntegerMatrix u = IntegerMatrix::from_rows(ray_coords, k);
    Integer det = abs(determinant(u));
    RationalMatrix inv = inverse(to_rational(u));
    // alpha = x * a / det expresses x in the rays
    std::vector<IntVector> a(k, IntVector(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            a[i][j] = numerator(Rational(inv(i, j) * det));
    IntegerMatrix t = lll_transform(a);

    const int range = k <= 3 ? 2 : 1;
    std::vector<int> c(k, -range);
    std::optional<std::tuple<Integer, std::size_t, IntVector, IntVector>> best; // score, nonzeros, x, alpha
    while (true)
    {
        if (std::any_of(c.begin(), c.end(), [](int v) { return v != 0; }))
        {
            IntVector x(k);
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t col = 0; col < k; ++col)
                    x[col] += c[r] * t(r, col);
            IntVector alpha(k);
            for (std::size_t col = 0; col < k; ++col)
                for (std::size_t r = 0; r < k; ++r)
                    alpha[col] += x[r] * a[r][col];
            for (std::size_t i = 0; i < k; ++i)
            {
                Integer q = round_div(alpha[i], det);
                if (q == 0)
                    continue;
                alpha[i] -= q * det;
                for (std::size_t col = 0; col < k; ++col)
                    x[col] -= q * ray_coords[i][col];
            }
            if (!is_zero(alpha))
            {
                Integer score = 0;
                std::size_t nonzero = 0;
                for (const auto& v : alpha)
                {
                    score = std::max<Integer>(score, abs(v));
                    nonzero += v != 0;
                }
                auto cand = std::make_tuple(score, nonzero, x, alpha);
                if (!best || cand < *best)
                    best = std::move(cand);
            }
        }
        std::size_t pos = 0;
        while (pos < k && ++c[pos] > range)
            c[pos++] = -range;
        if (pos == k)
            break;
    }
    auto [score, nonzero, x, alpha] = *best;
    // With no positive alpha_i the vectors span the whole space and the
    // pieces would tile its complement; -w avoids that case.
    if (std::none_of(alpha.begin(), alpha.end(), [](const Integer& v) { return v > 0; }))
    {
        for (auto& v : x)
            v = -v;
        for (auto& v : alpha)
            v = -v;
    }
    IntVector w(n);
    for (std::size_t col = 0; col < k; ++col)
        for (std::size_t m = 0; m < n; ++m)
            w[m] += x[col] * span_basis[col][m];

    std::vector<SignedPiece> out;
    for (std::size_t i = 0; i < k; ++i)
    {
        if (alpha[i] == 0)
            continue;
        std::vector<IntVector> rays = sigma.rays();
        rays[i] = w;
        out.push_back({Cone::from_generators(rays, n), alpha[i] > 0 ? 1 : -1});
    }
    return out;
}

Rational decompose_uncached(const Cone& sigma, const ComplementMap& psi, std::map<Cone, Rational>& memo);

Rational decompose(const Cone& sigma, const ComplementMap& psi, std::map<Cone, Rational>& memo)
{
    if (sigma.dim() == 0)
        return 1;
    if (auto it = memo.find(sigma); it != memo.end())
        return it->second;
    Rational mu = decompose_uncached(sigma, psi, memo);
    memo.emplace(sigma, mu);
    return mu;
}

Rational decompose_uncached(const Cone& sigma, const ComplementMap& psi, std::map<Cone, Rational>& memo)
{
    if (!sigma.is_simplicial())
    {
        Fan f = Fan::of_cone(sigma);
        Subdivision s = simplicialize(f);
        Rational mu = 0;
        for (auto m : s.fan.maximal_cones())
            if (s.fan.dim(m) == sigma.dim())
                mu += decompose(s.fan.cone(m), psi, memo);
        return mu;
    }
    if (multiplicity(sigma) == 1)
        return unimodular_todd(sigma.rays(), psi.inner_product()->gram);
    Rational mu = 0;
    for (const auto& piece : signed_split(sigma))
    {
        Rational v = decompose(piece.cone, psi, memo);
        mu += piece.sign > 0 ? v : Rational(-v);
    }
    return mu;
}

} // namespace

Rational todd_measure_by_decomposition(const Cone& sigma, const ComplementMap& psi)
{
    if (!psi.inner_product())
        throw std::invalid_argument("todd_measure_by_decomposition: needs an inner-product complement map");
    std::map<Cone, Rational> memo;
    return decompose(sigma, psi, memo);
}

ToddAssignment::ToddAssignment(ComplementMap psi, MeasureMethod method) : psi_(std::move(psi)), method_(method)
{
    if (method_ == MeasureMethod::Decomposition && !psi_.inner_product())
        throw std::invalid_argument("ToddAssignment: decomposition needs an inner-product complement map");
}

Rational ToddAssignment::operator()(const Cone& sigma) const
{
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(sigma);
        if (it != memo_.end())
            return it->second;
    }
    Rational mu;
    bool decomp = method_ == MeasureMethod::Decomposition ||
                  (method_ == MeasureMethod::Auto && psi_.inner_product() != nullptr);
    if (decomp)
        mu = todd_measure_by_decomposition(sigma, psi_);
    else
        mu = todd_measure_by_resolution(sigma, psi_);
    std::lock_guard<std::mutex> lock(mutex_);
    return memo_.emplace(sigma, mu).first->second;
}

std::size_t ToddAssignment::cached() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    return memo_.size();
}

std::shared_ptr<ToddAssignment> shared_assignment(const ComplementMap& psi)
{
    static std::mutex registry_mutex;
    static std::map<std::string, std::shared_ptr<ToddAssignment>> registry;
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto& slot = registry[psi.fingerprint()];
    if (!slot)
        slot = std::make_shared<ToddAssignment>(psi);
    return slot;
}

Rational todd_measure(const Cone& sigma, const ComplementMap& psi)
{
    return (*shared_assignment(psi))(sigma);
}

Rational flag_monomial_coefficient(const Cone& sigma, const std::vector<unsigned>& exponents, const FlagMap& flag)
{
    if (!sigma.is_simplicial())
        throw std::invalid_argument("flag_monomial_coefficient: cone is not simplicial");
    const std::size_t k = sigma.dim();
    const std::size_t n = sigma.ambient_rank();
    if (exponents.size() != k)
        throw std::invalid_argument("flag_monomial_coefficient: one exponent per ray expected");
    unsigned total = 0;
    for (auto e : exponents)
        total += e;
    if (total != k)
        throw std::invalid_argument("flag_monomial_coefficient: degree must equal the cone dimension");
    if (k == 0)
        return 1;
    Rational inv_mult = Rational(1) / Rational(multiplicity(sigma));
    if (k == 1)
        return inv_mult;

    std::vector<IntVector> span_rows(flag.rows.begin(), flag.rows.begin() + (n - k + 1));
    auto perp = integer_kernel_basis(IntegerMatrix::from_rows(span_rows, n));
    RationalMatrix m(perp.size(), k);
    for (std::size_t r = 0; r < perp.size(); ++r)
        for (std::size_t i = 0; i < k; ++i)
            m(r, i) = dot(perp[r], sigma.rays()[i]);
    auto ker = kernel_basis(m);
    if (ker.size() != 1)
        throw NonGenericFlag("flag meets span of " + to_string(sigma) + " in more than a line");
    const RatVector& t = ker.front();
    Rational out = inv_mult;
    for (std::size_t i = 0; i < k; ++i)
    {
        if (t[i] == 0)
            throw NonGenericFlag("flag line lies on a proper face of " + to_string(sigma));
        int e = static_cast<int>(exponents[i]) - 1;
        for (; e > 0; --e)
            out *= t[i];
        for (; e < 0; ++e)
            out /= t[i];
    }
    return out;
}

MeasureReport verify_resolution_independence(const Cone& sigma, const ComplementMap& psi)
{
    MeasureReport rep;
    rep.values.emplace_back("minimal-sum resolution", todd_measure_by_resolution(sigma, psi, CenterRule::MinimalSum));
    rep.values.emplace_back("most-zeros resolution", todd_measure_by_resolution(sigma, psi, CenterRule::MostZeros));

    if (sigma.dim() >= 2)
    {
        Fan f = Fan::of_cone(sigma);
        std::size_t top = *f.find(sigma);
        Resolution r = resolve(f, options_for(psi, CenterRule::MinimalSum));
        bool refined = false;
        for (std::size_t i = 0; i < r.fan.size() && !refined; ++i)
        {
            if (r.fan.dim(i) != sigma.dim())
                continue;
            IntVector center(sigma.ambient_rank());
            for (auto k : r.fan.cones()[i])
                for (std::size_t c = 0; c < center.size(); ++c)
                    center[c] += r.fan.rays()[k][c];
            Subdivision s = stellar_subdivide(r.fan, center);
            bool admissible = true;
            for (std::size_t j = 0; j < s.fan.size() && admissible; ++j)
                admissible = psi.in_domain(s.fan.cone(j));
            if (!admissible)
                continue;
            SubdivisionMap back = SubdivisionMap::between(s.fan, f);
            rep.values.emplace_back("refined resolution", pieces_sum(s.fan, back, top, psi));
            refined = true;
        }
        if (!refined)
            rep.detail = "no admissible extra refinement";
    }
    if (psi.inner_product())
        rep.values.emplace_back("signed decomposition", todd_measure_by_decomposition(sigma, psi));
    for (const auto& [name, v] : rep.values)
        if (v != rep.values.front().second)
            rep.ok = false;
    return rep;
}

MeasureReport verify_additivity(const Cone& tau, const std::vector<Cone>& pieces, const ComplementMap& psi)
{
    MeasureReport rep;
    for (const auto& p : pieces)
        if (p.dim() != tau.dim() || !contains(tau, p))
        {
            rep.ok = false;
            rep.detail = to_string(p) + " is not a full-dimensional piece of " + to_string(tau);
            return rep;
        }
    Rational whole = todd_measure(tau, psi);
    Rational sum = 0;
    for (const auto& p : pieces)
        sum += todd_measure(p, psi);
    rep.values.emplace_back("whole", whole);
    rep.values.emplace_back("pieces", sum);
    if (psi.inner_product())
    {
        // the default measure already leans on additivity; resolutions do not
        Rational rsum = 0;
        for (const auto& p : pieces)
            rsum += todd_measure_by_resolution(p, psi);
        rep.values.emplace_back("whole by resolution", todd_measure_by_resolution(tau, psi));
        rep.values.emplace_back("pieces by resolution", rsum);
    }
    for (const auto& [name, v] : rep.values)
        if (v != whole)
            rep.ok = false;
    return rep;
}

} // namespace toddcount
