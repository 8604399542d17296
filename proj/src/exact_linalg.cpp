#include "toddcount/exact_linalg.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace toddcount {

template <typename T>
Matrix<T> Matrix<T>::from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols_if_empty)
{
    std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
        if (rows[r].size() != cols)
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = rows[r][c];
    }
    return m;
}

template <typename T>
Matrix<T> Matrix<T>::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

template <typename T>
std::vector<T> Matrix<T>::row(std::size_t r) const
{
    return std::vector<T>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

template <typename T>
std::vector<std::vector<T>> Matrix<T>::to_rows() const
{
    std::vector<std::vector<T>> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        out.push_back(row(r));
    return out;
}

template <typename T>
Matrix<T> Matrix<T>::transpose() const
{
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

template class Matrix<Integer>;
template class Matrix<Rational>;

namespace {

template <typename T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            if (a(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

// x*a + y*b == g, g >= 0
void extended_gcd(const Integer& a, const Integer& b, Integer& g, Integer& x, Integer& y)
{
    Integer old_r = a, r = b;
    Integer old_s = 1, s = 0;
    Integer old_t = 0, t = 1;
    while (r != 0)
    {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0)
    {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    g = old_r;
    x = old_s;
    y = old_t;
}

Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q = a / b; // truncates toward zero
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        q -= 1;
    return q;
}

} // namespace

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) { return multiply(a, b); }
RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) { return multiply(a, b); }

RationalMatrix to_rational(const IntegerMatrix& a)
{
    RationalMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            out(r, c) = Rational(a(r, c));
    return out;
}

RatVector to_rational(const IntVector& v)
{
    return RatVector(v.begin(), v.end());
}

RationalMatrix rational_rows(std::span<const IntVector> rows, std::size_t cols)
{
    RationalMatrix out(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
        if (rows[r].size() != cols)
            throw std::invalid_argument("rational_rows: row length mismatch");
        for (std::size_t c = 0; c < cols; ++c)
            out(r, c) = Rational(rows[r][c]);
    }
    return out;
}

Rational dot(const RatVector& a, const RatVector& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

Rational dot(const RatVector& a, const IntVector& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

Integer dot(const IntVector& a, const IntVector& b)
{
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

bool is_zero(const IntVector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

bool is_zero(const RatVector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

RowEchelon row_reduce(RationalMatrix a)
{
    RowEchelon out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c)
    {
        std::size_t p = r;
        while (p < a.rows() && a(p, c) == 0)
            ++p;
        if (p == a.rows())
            continue;
        if (p != r)
            for (std::size_t k = 0; k < a.cols(); ++k)
                std::swap(a(p, k), a(r, k));
        Rational inv = 1 / a(r, c);
        for (std::size_t k = c; k < a.cols(); ++k)
            a(r, k) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i)
        {
            if (i == r || a(i, c) == 0)
                continue;
            Rational f = a(i, c);
            for (std::size_t k = c; k < a.cols(); ++k)
                a(i, k) -= f * a(r, k);
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.reduced = std::move(a);
    return out;
}

std::size_t rank(const RationalMatrix& a)
{
    return row_reduce(a).pivot_cols.size();
}

std::size_t rank(std::span<const IntVector> rows, std::size_t cols)
{
    return rank(rational_rows(rows, cols));
}

Rational determinant(RationalMatrix a)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = a.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c)
    {
        std::size_t p = c;
        while (p < n && a(p, c) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c)
        {
            for (std::size_t k = 0; k < n; ++k)
                std::swap(a(p, k), a(c, k));
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t i = c + 1; i < n; ++i)
        {
            if (a(i, c) == 0)
                continue;
            Rational f = a(i, c) / a(c, c);
            for (std::size_t k = c; k < n; ++k)
                a(i, k) -= f * a(c, k);
        }
    }
    return det;
}

Integer determinant(const IntegerMatrix& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    IntegerMatrix a = m;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k)
    {
        if (a(k, k) == 0)
        {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a(p, c), a(k, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

std::optional<RatVector> solve_linear(const RationalMatrix& a, const RatVector& b)
{
    if (b.size() != a.rows())
        throw std::invalid_argument("solve_linear: rhs length mismatch");
    RationalMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r)
    {
        for (std::size_t c = 0; c < a.cols(); ++c)
            aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    RowEchelon e = row_reduce(std::move(aug));
    if (!e.pivot_cols.empty() && e.pivot_cols.back() == a.cols())
        return std::nullopt;
    RatVector x(a.cols());
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i)
        x[e.pivot_cols[i]] = e.reduced(i, a.cols());
    return x;
}

IntVector primitive_integer_multiple(const RatVector& v)
{
    Integer l = 1;
    for (const auto& q : v)
        l = boost::multiprecision::lcm(l, Integer(boost::multiprecision::denominator(q)));
    IntVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = Integer(boost::multiprecision::numerator(v[i]) * (l / boost::multiprecision::denominator(v[i])));
    return primitive_vector(std::move(out));
}

std::vector<RatVector> kernel_basis(const RationalMatrix& a)
{
    RowEchelon e = row_reduce(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : e.pivot_cols)
        is_pivot[c] = true;
    std::vector<RatVector> basis;
    for (std::size_t free = 0; free < a.cols(); ++free)
    {
        if (is_pivot[free])
            continue;
        RatVector v(a.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < e.pivot_cols.size(); ++i)
            v[e.pivot_cols[i]] = -e.reduced(i, free);
        IntVector p = primitive_integer_multiple(v);
        auto first = std::find_if(p.begin(), p.end(), [](const Integer& x) { return x != 0; });
        if (*first < 0)
            for (auto& x : p)
                x = -x;
        basis.push_back(to_rational(p));
    }
    return basis;
}

HermiteForm hermite_normal_form(const IntegerMatrix& a)
{
    IntegerMatrix h = a;
    IntegerMatrix u = IntegerMatrix::identity(a.rows());
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    // row_r <- x row_r + y row_i ; row_i <- p row_r + q row_i
    auto combine = [](IntegerMatrix& mat, std::size_t r, std::size_t i, const Integer& x, const Integer& y,
                      const Integer& p, const Integer& q) {
        for (std::size_t k = 0; k < mat.cols(); ++k)
        {
            Integer rr = mat(r, k), ri = mat(i, k);
            mat(r, k) = x * rr + y * ri;
            mat(i, k) = p * rr + q * ri;
        }
    };
    auto negate_row = [](IntegerMatrix& mat, std::size_t r) {
        for (std::size_t k = 0; k < mat.cols(); ++k)
            mat(r, k) = -mat(r, k);
    };
    // row_i <- row_i - f row_r
    auto subtract = [](IntegerMatrix& mat, std::size_t i, std::size_t r, const Integer& f) {
        for (std::size_t k = 0; k < mat.cols(); ++k)
            mat(i, k) -= f * mat(r, k);
    };

    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c)
    {
        for (std::size_t i = r + 1; i < m; ++i)
        {
            if (h(i, c) == 0)
                continue;
            Integer g, x, y;
            extended_gcd(h(r, c), h(i, c), g, x, y);
            Integer p = -h(i, c) / g;
            Integer q = h(r, c) / g;
            combine(h, r, i, x, y, p, q);
            combine(u, r, i, x, y, p, q);
        }
        if (h(r, c) == 0)
            continue;
        if (h(r, c) < 0)
        {
            negate_row(h, r);
            negate_row(u, r);
        }
        for (std::size_t i = 0; i < r; ++i)
        {
            Integer f = floor_div(h(i, c), h(r, c));
            if (f == 0)
                continue;
            subtract(h, i, r, f);
            subtract(u, i, r, f);
        }
        ++r;
    }
    return {std::move(h), std::move(u)};
}

std::vector<IntVector> integer_kernel_basis(const IntegerMatrix& a)
{
    // u * a^T = h; rows of u facing zero rows of h span the kernel lattice.
    HermiteForm hf = hermite_normal_form(a.transpose());
    std::vector<IntVector> out;
    for (std::size_t r = 0; r < hf.h.rows(); ++r)
    {
        bool zero = true;
        for (std::size_t c = 0; c < hf.h.cols() && zero; ++c)
            zero = hf.h(r, c) == 0;
        if (zero)
            out.push_back(hf.u.row(r));
    }
    return out;
}

std::vector<IntVector> lattice_basis_of_span(std::span<const IntVector> vectors, std::size_t ambient_rank)
{
    std::vector<IntVector> nonzero;
    for (const auto& v : vectors)
    {
        if (v.size() != ambient_rank)
            throw std::invalid_argument("lattice_basis_of_span: vector length mismatch");
        if (!is_zero(v))
            nonzero.push_back(v);
    }
    if (nonzero.empty())
        return {};
    // Saturation = integer vectors orthogonal to every integer functional
    // vanishing on the span.
    std::vector<IntVector> annihilator =
        integer_kernel_basis(IntegerMatrix::from_rows(nonzero, ambient_rank));
    std::vector<IntVector> saturated;
    if (annihilator.empty())
    {
        IntegerMatrix id = IntegerMatrix::identity(ambient_rank);
        saturated = id.to_rows();
    }
    else
    {
        saturated = integer_kernel_basis(IntegerMatrix::from_rows(annihilator, ambient_rank));
    }
    HermiteForm hf = hermite_normal_form(IntegerMatrix::from_rows(saturated, ambient_rank));
    std::vector<IntVector> out;
    for (std::size_t r = 0; r < hf.h.rows(); ++r)
    {
        IntVector row = hf.h.row(r);
        if (!is_zero(row))
            out.push_back(std::move(row));
    }
    return out;
}

IntVector primitive_vector(IntVector v)
{
    Integer g = 0;
    for (const auto& x : v)
        g = boost::multiprecision::gcd(g, x);
    if (g == 0)
        throw std::invalid_argument("primitive_vector: zero vector");
    if (g < 0)
        g = -g;
    for (auto& x : v)
        x /= g;
    return v;
}

Integer lattice_index(std::span<const IntVector> sub)
{
    // gcd of the maximal minors equals the product of the elementary
    // divisors, i.e. the index of Z·sub in its saturation.
    if (sub.empty())
        return 1;
    const std::size_t k = sub.size();
    const std::size_t n = sub.front().size();
    if (k > n)
        throw std::invalid_argument("lattice_index: vectors are linearly dependent");
    std::vector<std::size_t> cols(k);
    for (std::size_t i = 0; i < k; ++i)
        cols[i] = i;
    Integer g = 0;
    while (true)
    {
        IntegerMatrix minor(k, k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < k; ++c)
                minor(r, c) = sub[r][cols[c]];
        g = boost::multiprecision::gcd(g, determinant(minor));
        // next k-subset of columns
        std::size_t i = k;
        while (i > 0 && cols[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            break;
        ++cols[i - 1];
        for (std::size_t j = i; j < k; ++j)
            cols[j] = cols[j - 1] + 1;
    }
    if (g == 0)
        throw std::invalid_argument("lattice_index: vectors are linearly dependent");
    return g < 0 ? Integer(-g) : g;
}

std::optional<RatVector> coordinates_in(std::span<const IntVector> basis, const RatVector& v)
{
    // Solve c · B = v, i.e. B^T c^T = v^T.
    RationalMatrix bt = rational_rows(basis, v.size()).transpose();
    return solve_linear(bt, v);
}

std::string to_string(const Rational& q)
{
    std::ostringstream os;
    os << boost::multiprecision::numerator(q) << '/' << boost::multiprecision::denominator(q);
    return os.str();
}

std::string to_string(const IntVector& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

Rational parse_rational(std::string_view text)
{
    auto valid_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+'))
            s.remove_prefix(1);
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den.front() == '-' || den.front() == '+')
        throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    Integer n{std::string(num.front() == '+' ? num.substr(1) : num)};
    Integer d{std::string(den)};
    if (d == 0)
        throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    return Rational(n, d);
}

} // namespace toddcount
