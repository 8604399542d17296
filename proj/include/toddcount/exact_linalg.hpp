// Exact integer and rational linear algebra.
//
// Every quantity in the library is an arbitrary-precision integer or a
// reduced rational; nothing here touches floating point.

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace toddcount {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Element of N or M in coordinates; length equals the ambient rank.
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

template <typename T>
class Matrix
{
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    /// Builds a matrix from row vectors; all rows must share the same length.
    static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols_if_empty = 0);
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<T> row(std::size_t r) const;
    std::vector<std::vector<T>> to_rows() const;
    Matrix transpose() const;

    bool operator==(const Matrix& other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using IntegerMatrix = Matrix<Integer>;

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);

RationalMatrix to_rational(const IntegerMatrix& a);
RatVector to_rational(const IntVector& v);
RationalMatrix rational_rows(std::span<const IntVector> rows, std::size_t cols);

Rational dot(const RatVector& a, const RatVector& b);
Rational dot(const RatVector& a, const IntVector& b);
Integer dot(const IntVector& a, const IntVector& b);

bool is_zero(const IntVector& v);
bool is_zero(const RatVector& v);

struct RowEchelon
{
    RationalMatrix reduced;              // reduced row echelon form
    std::vector<std::size_t> pivot_cols; // one per nonzero row
};

/// Reduced row echelon form by left-to-right Gaussian pivoting.
RowEchelon row_reduce(RationalMatrix a);

std::size_t rank(const RationalMatrix& a);
std::size_t rank(std::span<const IntVector> rows, std::size_t cols);

Rational determinant(RationalMatrix a);
/// Fraction-free (Bareiss) determinant.
Integer determinant(const IntegerMatrix& a);

/// One solution of a·x = b, or nullopt when the system is inconsistent.
///
/// The representative is fixed: reduce with left-to-right pivoting and set
/// every free variable to zero. Callers that need a representative-free
/// answer must only use quantities that are invariant under the choice.
std::optional<RatVector> solve_linear(const RationalMatrix& a, const RatVector& b);

/// Basis of {x : a·x = 0}. Each vector is scaled to a primitive integer
/// vector whose first nonzero entry is positive; the list is empty iff a is
/// injective.
std::vector<RatVector> kernel_basis(const RationalMatrix& a);

struct HermiteForm
{
    IntegerMatrix h; // row-style Hermite normal form
    IntegerMatrix u; // unimodular, u * a == h
};

/// Row-style Hermite normal form: h is in row echelon form, pivots are
/// positive, entries above a pivot lie in [0, pivot), zero rows come last.
HermiteForm hermite_normal_form(const IntegerMatrix& a);

/// Lattice basis of {x in Z^n : a·x = 0}.
std::vector<IntVector> integer_kernel_basis(const IntegerMatrix& a);

/// Basis of the saturated lattice span_Q(vectors) ∩ Z^n, in Hermite form.
std::vector<IntVector> lattice_basis_of_span(std::span<const IntVector> vectors, std::size_t ambient_rank);

/// v divided by the gcd of its coordinates. Throws std::invalid_argument on
/// the zero vector.
IntVector primitive_vector(IntVector v);

/// Rescales a nonzero rational vector to the primitive integer vector on the
/// same ray.
IntVector primitive_integer_multiple(const RatVector& v);

/// Index of the lattice generated by `sub` inside the saturated lattice of
/// its span. Throws std::invalid_argument when `sub` is linearly dependent.
Integer lattice_index(std::span<const IntVector> sub);

/// Coordinates of `v` in terms of the rows of `basis`; nullopt if v lies
/// outside their span.
std::optional<RatVector> coordinates_in(std::span<const IntVector> basis, const RatVector& v);

/// "num/den" with den > 0.
std::string to_string(const Rational& q);
std::string to_string(const IntVector& v);
/// Accepts "p", "-p" or "p/q". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

} // namespace toddcount
