#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace zncoh {

using BigInt = mpz_class;

/// Dense integer matrix, row-major, arbitrary precision entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
  static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& rows);
  static IntMatrix diagonal(std::span<const BigInt> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<BigInt> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const BigInt> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  IntMatrix transpose() const;
  IntMatrix column_range(std::size_t first, std::size_t count) const;
  IntMatrix row_range(std::size_t first, std::size_t count) const;
  std::vector<std::vector<BigInt>> to_rows() const;

  bool is_zero() const;
  bool is_identity() const;
  BigInt trace() const;

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Columns of `b` appended to the right of `a`.
IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix matrix_power(const IntMatrix& a, std::size_t exponent);

/// U*A*V = D with U, V unimodular and D diagonal with d_1 | d_2 | ... and d_i >= 0.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;

  std::size_t rank() const;
  std::vector<BigInt> diagonal() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& a);

/// Nonzero Smith invariants of `a` (divisibility chain), without transforms.
std::vector<BigInt> invariant_factors(const IntMatrix& a);

/// Rank over the rationals.
std::size_t rank(const IntMatrix& a);

/// Exact determinant by fraction-free elimination.
BigInt determinant(const IntMatrix& a);

/// Columns form a basis of the saturated lattice {x : a x = 0}.
IntMatrix kernel_basis(const IntMatrix& a);

/// Basis (as columns) of the lattice spanned by the columns of `a`.
IntMatrix column_span_basis(const IntMatrix& a);

/// Solves basis * X = targets exactly. `basis` must have independent columns.
/// Returns nullopt when some target column is not an integral combination.
std::optional<IntMatrix> coordinates_in_basis(const IntMatrix& basis,
                                              const IntMatrix& targets);

/// Canonical finitely generated abelian group Z^rank + Z/t_1 + ... with t_1 | t_2 | ...
class AbelianGroup {
 public:
  AbelianGroup() = default;
  /// Accepts any list of cyclic orders (0 counts as a free summand, 1 is dropped).
  AbelianGroup(std::size_t rank, std::vector<BigInt> cyclic_orders);

  static AbelianGroup free(std::size_t rank) { return AbelianGroup(rank, {}); }
  static AbelianGroup elementary(const BigInt& p, std::size_t count);

  std::size_t rank() const noexcept { return rank_; }
  const std::vector<BigInt>& torsion() const noexcept { return torsion_; }
  bool is_zero() const noexcept { return rank_ == 0 && torsion_.empty(); }
  BigInt torsion_order() const;

  /// Number of cyclic summands whose order is divisible by p (dim of A (x) F_p minus rank).
  std::size_t p_rank(const BigInt& p) const;

  /// Torsion as a sorted multiset of prime powers.
  std::vector<std::pair<BigInt, unsigned>> prime_power_view() const;

  AbelianGroup operator+(const AbelianGroup& other) const;
  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

  /// e.g. "Z^2 + (Z/2)^2 + Z/3", "0" for the trivial group.
  std::string to_string() const;

 private:
  std::size_t rank_ = 0;
  std::vector<BigInt> torsion_;
};

/// V/W where V is spanned by the independent columns of `ambient_basis` and W by the
/// columns of `sub_generators`. Throws NotASublattice if W is not inside V.
AbelianGroup lattice_quotient(const IntMatrix& ambient_basis,
                              const IntMatrix& sub_generators);

/// Dense univariate integer polynomial, coefficients lowest degree first.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coefficients);
  IntPolynomial(std::initializer_list<long> coefficients);

  static IntPolynomial monomial(std::size_t degree, const BigInt& coefficient = 1);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }
  BigInt coefficient(std::size_t k) const;
  const BigInt& leading() const { return coeffs_.back(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  /// Quotient and remainder by a monic divisor.
  std::pair<IntPolynomial, IntPolynomial> divmod_monic(const IntPolynomial& divisor) const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<BigInt> coeffs_;
};

/// det(xI - a), computed with exact integer Faddeev-LeVerrier recurrences.
IntPolynomial charpoly(const IntMatrix& a);

/// Matrix of degree x degree minors; rows and columns indexed by index subsets in
/// lexicographic order.
IntMatrix wedge_power(const IntMatrix& a, std::size_t degree);

/// wedge_power(a, k) for every k in [0, max_degree], sharing the minor recursion.
std::vector<IntMatrix> exterior_powers(const IntMatrix& a, std::size_t max_degree);

/// Sum of the principal minors of size `degree`, i.e. trace(wedge_power(a, degree)).
BigInt wedge_trace(const IntMatrix& a, std::size_t degree);

/// Inverse of a matrix with determinant +-1.
IntMatrix unimodular_inverse(const IntMatrix& a);

/// Inverse transpose; throws NotUnimodular unless det = +-1.
IntMatrix contragredient(const IntMatrix& a);

/// Lexicographically ordered `k`-subsets of {0, ..., n-1} as bitmasks.
std::vector<std::uint32_t> index_subsets(std::size_t n, std::size_t k);

BigInt binomial(long n, long k);

}  // namespace zncoh
