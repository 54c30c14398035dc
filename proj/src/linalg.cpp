#include "zncoh/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <sstream>
#include <unordered_map>

#include "zncoh/error.hpp"

namespace zncoh {

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  IntMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorKind::InvalidInput, "ragged matrix rows");
    std::size_t j = 0;
    for (long v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<BigInt>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorKind::InvalidInput, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::diagonal(std::span<const BigInt> entries) {
  IntMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::column_range(std::size_t first, std::size_t count) const {
  assert(first + count <= cols_);
  IntMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

IntMatrix IntMatrix::row_range(std::size_t first, std::size_t count) const {
  assert(first + count <= rows_);
  IntMatrix out(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(first + i, j);
  return out;
}

std::vector<std::vector<BigInt>> IntMatrix::to_rows() const {
  std::vector<std::vector<BigInt>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const BigInt& v) { return v == 0; });
}

bool IntMatrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

BigInt IntMatrix::trace() const {
  BigInt t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::InvalidInput, "matrix shape mismatch in product");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const BigInt& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const BigInt& bkj = b(k, j);
        if (bkj == 0) continue;
        mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), bkj.get_mpz_t());
      }
    }
  }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw Error(ErrorKind::InvalidInput, "matrix shape mismatch in sum");
  IntMatrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw Error(ErrorKind::InvalidInput, "matrix shape mismatch in difference");
  IntMatrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
  return c;
}

std::string IntMatrix::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    out << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? ", " : "") << (*this)(i, j).get_str();
    out << ']';
  }
  out << ']';
  return out.str();
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::InvalidInput, "hstack row mismatch");
  IntMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

IntMatrix matrix_power(const IntMatrix& a, std::size_t exponent) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "matrix power of non-square matrix");
  IntMatrix result = IntMatrix::identity(a.rows());
  IntMatrix base = a;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

// Quotient rounded to nearest, so the remainder satisfies |r| <= |b|/2.
BigInt nearest_quotient(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  BigInt twice = 2 * abs(r);
  if (twice > abs(b)) {
    if ((r > 0) == (b > 0)) q += 1;
    else q -= 1;
  }
  return q;
}

class SmithWorker {
 public:
  SmithWorker(const IntMatrix& a, bool track_u, bool track_v)
      : d_(a), track_u_(track_u), track_v_(track_v) {
    if (track_u_) u_ = IntMatrix::identity(a.rows());
    if (track_v_) v_ = IntMatrix::identity(a.cols());
  }

  void run() {
    const std::size_t m = d_.rows();
    const std::size_t n = d_.cols();
    std::size_t t = 0;
    while (t < std::min(m, n)) {
      std::size_t pi = 0, pj = 0;
      if (!smallest_in_block(t, pi, pj)) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      reduce_pivot(t);
      if (d_(t, t) < 0) negate_row(t);
      ++t;
    }
    rank_ = t;
    fix_divisibility();
  }

  std::size_t rank() const { return rank_; }
  IntMatrix& d() { return d_; }
  IntMatrix& u() { return u_; }
  IntMatrix& v() { return v_; }

 private:
  bool smallest_in_block(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    const BigInt* best = nullptr;
    for (std::size_t i = t; i < d_.rows(); ++i) {
      for (std::size_t j = t; j < d_.cols(); ++j) {
        const BigInt& v = d_(i, j);
        if (v == 0) continue;
        if (best == nullptr || mpz_cmpabs(v.get_mpz_t(), best->get_mpz_t()) < 0) {
          best = &v;
          pi = i;
          pj = j;
          if (abs(v) == 1) return true;
        }
      }
    }
    return best != nullptr;
  }

  void reduce_pivot(std::size_t t) {
    const std::size_t m = d_.rows();
    const std::size_t n = d_.cols();
    for (;;) {
      bool clean = true;
      // Clear column t with row operations.
      std::vector<std::size_t> support;
      for (std::size_t j = t; j < n; ++j)
        if (d_(t, j) != 0) support.push_back(j);
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d_(i, t) == 0) continue;
        BigInt q = nearest_quotient(d_(i, t), d_(t, t));
        if (q != 0) row_axpy(i, t, q, support);
        if (d_(i, t) != 0) clean = false;
      }
      // Clear row t with column operations.
      support.clear();
      for (std::size_t i = t; i < m; ++i)
        if (d_(i, t) != 0) support.push_back(i);
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d_(t, j) == 0) continue;
        BigInt q = nearest_quotient(d_(t, j), d_(t, t));
        if (q != 0) col_axpy(j, t, q, support);
        if (d_(t, j) != 0) clean = false;
      }
      if (clean) return;
      // Move the smallest remaining entry of row/column t onto the pivot.
      std::size_t bi = t, bj = t;
      for (std::size_t i = t + 1; i < m; ++i)
        if (d_(i, t) != 0 && mpz_cmpabs(d_(i, t).get_mpz_t(), d_(bi, bj).get_mpz_t()) < 0) { bi = i; bj = t; }
      for (std::size_t j = t + 1; j < n; ++j)
        if (d_(t, j) != 0 && mpz_cmpabs(d_(t, j).get_mpz_t(), d_(bi, bj).get_mpz_t()) < 0) { bi = t; bj = j; }
      swap_rows(t, bi);
      swap_cols(t, bj);
    }
  }

  // Makes the diagonal a divisibility chain using 2x2 gcd/lcm transforms.
  void fix_divisibility() {
    for (std::size_t i = 0; i < rank_; ++i) {
      for (std::size_t j = i + 1; j < rank_; ++j) {
        BigInt a = d_(i, i);
        BigInt b = d_(j, j);
        if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) continue;
        BigInt g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        BigInt a_g = a / g;
        BigInt b_g = b / g;
        d_(i, i) = g;
        d_(j, j) = a_g * b;
        if (track_u_) {
          for (std::size_t k = 0; k < u_.cols(); ++k) {
            BigInt x = u_(i, k), y = u_(j, k);
            u_(i, k) = s * x + t * y;
            u_(j, k) = -b_g * x + a_g * y;
          }
        }
        if (track_v_) {
          for (std::size_t k = 0; k < v_.rows(); ++k) {
            BigInt x = v_(k, i), y = v_(k, j);
            v_(k, i) = x + y;
            v_(k, j) = -t * b_g * x + s * a_g * y;
          }
        }
      }
    }
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < d_.cols(); ++j) swap(d_(a, j), d_(b, j));
    if (track_u_)
      for (std::size_t j = 0; j < u_.cols(); ++j) swap(u_(a, j), u_(b, j));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < d_.rows(); ++i) swap(d_(i, a), d_(i, b));
    if (track_v_)
      for (std::size_t i = 0; i < v_.rows(); ++i) swap(v_(i, a), v_(i, b));
  }

  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < d_.cols(); ++j) d_(r, j) = -d_(r, j);
    if (track_u_)
      for (std::size_t j = 0; j < u_.cols(); ++j) u_(r, j) = -u_(r, j);
  }

  // row_target -= q * row_source
  void row_axpy(std::size_t target, std::size_t source, const BigInt& q,
                const std::vector<std::size_t>& support) {
    for (std::size_t j : support)
      mpz_submul(d_(target, j).get_mpz_t(), q.get_mpz_t(), d_(source, j).get_mpz_t());
    if (track_u_) {
      for (std::size_t j = 0; j < u_.cols(); ++j) {
        if (u_(source, j) == 0) continue;
        mpz_submul(u_(target, j).get_mpz_t(), q.get_mpz_t(), u_(source, j).get_mpz_t());
      }
    }
  }

  // col_target -= q * col_source
  void col_axpy(std::size_t target, std::size_t source, const BigInt& q,
                const std::vector<std::size_t>& support) {
    for (std::size_t i : support)
      mpz_submul(d_(i, target).get_mpz_t(), q.get_mpz_t(), d_(i, source).get_mpz_t());
    if (track_v_) {
      for (std::size_t i = 0; i < v_.rows(); ++i) {
        if (v_(i, source) == 0) continue;
        mpz_submul(v_(i, target).get_mpz_t(), q.get_mpz_t(), v_(i, source).get_mpz_t());
      }
    }
  }

  IntMatrix d_;
  IntMatrix u_;
  IntMatrix v_;
  bool track_u_;
  bool track_v_;
  std::size_t rank_ = 0;
};

}  // namespace

std::size_t SmithDecomposition::rank() const {
  std::size_t r = 0;
  while (r < std::min(D.rows(), D.cols()) && D(r, r) != 0) ++r;
  return r;
}

std::vector<BigInt> SmithDecomposition::diagonal() const {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) out.push_back(D(i, i));
  return out;
}

SmithDecomposition smith_normal_form(const IntMatrix& a) {
  SmithWorker w(a, true, true);
  w.run();
  return {std::move(w.u()), std::move(w.d()), std::move(w.v())};
}

std::vector<BigInt> invariant_factors(const IntMatrix& a) {
  SmithWorker w(a, false, false);
  w.run();
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < w.rank(); ++i) out.push_back(w.d()(i, i));
  return out;
}

IntMatrix kernel_basis(const IntMatrix& a) {
  SmithWorker w(a, false, true);
  w.run();
  return w.v().column_range(w.rank(), a.cols() - w.rank());
}

std::optional<IntMatrix> coordinates_in_basis(const IntMatrix& basis, const IntMatrix& targets) {
  if (basis.rows() != targets.rows())
    throw Error(ErrorKind::InvalidInput, "basis and targets live in different ambient spaces");
  SmithWorker w(basis, true, true);
  w.run();
  const std::size_t k = basis.cols();
  if (w.rank() != k) throw Error(ErrorKind::InvalidInput, "basis columns are not independent");
  IntMatrix ut = w.u() * targets;
  IntMatrix y(k, targets.cols());
  for (std::size_t c = 0; c < targets.cols(); ++c) {
    for (std::size_t i = 0; i < ut.rows(); ++i) {
      const BigInt& v = ut(i, c);
      if (i < k) {
        const BigInt& di = w.d()(i, i);
        if (!mpz_divisible_p(v.get_mpz_t(), di.get_mpz_t())) return std::nullopt;
        mpz_divexact(y(i, c).get_mpz_t(), v.get_mpz_t(), di.get_mpz_t());
      } else if (v != 0) {
        return std::nullopt;
      }
    }
  }
  return w.v() * y;
}

IntMatrix column_span_basis(const IntMatrix& a) {
  IntMatrix m = a;
  const std::size_t cols = m.cols();
  std::size_t pc = 0;
  auto combine = [&](std::size_t p, std::size_t j, std::size_t r) {
    // Unimodular column transform sending (m(r,p), m(r,j)) to (g, 0).
    BigInt x = m(r, p), y = m(r, j), g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    BigInt xg = x / g, yg = y / g;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      BigInt cp = m(i, p), cj = m(i, j);
      m(i, p) = s * cp + t * cj;
      m(i, j) = -yg * cp + xg * cj;
    }
  };
  for (std::size_t r = 0; r < m.rows() && pc < cols; ++r) {
    for (std::size_t j = pc + 1; j < cols; ++j) {
      if (m(r, j) == 0) continue;
      if (m(r, pc) == 0) {
        for (std::size_t i = 0; i < m.rows(); ++i) swap(m(i, pc), m(i, j));
        continue;
      }
      combine(pc, j, r);
    }
    if (m(r, pc) != 0) ++pc;
  }
  return m.column_range(0, pc);
}

namespace {

// Fraction-free elimination; returns the rank and, for square input, the determinant.
std::size_t bareiss(IntMatrix& m, BigInt* det) {
  const std::size_t rows = m.rows(), cols = m.cols();
  BigInt prev = 1;
  int sign = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) {
      if (det) *det = 0;
      continue;
    }
    if (piv != r) {
      for (std::size_t j = 0; j < cols; ++j) swap(m(piv, j), m(r, j));
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        BigInt v = m(i, j) * m(r, c);
        mpz_submul(v.get_mpz_t(), m(i, c).get_mpz_t(), m(r, j).get_mpz_t());
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  if (det) *det = (r == rows && rows == cols) ? BigInt(sign * prev) : BigInt(0);
  return r;
}

}  // namespace

std::size_t rank(const IntMatrix& a) {
  IntMatrix m = a;
  return bareiss(m, nullptr);
}

BigInt determinant(const IntMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "determinant of non-square matrix");
  if (a.rows() == 0) return 1;
  IntMatrix m = a;
  BigInt det;
  bareiss(m, &det);
  return det;
}

// ---------------------------------------------------------------------------
// AbelianGroup

AbelianGroup::AbelianGroup(std::size_t rank, std::vector<BigInt> cyclic_orders) : rank_(rank) {
  std::vector<BigInt> orders;
  for (auto& c : cyclic_orders) {
    BigInt v = abs(c);
    if (v == 0) ++rank_;
    else if (v != 1) orders.push_back(std::move(v));
  }
  // gcd/lcm sweep turns any list of cyclic orders into a divisibility chain
  for (std::size_t i = 0; i < orders.size(); ++i) {
    for (std::size_t j = i + 1; j < orders.size(); ++j) {
      BigInt g = gcd(orders[i], orders[j]);
      BigInt l = orders[i] / g * orders[j];
      orders[i] = g;
      orders[j] = l;
    }
  }
  for (auto& o : orders)
    if (o != 1) torsion_.push_back(std::move(o));
}

AbelianGroup AbelianGroup::elementary(const BigInt& p, std::size_t count) {
  return AbelianGroup(0, std::vector<BigInt>(count, p));
}

BigInt AbelianGroup::torsion_order() const {
  BigInt prod = 1;
  for (const auto& t : torsion_) prod *= t;
  return prod;
}

std::size_t AbelianGroup::p_rank(const BigInt& p) const {
  return static_cast<std::size_t>(std::count_if(torsion_.begin(), torsion_.end(), [&](const BigInt& t) {
    return mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t()) != 0;
  }));
}

std::vector<std::pair<BigInt, unsigned>> AbelianGroup::prime_power_view() const {
  std::vector<std::pair<BigInt, unsigned>> out;
  for (BigInt t : torsion_) {
    for (BigInt q = 2; q * q <= t; ++q) {
      unsigned e = 0;
      while (mpz_divisible_p(t.get_mpz_t(), q.get_mpz_t())) {
        t /= q;
        ++e;
      }
      if (e) out.emplace_back(q, e);
    }
    if (t > 1) out.emplace_back(t, 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

AbelianGroup AbelianGroup::operator+(const AbelianGroup& other) const {
  std::vector<BigInt> orders = torsion_;
  orders.insert(orders.end(), other.torsion_.begin(), other.torsion_.end());
  return AbelianGroup(rank_ + other.rank_, std::move(orders));
}

std::string AbelianGroup::to_string() const {
  std::vector<std::string> terms;
  if (rank_ == 1) terms.emplace_back("Z");
  else if (rank_ > 1) terms.push_back("Z^" + std::to_string(rank_));
  auto view = prime_power_view();
  for (std::size_t i = 0; i < view.size();) {
    std::size_t j = i;
    while (j < view.size() && view[j] == view[i]) ++j;
    BigInt order;
    mpz_pow_ui(order.get_mpz_t(), view[i].first.get_mpz_t(), view[i].second);
    const std::size_t count = j - i;
    if (count == 1) terms.push_back("Z/" + order.get_str());
    else terms.push_back("(Z/" + order.get_str() + ")^" + std::to_string(count));
    i = j;
  }
  if (terms.empty()) return "0";
  std::string out = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) out += " + " + terms[k];
  return out;
}

AbelianGroup lattice_quotient(const IntMatrix& ambient_basis, const IntMatrix& sub_generators) {
  auto coords = coordinates_in_basis(ambient_basis, sub_generators);
  if (!coords)
    throw Error(ErrorKind::NotASublattice, "generators do not lie in the ambient lattice");
  std::vector<BigInt> factors = invariant_factors(*coords);
  const std::size_t free_rank = ambient_basis.cols() - factors.size();
  return AbelianGroup(free_rank, std::move(factors));
}

// ---------------------------------------------------------------------------
// IntPolynomial

IntPolynomial::IntPolynomial(std::vector<BigInt> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coefficients) {
  for (long c : coefficients) coeffs_.emplace_back(c);
  trim();
}

IntPolynomial IntPolynomial::monomial(std::size_t degree, const BigInt& coefficient) {
  std::vector<BigInt> c(degree + 1);
  c[degree] = coefficient;
  return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigInt IntPolynomial::coefficient(std::size_t k) const {
  return k < coeffs_.size() ? coeffs_[k] : BigInt(0);
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      mpz_addmul(c[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
  return IntPolynomial(std::move(c));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(i) + b.coefficient(i);
  return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(i) - b.coefficient(i);
  return IntPolynomial(std::move(c));
}

std::pair<IntPolynomial, IntPolynomial> IntPolynomial::divmod_monic(const IntPolynomial& divisor) const {
  if (!divisor.is_monic()) throw Error(ErrorKind::InvalidInput, "divisor is not monic");
  std::vector<BigInt> rem = coeffs_;
  const std::size_t dd = divisor.coeffs_.size() - 1;
  if (rem.size() <= dd) return {IntPolynomial{}, *this};
  std::vector<BigInt> quot(rem.size() - dd);
  for (std::size_t k = rem.size(); k-- > dd;) {
    const BigInt q = rem[k];
    if (q == 0) continue;
    quot[k - dd] = q;
    for (std::size_t j = 0; j <= dd; ++j)
      mpz_submul(rem[k - dd + j].get_mpz_t(), q.get_mpz_t(), divisor.coeffs_[j].get_mpz_t());
  }
  return {IntPolynomial(std::move(quot)), IntPolynomial(std::move(rem))};
}

std::string IntPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const BigInt& c = coeffs_[k];
    if (c == 0) continue;
    BigInt mag = abs(c);
    if (out.empty()) out += c < 0 ? "-" : "";
    else out += c < 0 ? " - " : " + ";
    if (mag != 1 || k == 0) out += mag.get_str();
    if (k >= 1) out += "x";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out;
}

IntPolynomial charpoly(const IntMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  std::vector<BigInt> c(n + 1);
  c[n] = 1;
  IntMatrix am(n, n);  // A * M_{k-1}, starting from M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix mk = am;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    am = a * mk;
    BigInt tr = am.trace();
    if (!mpz_divisible_ui_p(tr.get_mpz_t(), k))
      throw Error(ErrorKind::NonIntegral, "Faddeev-LeVerrier trace not divisible");
    mpz_divexact_ui(c[n - k].get_mpz_t(), tr.get_mpz_t(), k);
    c[n - k] = -c[n - k];
  }
  return IntPolynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Exterior powers

std::vector<std::uint32_t> index_subsets(std::size_t n, std::size_t k) {
  std::vector<std::uint32_t> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    std::uint32_t mask = 0;
    for (std::size_t i : idx) mask |= 1U << i;
    out.push_back(mask);
    // advance to next combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

namespace {

class SubsetIndex {
 public:
  explicit SubsetIndex(std::size_t n) : dense_(n <= 20) {
    if (dense_) table_.assign(std::size_t{1} << n, 0);
  }
  void set(std::uint32_t mask, std::uint32_t index) {
    if (dense_) table_[mask] = index;
    else map_[mask] = index;
  }
  std::uint32_t at(std::uint32_t mask) const { return dense_ ? table_[mask] : map_.at(mask); }

 private:
  bool dense_;
  std::vector<std::uint32_t> table_;
  std::unordered_map<std::uint32_t, std::uint32_t> map_;
};

void check_wedge_size(std::size_t n) {
  if (n > 24) throw Error(ErrorKind::DimensionTooLarge, "exterior powers limited to n <= 24");
}

}  // namespace

std::vector<IntMatrix> exterior_powers(const IntMatrix& a, std::size_t max_degree) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "exterior power of non-square matrix");
  const std::size_t n = a.rows();
  if (max_degree > n) throw Error(ErrorKind::DegreeOutOfRange, "exterior degree exceeds dimension");
  check_wedge_size(n);
  SubsetIndex index(n);
  std::vector<IntMatrix> out;
  out.push_back(IntMatrix::identity(1));
  index.set(0, 0);
  for (std::size_t k = 1; k <= max_degree; ++k) {
    std::vector<std::uint32_t> subsets = index_subsets(n, k);
    const IntMatrix& prev = out.back();
    IntMatrix cur(subsets.size(), subsets.size());
    // Laplace expansion along the smallest row index of each row subset.
    for (std::size_t ri = 0; ri < subsets.size(); ++ri) {
      const std::uint32_t rmask = subsets[ri];
      const auto r0 = static_cast<std::size_t>(std::countr_zero(rmask));
      const std::uint32_t rrest = rmask & (rmask - 1);
      const std::uint32_t prow = index.at(rrest);
      for (std::size_t ci = 0; ci < subsets.size(); ++ci) {
        const std::uint32_t cmask = subsets[ci];
        BigInt& acc = cur(ri, ci);
        std::uint32_t rest = cmask;
        std::size_t pos = 0;
        while (rest) {
          const auto c = static_cast<std::size_t>(std::countr_zero(rest));
          rest &= rest - 1;
          const BigInt& coeff = a(r0, c);
          if (coeff != 0) {
            const BigInt& minor = prev(prow, index.at(cmask & ~(1U << c)));
            if (minor != 0) {
              if (pos % 2 == 0) mpz_addmul(acc.get_mpz_t(), coeff.get_mpz_t(), minor.get_mpz_t());
              else mpz_submul(acc.get_mpz_t(), coeff.get_mpz_t(), minor.get_mpz_t());
            }
          }
          ++pos;
        }
      }
    }
    for (std::size_t i = 0; i < subsets.size(); ++i) index.set(subsets[i], static_cast<std::uint32_t>(i));
    out.push_back(std::move(cur));
  }
  return out;
}

IntMatrix wedge_power(const IntMatrix& a, std::size_t degree) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "exterior power of non-square matrix");
  if (degree > a.rows()) throw Error(ErrorKind::DegreeOutOfRange, "exterior degree exceeds dimension");
  return std::move(exterior_powers(a, degree).back());
}

BigInt wedge_trace(const IntMatrix& a, std::size_t degree) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "exterior power of non-square matrix");
  const std::size_t n = a.rows();
  if (degree > n) throw Error(ErrorKind::DegreeOutOfRange, "exterior degree exceeds dimension");
  // The sum of principal k-minors is (-1)^k times the coefficient of x^(n-k) in det(xI - a).
  BigInt c = charpoly(a).coefficient(n - degree);
  return degree % 2 == 0 ? c : BigInt(-c);
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "inverse of non-square matrix");
  BigInt det = determinant(a);
  if (abs(det) != 1) throw Error(ErrorKind::NotUnimodular, "determinant is " + det.get_str());
  // U A V = I, hence A^{-1} = V U.
  SmithDecomposition snf = smith_normal_form(a);
  return snf.V * snf.U;
}

IntMatrix contragredient(const IntMatrix& a) {
  return unimodular_inverse(a).transpose();
}

}  // namespace zncoh
