#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "zncoh/linalg.hpp"

namespace zncoh {

std::vector<long> divisors(long m);
std::vector<long> prime_factors(long m);
long euler_phi(long d);
bool is_square_free(long m);

/// Phi_d, obtained by dividing x^d - 1 by the cyclotomic polynomials of the proper divisors.
IntPolynomial cyclotomic_polynomial(long d);

/// Multiplicity of each Phi_d (d | m) in a characteristic polynomial.
struct CyclotomicCensus {
  long m = 1;
  std::map<long, std::size_t> multiplicities;

  std::size_t multiplicity(long d) const;
  /// Sum of multiplicity(d) * euler_phi(d), the dimension of the underlying matrix.
  std::size_t dimension() const;
};

/// Throws NonUnityEigenvalues unless f is a product of Phi_d with d | m.
CyclotomicCensus cyclotomic_census(const IntPolynomial& f, long m);

/// Eigenvalues exp(2 pi i a / m) recorded by their exponents a in Z/m.
struct ExponentMultiset {
  long m = 1;
  std::vector<std::size_t> counts;  // indexed by residue

  std::size_t size() const;
  /// Flat list of exponents, residues ascending.
  std::vector<long> exponents() const;
};

ExponentMultiset exponent_multiset(const CyclotomicCensus& census);

/// Number of l-subsets of the eigenvalue list whose exponent sum is divisible by d,
/// i.e. eigenvalues of the l-th exterior power that are (m/d)-th roots of unity.
BigInt count_wedge_roots(const ExponentMultiset& x, std::size_t l, long d);

/// (1/m) * sum_j trace(wedge(phi^j, l)): the rank of the invariants of the l-th
/// exterior power.
BigInt molien_rank(const IntMatrix& phi, long m, std::size_t l);

}  // namespace zncoh
