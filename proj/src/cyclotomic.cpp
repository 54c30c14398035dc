#include "zncoh/cyclotomic.hpp"

#include <numeric>

#include "zncoh/error.hpp"

namespace zncoh {

std::vector<long> divisors(long m) {
  if (m < 1) throw Error(ErrorKind::InvalidInput, "divisors of a non-positive integer");
  std::vector<long> out;
  for (long d = 1; d <= m; ++d)
    if (m % d == 0) out.push_back(d);
  return out;
}

std::vector<long> prime_factors(long m) {
  std::vector<long> out;
  for (long q = 2; q * q <= m; ++q) {
    if (m % q != 0) continue;
    out.push_back(q);
    while (m % q == 0) m /= q;
  }
  if (m > 1) out.push_back(m);
  return out;
}

long euler_phi(long d) {
  long result = d;
  for (long q : prime_factors(d)) result = result / q * (q - 1);
  return result;
}

bool is_square_free(long m) {
  if (m < 1) return false;
  for (long q = 2; q * q <= m; ++q)
    if (m % (q * q) == 0) return false;
  return true;
}

IntPolynomial cyclotomic_polynomial(long d) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "cyclotomic index must be positive");
  IntPolynomial f = IntPolynomial::monomial(static_cast<std::size_t>(d)) - IntPolynomial{1};
  for (long e : divisors(d)) {
    if (e == d) break;
    auto [q, rem] = f.divmod_monic(cyclotomic_polynomial(e));
    f = std::move(q);
  }
  return f;
}

std::size_t CyclotomicCensus::multiplicity(long d) const {
  auto it = multiplicities.find(d);
  return it == multiplicities.end() ? 0 : it->second;
}

std::size_t CyclotomicCensus::dimension() const {
  std::size_t total = 0;
  for (const auto& [d, mu] : multiplicities) total += mu * static_cast<std::size_t>(euler_phi(d));
  return total;
}

CyclotomicCensus cyclotomic_census(const IntPolynomial& f, long m) {
  if (!f.is_monic()) throw Error(ErrorKind::InvalidInput, "census needs a monic polynomial");
  CyclotomicCensus census;
  census.m = m;
  IntPolynomial rest = f;
  for (long d : divisors(m)) {
    const IntPolynomial phi = cyclotomic_polynomial(d);
    std::size_t mu = 0;
    for (;;) {
      if (rest.degree() < phi.degree()) break;
      auto [q, rem] = rest.divmod_monic(phi);
      if (!rem.is_zero()) break;
      rest = std::move(q);
      ++mu;
    }
    if (mu > 0) census.multiplicities[d] = mu;
  }
  if (rest != IntPolynomial{1})
    throw Error(ErrorKind::NonUnityEigenvalues,
                "residual factor " + rest.to_string() + " has eigenvalues outside the m-th roots of unity");
  return census;
}

std::size_t ExponentMultiset::size() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::vector<long> ExponentMultiset::exponents() const {
  std::vector<long> out;
  for (long a = 0; a < static_cast<long>(counts.size()); ++a)
    out.insert(out.end(), counts[static_cast<std::size_t>(a)], a);
  return out;
}

ExponentMultiset exponent_multiset(const CyclotomicCensus& census) {
  ExponentMultiset x;
  x.m = census.m;
  x.counts.assign(static_cast<std::size_t>(census.m), 0);
  for (const auto& [d, mu] : census.multiplicities) {
    const long step = census.m / d;
    for (long j = 1; j <= d; ++j)
      if (std::gcd(j, d) == 1) x.counts[static_cast<std::size_t>((j * step) % census.m)] += mu;
  }
  return x;
}

BigInt count_wedge_roots(const ExponentMultiset& x, std::size_t l, long d) {
  if (d < 1 || x.m % d != 0)
    throw Error(ErrorKind::NotADivisor, std::to_string(d) + " does not divide " + std::to_string(x.m));
  const std::size_t dim = x.size();
  if (l > dim) return 0;
  const auto du = static_cast<std::size_t>(d);
  // ways[c][r]: number of c-subsets chosen so far with exponent sum r mod d
  std::vector<std::vector<BigInt>> ways(l + 1, std::vector<BigInt>(du));
  ways[0][0] = 1;
  std::size_t seen = 0;
  for (long a : x.exponents()) {
    const auto shift = static_cast<std::size_t>(a % d);
    ++seen;
    for (std::size_t c = std::min(l, seen); c >= 1; --c)
      for (std::size_t r = 0; r < du; ++r)
        if (ways[c - 1][r] != 0) ways[c][(r + shift) % du] += ways[c - 1][r];
  }
  return ways[l][0];
}

BigInt molien_rank(const IntMatrix& phi, long m, std::size_t l) {
  if (!phi.is_square()) throw Error(ErrorKind::NotSquare, "action matrix must be square");
  if (l > phi.rows()) return 0;
  BigInt total = 0;
  IntMatrix power = IntMatrix::identity(phi.rows());
  for (long j = 0; j < m; ++j) {
    total += wedge_trace(power, l);
    power = power * phi;
  }
  if (!power.is_identity()) throw Error(ErrorKind::WrongOrder, "phi^m is not the identity");
  if (!mpz_divisible_ui_p(total.get_mpz_t(), static_cast<unsigned long>(m)))
    throw Error(ErrorKind::NonIntegralAverage, "trace average " + total.get_str() + "/" + std::to_string(m));
  return total / m;
}

}  // namespace zncoh
