#include <doctest.h>

#include <random>

#include "zncoh/cyclotomic.hpp"
#include "zncoh/error.hpp"

using namespace zncoh;

namespace {

const IntMatrix kExample = IntMatrix::from_rows({{-1, 0, 0, 0, 0},
                                                 {0, 0, 1, 0, 0},
                                                 {0, 1, 0, 0, 0},
                                                 {0, 0, 0, 0, -1},
                                                 {0, 0, 0, 1, -1}});

IntMatrix companion(const IntPolynomial& f) {
  const auto n = static_cast<std::size_t>(f.degree());
  IntMatrix c(n, n);
  for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = -f.coefficient(i);
  return c;
}

IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  IntMatrix out(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return out;
}

BigInt brute_force_roots(const std::vector<long>& exps, std::size_t l, long d) {
  BigInt count = 0;
  for (std::uint32_t mask : index_subsets(exps.size(), l)) {
    long sum = 0;
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (mask >> i & 1U) sum += exps[i];
    if (sum % d == 0) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == IntPolynomial{-1, 1});
  CHECK(cyclotomic_polynomial(2) == IntPolynomial{1, 1});
  CHECK(cyclotomic_polynomial(6) == IntPolynomial{1, -1, 1});
  CHECK(cyclotomic_polynomial(5) == IntPolynomial{1, 1, 1, 1, 1});
  CHECK(cyclotomic_polynomial(15).degree() == 8);
  for (long d = 1; d <= 30; ++d) CHECK(cyclotomic_polynomial(d).degree() == euler_phi(d));
}

TEST_CASE("number theory helpers") {
  CHECK(divisors(6) == std::vector<long>{1, 2, 3, 6});
  CHECK(prime_factors(30) == std::vector<long>{2, 3, 5});
  CHECK(is_square_free(30));
  CHECK_FALSE(is_square_free(4));
  CHECK(euler_phi(10) == 4);
}

TEST_CASE("census") {
  const CyclotomicCensus a = cyclotomic_census(IntPolynomial{1, 1, 1}, 6);
  CHECK(a.multiplicities == std::map<long, std::size_t>{{3, 1}});
  const CyclotomicCensus b = cyclotomic_census(charpoly(IntMatrix::identity(4)), 5);
  CHECK(b.multiplicities == std::map<long, std::size_t>{{1, 4}});
  const CyclotomicCensus c = cyclotomic_census(charpoly(kExample), 6);
  CHECK(c.multiplicities == std::map<long, std::size_t>{{1, 1}, {2, 2}, {3, 1}});
  CHECK(c.dimension() == 5);
  // x^2 + 1 has order-4 eigenvalues, not 6th roots of unity
  CHECK_THROWS_AS(cyclotomic_census(IntPolynomial{1, 0, 1}, 6), Error);
  try {
    cyclotomic_census(IntPolynomial{1, 0, 1}, 6);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonUnityEigenvalues);
  }
}

TEST_CASE("exponent multisets") {
  CyclotomicCensus c;
  c.m = 2;
  c.multiplicities = {{2, 1}};
  CHECK(exponent_multiset(c).counts == std::vector<std::size_t>{0, 1});
  c.m = 6;
  c.multiplicities = {{3, 1}};
  CHECK(exponent_multiset(c).counts == std::vector<std::size_t>{0, 0, 1, 0, 1, 0});
  c.multiplicities = {{1, 2}};
  CHECK(exponent_multiset(c).counts == std::vector<std::size_t>{2, 0, 0, 0, 0, 0});
  // Galois closure: equal counts on residues of equal order
  c.multiplicities = {{6, 2}, {2, 1}, {3, 3}};
  const ExponentMultiset x = exponent_multiset(c);
  CHECK(x.counts[1] == x.counts[5]);
  CHECK(x.counts[2] == x.counts[4]);
  CHECK(x.size() == c.dimension());
}

TEST_CASE("wedge root counts") {
  // r-block of the worked example at p = 2: eigenvalues of order 3
  CyclotomicCensus c;
  c.m = 6;
  c.multiplicities = {{3, 1}};
  const ExponentMultiset x = exponent_multiset(c);
  CHECK(count_wedge_roots(x, 0, 3) == 1);
  CHECK(count_wedge_roots(x, 1, 3) == 0);
  CHECK(count_wedge_roots(x, 2, 3) == 1);
  CHECK(count_wedge_roots(x, 3, 3) == 0);
  CyclotomicCensus sign;
  sign.m = 2;
  sign.multiplicities = {{2, 1}};
  CHECK(count_wedge_roots(exponent_multiset(sign), 1, 2) == 0);
  CHECK(count_wedge_roots(exponent_multiset(sign), 0, 2) == 1);
  CHECK_THROWS_AS(count_wedge_roots(x, 1, 4), Error);
}

TEST_CASE("molien ranks") {
  for (std::size_t l = 0; l <= 4; ++l) CHECK(molien_rank(IntMatrix::identity(4), 3, l) == binomial(4, l));
  CHECK(molien_rank(kExample, 6, 2) == 2);
  CHECK(molien_rank(kExample, 6, 5) == 1);
  const long expected[] = {1, 1, 2, 2, 1, 1, 0};
  const ExponentMultiset x = exponent_multiset(cyclotomic_census(charpoly(kExample), 6));
  for (std::size_t l = 0; l <= 6; ++l) {
    CHECK(molien_rank(kExample, 6, l) == expected[l]);
    CHECK(count_wedge_roots(x, l, 6) == expected[l]);
  }
}

TEST_CASE("dynamic program matches subset enumeration on random root-of-unity matrices") {
  std::mt19937 rng(31);
  const long moduli[] = {2, 3, 5, 6, 10, 15};
  for (int trial = 0; trial < 40; ++trial) {
    const long m = moduli[trial % 6];
    const auto divs = divisors(m);
    std::vector<IntMatrix> blocks;
    std::size_t n = 0;
    while (n < 3) {
      const long d = divs[std::uniform_int_distribution<std::size_t>(0, divs.size() - 1)(rng)];
      IntMatrix b = companion(cyclotomic_polynomial(d));
      if (n + b.rows() > 8) break;
      n += b.rows();
      blocks.push_back(std::move(b));
    }
    const IntMatrix phi = block_diagonal(blocks);
    const ExponentMultiset x = exponent_multiset(cyclotomic_census(charpoly(phi), m));
    const std::vector<long> exps = x.exponents();
    BigInt alternating = 0, det_average = 0;
    for (std::size_t l = 0; l <= n; ++l) {
      for (long d : divs) CHECK(count_wedge_roots(x, l, d) == brute_force_roots(exps, l, d));
      const BigInt h = count_wedge_roots(x, l, m);
      CHECK(h == molien_rank(phi, m, l));
      alternating += l % 2 == 0 ? h : BigInt(-h);
    }
    // sum_l (-1)^l H(l, m) = (1/m) sum_j det(I - phi^j)
    IntMatrix power = IntMatrix::identity(n);
    for (long j = 0; j < m; ++j) {
      det_average += determinant(IntMatrix::identity(n) - power);
      power = power * phi;
    }
    CHECK(alternating * m == det_average);
  }
}

TEST_CASE("wedge root count at rank 24 stays polynomial") {
  CyclotomicCensus c;
  c.m = 6;
  c.multiplicities = {{1, 4}, {2, 4}, {3, 3}, {6, 5}};
  REQUIRE(c.dimension() == 24);
  const ExponentMultiset x = exponent_multiset(c);
  const BigInt h = count_wedge_roots(x, 12, 6);
  CHECK(h > 0);
  CHECK(h < binomial(24, 12));
}
