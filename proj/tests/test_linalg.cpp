#include <doctest.h>

#include <random>

#include "zncoh/error.hpp"
#include "zncoh/linalg.hpp"

using namespace zncoh;

namespace {

const IntMatrix kExample = IntMatrix::from_rows({{-1, 0, 0, 0, 0},
                                                 {0, 0, 1, 0, 0},
                                                 {0, 1, 0, 0, 0},
                                                 {0, 0, 0, 0, -1},
                                                 {0, 0, 0, 1, -1}});

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMatrix a(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = dist(rng);
  return a;
}

// Product of random elementary operations, so determinant is +-1.
IntMatrix random_unimodular(std::mt19937& rng, std::size_t n, int steps) {
  IntMatrix u = IntMatrix::identity(n);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> coeff(-2, 2);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    const int c = coeff(rng);
    for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
  }
  return u;
}

void check_smith(const IntMatrix& a) {
  const SmithDecomposition snf = smith_normal_form(a);
  CHECK(snf.U * a * snf.V == snf.D);
  CHECK(abs(determinant(snf.U)) == 1);
  CHECK(abs(determinant(snf.V)) == 1);
  const auto diag = snf.diagonal();
  for (std::size_t i = 0; i < diag.size(); ++i) {
    CHECK(diag[i] >= 0);
    if (i + 1 < diag.size() && diag[i] != 0)
      CHECK(mpz_divisible_p(diag[i + 1].get_mpz_t(), diag[i].get_mpz_t()));
    if (diag[i] == 0)
      for (std::size_t j = i; j < diag.size(); ++j) CHECK(diag[j] == 0);
  }
  for (std::size_t i = 0; i < snf.D.rows(); ++i)
    for (std::size_t j = 0; j < snf.D.cols(); ++j)
      if (i != j) CHECK(snf.D(i, j) == 0);
}

}  // namespace

TEST_CASE("smith form of diag(2,6) is itself") {
  const auto snf = smith_normal_form(IntMatrix::from_rows({{2, 0}, {0, 6}}));
  CHECK(snf.D == IntMatrix::from_rows({{2, 0}, {0, 6}}));
}

TEST_CASE("smith form of the order-3 shift matrix") {
  const IntMatrix a = IntMatrix::from_rows({{-2, -1}, {1, -1}});
  check_smith(a);
  CHECK(smith_normal_form(a).D == IntMatrix::from_rows({{1, 0}, {0, 3}}));
}

TEST_CASE("smith form on random matrices") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 40; ++trial) {
    check_smith(random_matrix(rng, 6, 6, -9, 9));
    check_smith(random_matrix(rng, 4, 7, -3, 3));
    check_smith(random_matrix(rng, 7, 3, -5, 5));
  }
  // non-chain diagonal needs the gcd/lcm repair
  check_smith(IntMatrix::from_rows({{4, 0, 0}, {0, 6, 0}, {0, 0, 10}}));
  CHECK(invariant_factors(IntMatrix::from_rows({{4, 0, 0}, {0, 6, 0}, {0, 0, 10}})) ==
        std::vector<BigInt>{2, 2, 60});
  check_smith(IntMatrix(3, 2));
  check_smith(IntMatrix(0, 3));
}

TEST_CASE("kernel bases") {
  CHECK(kernel_basis(IntMatrix(2, 2)) == IntMatrix::identity(2));
  const IntMatrix k = kernel_basis(IntMatrix::from_rows({{1, 1}}));
  REQUIRE(k.cols() == 1);
  CHECK(k(0, 0) == -k(1, 0));
  CHECK(abs(k(0, 0)) == 1);
  CHECK(kernel_basis(IntMatrix::identity(3)).cols() == 0);

  // norm of the order-2 part of the worked 5x5 example
  const IntMatrix psi = matrix_power(kExample, 3);
  const IntMatrix norm = IntMatrix::identity(5) + psi;
  const IntMatrix ker = kernel_basis(norm);
  CHECK(ker.cols() == 2);
  CHECK((norm * ker).is_zero());
  // e1 and e2 - e3 both lie in the span
  CHECK(coordinates_in_basis(ker, IntMatrix::from_rows({{1}, {0}, {0}, {0}, {0}})).has_value());
  CHECK(coordinates_in_basis(ker, IntMatrix::from_rows({{0}, {1}, {-1}, {0}, {0}})).has_value());
}

TEST_CASE("kernel lattices are saturated") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const IntMatrix a = random_matrix(rng, 3, 6, -4, 4);
    const IntMatrix k = kernel_basis(a);
    CHECK(k.cols() == 6 - rank(a));
    CHECK((a * k).is_zero());
    // pure sublattice: all invariant factors of the basis are 1
    for (const auto& f : invariant_factors(k)) CHECK(f == 1);
  }
}

TEST_CASE("lattice quotients") {
  const AbelianGroup q = lattice_quotient(IntMatrix::identity(2), IntMatrix::from_rows({{2, 0}, {0, 3}}));
  CHECK(q.rank() == 0);
  CHECK(q.torsion() == std::vector<BigInt>{6});
  CHECK(lattice_quotient(IntMatrix::identity(2), IntMatrix::from_rows({{-2, -1}, {1, -1}})).to_string() == "Z/3");

  const IntMatrix psi = matrix_power(kExample, 3);
  const IntMatrix shift = psi - IntMatrix::identity(5);
  const IntMatrix norm = IntMatrix::identity(5) + psi;
  CHECK(lattice_quotient(kernel_basis(norm), shift) == AbelianGroup::elementary(2, 1));

  CHECK_THROWS_AS(lattice_quotient(IntMatrix::from_rows({{2}, {0}}), IntMatrix::from_rows({{1}, {0}})), Error);

  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const IntMatrix w = random_matrix(rng, 3, 3, -5, 5);
    const BigInt det = determinant(w);
    if (det == 0) continue;
    CHECK(lattice_quotient(IntMatrix::identity(3), w).torsion_order() == abs(det));
  }
}

TEST_CASE("abelian group canonical form") {
  const AbelianGroup g(1, {6, 2, 1, 0});
  CHECK(g.rank() == 2);
  CHECK(g.torsion() == std::vector<BigInt>{2, 6});
  CHECK(g.to_string() == "Z^2 + (Z/2)^2 + Z/3");
  CHECK(g.p_rank(2) == 2);
  CHECK(g.p_rank(3) == 1);
  CHECK(AbelianGroup().to_string() == "0");
  CHECK(AbelianGroup(0, {3, 2}) == AbelianGroup(0, {6}));
  CHECK((AbelianGroup::free(1) + AbelianGroup::elementary(3, 2)).to_string() == "Z + (Z/3)^2");
}

TEST_CASE("characteristic polynomials") {
  CHECK(charpoly(IntMatrix::from_rows({{0, -1}, {1, -1}})) == IntPolynomial{1, 1, 1});
  CHECK(charpoly(IntMatrix::identity(3)) == IntPolynomial{-1, 3, -3, 1});
  // (x+1)(x^2-1)(x^2+x+1)
  const IntPolynomial expected = IntPolynomial{1, 1} * IntPolynomial{-1, 0, 1} * IntPolynomial{1, 1, 1};
  CHECK(charpoly(kExample) == expected);
  CHECK_THROWS_AS(charpoly(IntMatrix(2, 3)), Error);
}

TEST_CASE("polynomial arithmetic") {
  const IntPolynomial f = IntPolynomial{-1, 0, 0, 1};  // x^3 - 1
  auto [q, r] = f.divmod_monic(IntPolynomial{-1, 1});
  CHECK(q == IntPolynomial{1, 1, 1});
  CHECK(r.is_zero());
  CHECK(IntPolynomial{1, -1, 1}.to_string() == "x^2 - x + 1");
  CHECK(IntPolynomial{}.degree() == -1);
}

TEST_CASE("exterior powers") {
  const IntMatrix a = kExample;
  CHECK(wedge_power(a, 0) == IntMatrix::identity(1));
  CHECK(wedge_power(a, 5) == IntMatrix::from_rows({{determinant(a).get_si()}}));
  const IntMatrix w2 = wedge_power(a, 2);
  CHECK(w2.rows() == 10);
  // trace of the second exterior power is e_2 of the eigenvalues
  CHECK(w2.trace() == charpoly(a).coefficient(3));
  CHECK_THROWS_AS(wedge_power(a, 6), Error);
  const auto subsets = index_subsets(4, 2);
  CHECK(subsets == std::vector<std::uint32_t>{0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100});
}

TEST_CASE("exterior powers are functorial and match charpoly traces") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const IntMatrix a = random_unimodular(rng, 5, 12);
    const IntMatrix b = random_unimodular(rng, 5, 12);
    for (std::size_t g = 0; g <= 3; ++g) CHECK(wedge_power(a * b, g) == wedge_power(a, g) * wedge_power(b, g));
    const IntPolynomial f = charpoly(a);
    const auto powers = exterior_powers(a, 5);
    for (std::size_t g = 0; g <= 5; ++g) {
      const BigInt c = f.coefficient(5 - g);
      CHECK(powers[g].trace() == (g % 2 == 0 ? c : BigInt(-c)));
      CHECK(wedge_trace(a, g) == powers[g].trace());
    }
  }
  const IntMatrix c = random_matrix(rng, 4, 4, -3, 3);
  for (std::size_t g = 0; g <= 4; ++g) {
    // compare against direct minors for a non-unimodular matrix
    const IntMatrix w = wedge_power(c, g);
    const auto subsets = index_subsets(4, g);
    for (std::size_t i = 0; i < subsets.size(); ++i)
      for (std::size_t j = 0; j < subsets.size(); ++j) {
        IntMatrix minor(g, g);
        std::size_t ri = 0;
        for (std::size_t r = 0; r < 4; ++r) {
          if (!(subsets[i] >> r & 1U)) continue;
          std::size_t ci = 0;
          for (std::size_t col = 0; col < 4; ++col)
            if (subsets[j] >> col & 1U) minor(ri, ci++) = c(r, col);
          ++ri;
        }
        CHECK(w(i, j) == determinant(minor));
      }
  }
}

TEST_CASE("contragredient and inverse") {
  CHECK(contragredient(IntMatrix::identity(3)) == IntMatrix::identity(3));
  const IntMatrix a = IntMatrix::from_rows({{0, -1}, {1, -1}});
  const IntMatrix c = contragredient(a);
  CHECK(c == IntMatrix::from_rows({{-1, -1}, {1, 0}}));
  CHECK(a * c.transpose() == IntMatrix::identity(2));
  CHECK(contragredient(IntMatrix::from_rows({{-1}})) == IntMatrix::from_rows({{-1}}));
  CHECK_THROWS_AS(contragredient(IntMatrix::from_rows({{2, 0}, {0, 1}})), Error);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const IntMatrix u = random_unimodular(rng, 6, 20);
    CHECK(u * unimodular_inverse(u) == IntMatrix::identity(6));
  }
}

TEST_CASE("column span basis") {
  const IntMatrix gens = IntMatrix::from_rows({{2, 4, 6}, {0, 3, 3}});
  const IntMatrix basis = column_span_basis(gens);
  CHECK(basis.cols() == 2);
  CHECK(coordinates_in_basis(basis, gens).has_value());
  CHECK(abs(determinant(basis)) == 6);
}

TEST_CASE("determinant and rank") {
  CHECK(determinant(IntMatrix::from_rows({{2, 1}, {1, 1}})) == 1);
  CHECK(determinant(IntMatrix::from_rows({{0, 1}, {1, 0}})) == -1);
  CHECK(determinant(kExample) == 1);
  CHECK(rank(IntMatrix::from_rows({{1, 2}, {2, 4}})) == 1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(2, 5) == 0);
  CHECK(binomial(-1, 0) == 0);
}
