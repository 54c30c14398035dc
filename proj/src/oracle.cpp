#include "zncoh/oracle.hpp"

#include "zncoh/cyclotomic.hpp"
#include "zncoh/error.hpp"

namespace zncoh {

namespace {

IntMatrix norm_of(const IntMatrix& g, long q) {
  IntMatrix norm(g.rows(), g.cols());
  IntMatrix power = IntMatrix::identity(g.rows());
  for (long i = 0; i < q; ++i) {
    norm = norm + power;
    power = power * g;
  }
  if (!power.is_identity())
    throw Error(ErrorKind::WrongOrder, "generator does not have order dividing " + std::to_string(q));
  return norm;
}

std::vector<BigInt> nontrivial(std::vector<BigInt> factors) {
  std::erase_if(factors, [](const BigInt& f) { return f == 1; });
  return factors;
}

// The three E2 columns of one coefficient lattice. Because ker N and ker(g - 1) are
// saturated and have the rational dimension of im(g - 1) and im N respectively, the
// positive-degree groups are the torsion of coker(g - 1) and coker N.
struct CyclicColumns {
  std::size_t invariant_rank = 0;
  std::vector<BigInt> odd;
  std::vector<BigInt> even;
};

CyclicColumns cyclic_columns(const IntMatrix& shift, const IntMatrix& norm) {
  CyclicColumns c;
  const std::vector<BigInt> shift_factors = invariant_factors(shift);
  c.invariant_rank = shift.cols() - shift_factors.size();
  c.odd = nontrivial(shift_factors);
  c.even = nontrivial(invariant_factors(norm));
  return c;
}

}  // namespace

AbelianGroup cyclic_cohomology(const CyclicRep& rep, std::size_t alpha) {
  if (!rep.matrix.is_square()) throw Error(ErrorKind::NotSquare, "representation matrix must be square");
  const std::size_t k = rep.matrix.rows();
  const IntMatrix shift = rep.matrix - IntMatrix::identity(k);
  const IntMatrix norm = norm_of(rep.matrix, rep.q);
  if (!(norm * shift).is_zero() || !(shift * norm).is_zero())
    throw Error(ErrorKind::InclusionViolated, "N (g - 1) is not zero");
  if (alpha == 0) return AbelianGroup::free(kernel_basis(shift).cols());
  if (alpha % 2 == 1) return lattice_quotient(kernel_basis(norm), shift);
  return lattice_quotient(kernel_basis(shift), norm);
}

CohomologyTable e2_table(const GroupSpec& spec, std::size_t max_degree) {
  const std::size_t n = spec.n;
  if (n > 24) throw Error(ErrorKind::DimensionTooLarge, "oracle refuses n = " + std::to_string(n) + " > 24");
  const std::size_t top = std::min(max_degree, n);

  // Exterior powers of every power of the dual action, shared across degrees.
  const IntMatrix dual = contragredient(spec.phi);
  std::vector<std::vector<IntMatrix>> powers;
  IntMatrix g = IntMatrix::identity(n);
  for (long j = 0; j < spec.m; ++j) {
    powers.push_back(exterior_powers(g, top));
    g = g * dual;
  }
  if (!g.is_identity()) throw Error(ErrorKind::WrongOrder, "phi^m is not the identity");

  std::vector<CyclicColumns> columns;
  for (std::size_t gamma = 0; gamma <= top; ++gamma) {
    const IntMatrix& generator = spec.m > 1 ? powers[1][gamma] : powers[0][gamma];
    const std::size_t dim = generator.rows();
    IntMatrix norm(dim, dim);
    for (const auto& family : powers) norm = norm + family[gamma];
    columns.push_back(cyclic_columns(generator - IntMatrix::identity(dim), norm));
  }

  CohomologyTable table;
  table.max_degree = max_degree;
  table.engine = "oracle";
  table.stable_from = n + 1;
  table.conditions = kOracleConditions;
  for (std::size_t l = 0; l <= max_degree; ++l) {
    std::size_t free_rank = 0;
    std::vector<BigInt> torsion;
    for (std::size_t gamma = 0; gamma <= std::min(l, top); ++gamma) {
      const std::size_t alpha = l - gamma;
      const CyclicColumns& c = columns[gamma];
      if (alpha == 0) free_rank += c.invariant_rank;
      else if (alpha % 2 == 1) torsion.insert(torsion.end(), c.odd.begin(), c.odd.end());
      else torsion.insert(torsion.end(), c.even.begin(), c.even.end());
    }
    for (const auto& f : torsion) {
      if (!mpz_divisible_p(BigInt(spec.m).get_mpz_t(), f.get_mpz_t()) || !is_square_free(f.get_si()))
        throw Error(ErrorKind::TorsionExponentViolation,
                    "degree " + std::to_string(l) + " has invariant factor " + f.get_str());
    }
    table.groups.emplace_back(free_rank, std::move(torsion));
  }
  return table;
}

CohomologyTable subgroup_oracle(const GroupSpec& spec, long q, std::size_t max_degree) {
  if (q < 1 || spec.m % q != 0)
    throw Error(ErrorKind::NotADivisor, std::to_string(q) + " does not divide " + std::to_string(spec.m));
  GroupSpec sub = spec;
  sub.m = q;
  sub.phi = matrix_power(spec.phi, static_cast<std::size_t>(spec.m / q));
  sub.primes = prime_factors(q);
  return e2_table(sub, max_degree);
}

std::vector<std::size_t> p_part(const CohomologyTable& table, long p) {
  std::vector<std::size_t> out;
  for (const auto& g : table.groups) out.push_back(g.p_rank(BigInt(p)));
  return out;
}

}  // namespace zncoh
