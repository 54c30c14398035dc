#include "zncoh/group_model.hpp"

#include "zncoh/error.hpp"

namespace zncoh {

namespace {

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  return hstack(a.transpose(), b.transpose()).transpose();
}

IntMatrix evaluate(const IntPolynomial& f, const IntMatrix& x) {
  const std::size_t n = x.rows();
  IntMatrix acc(n, n);
  for (long k = f.degree(); k >= 0; --k) {
    acc = acc * x;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += f.coefficient(static_cast<std::size_t>(k));
  }
  return acc;
}

std::size_t count_divisible(const AbelianGroup& g, long p) {
  return g.p_rank(BigInt(p));
}

void require_elementary(const AbelianGroup& g, long p, const char* what) {
  if (g.rank() != 0)
    throw Error(ErrorKind::BadInvariantFactors, std::string(what) + " has a free part");
  for (const auto& f : g.torsion())
    if (f != p)
      throw Error(ErrorKind::BadInvariantFactors,
                  std::string(what) + " has invariant factor " + f.get_str() + ", expected " +
                      std::to_string(p));
}

// Action of the order-p subgroup: psi = phi^(m/p), N = 1 + psi + ... + psi^(p-1).
struct PrimeAction {
  IntMatrix psi;
  IntMatrix shift;  // psi - I
  IntMatrix norm;
};

PrimeAction prime_action(const GroupSpec& spec, long p) {
  PrimeAction a;
  const std::size_t n = spec.n;
  a.psi = matrix_power(spec.phi, static_cast<std::size_t>(spec.m / p));
  a.shift = a.psi - IntMatrix::identity(n);
  a.norm = IntMatrix(n, n);
  IntMatrix power = IntMatrix::identity(n);
  for (long i = 0; i < p; ++i) {
    a.norm = a.norm + power;
    power = power * a.psi;
  }
  return a;
}

// Smallest phi-invariant lattice containing `v`: v, phi v, ... up to the first dependent power.
IntMatrix cyclic_span(const IntMatrix& phi, const IntMatrix& v, const IntMatrix& current) {
  IntMatrix gens = hstack(current, v);
  std::size_t rk = rank(gens);
  IntMatrix w = v;
  for (;;) {
    w = phi * w;
    IntMatrix next = hstack(gens, w);
    const std::size_t next_rank = rank(next);
    if (next_rank == rk) break;
    gens = std::move(next);
    rk = next_rank;
  }
  return column_span_basis(gens);
}

// Grows a phi-invariant sublattice of the columns of `lattice` until it has rank `target`,
// adding one Z[phi]-cyclic span at a time. `preferred` seeds are tried first.
IntMatrix invariant_block(const IntMatrix& phi, const IntMatrix& lattice,
                          const IntMatrix& preferred, std::size_t target) {
  IntMatrix block(phi.rows(), 0);
  auto try_seed = [&](const IntMatrix& seed) {
    if (block.cols() >= target) return;
    if (rank(hstack(block, seed)) == block.cols()) return;
    block = cyclic_span(phi, seed, block);
  };
  for (std::size_t j = 0; j < preferred.cols(); ++j) try_seed(preferred.column_range(j, 1));
  for (std::size_t j = 0; j < lattice.cols(); ++j) try_seed(lattice.column_range(j, 1));
  if (block.cols() != target)
    throw Error(ErrorKind::BadInvariantFactors,
                "invariant block reached rank " + std::to_string(block.cols()) + ", expected " +
                    std::to_string(target));
  return block;
}

// Basis elements of `ambient` adapted to the sublattice generated by `gens`, restricted to
// those whose multiple in the sublattice is exactly p.
IntMatrix adapted_generators(const IntMatrix& ambient, const IntMatrix& gens, long p) {
  auto coords = coordinates_in_basis(ambient, gens);
  if (!coords) throw Error(ErrorKind::NotASublattice, "generators leave the ambient lattice");
  SmithDecomposition snf = smith_normal_form(*coords);
  IntMatrix adapted = ambient * unimodular_inverse(snf.U);
  IntMatrix out(ambient.rows(), 0);
  for (std::size_t i = 0; i < std::min(snf.D.rows(), snf.D.cols()); ++i)
    if (snf.D(i, i) == p) out = hstack(out, adapted.column_range(i, 1));
  return out;
}

IntMatrix restrict_to(const IntMatrix& phi, const IntMatrix& basis) {
  auto coords = coordinates_in_basis(basis, phi * basis);
  if (!coords) throw Error(ErrorKind::NonInvariantBlock, "phi does not preserve the block");
  return *coords;
}

}  // namespace

GroupSpec validate(GroupSpec spec) {
  if (spec.m < 1) throw Error(ErrorKind::InvalidInput, "m must be a positive integer");
  if (spec.n < 1) throw Error(ErrorKind::InvalidInput, "n must be a positive integer");
  if (spec.phi.rows() != spec.n || spec.phi.cols() != spec.n)
    throw Error(ErrorKind::InvalidInput, "phi must be an n x n matrix with n = " + std::to_string(spec.n));
  if (!is_square_free(spec.m))
    throw Error(ErrorKind::NotSquareFree, "m = " + std::to_string(spec.m) + " is not square-free");
  const BigInt det = determinant(spec.phi);
  if (abs(det) != 1) throw Error(ErrorKind::NotUnimodular, "det phi = " + det.get_str());
  spec.order = 0;
  for (long d : divisors(spec.m)) {
    if (matrix_power(spec.phi, static_cast<std::size_t>(d)).is_identity()) {
      spec.order = d;
      break;
    }
  }
  if (spec.order == 0)
    throw Error(ErrorKind::WrongOrder, "phi^" + std::to_string(spec.m) + " is not the identity");
  spec.primes = prime_factors(spec.m);
  return spec;
}

RstDecomposition rst_decompose(const GroupSpec& spec, long p) {
  if (p < 2 || spec.m % p != 0 || prime_factors(p).size() != 1 || prime_factors(p)[0] != p)
    throw Error(ErrorKind::NotADivisor, std::to_string(p) + " is not a prime divisor of m");
  const std::size_t n = spec.n;
  const PrimeAction act = prime_action(spec, p);

  const IntMatrix ker_norm = kernel_basis(act.norm);
  const IntMatrix ker_shift = kernel_basis(act.shift);
  const AbelianGroup h1 = lattice_quotient(ker_norm, act.shift);
  const AbelianGroup h2 = lattice_quotient(ker_shift, act.norm);
  require_elementary(h1, p, "ker N / im(psi - 1)");
  require_elementary(h2, p, "ker(psi - 1) / im N");

  RstDecomposition out;
  out.p = p;
  out.t = h1.torsion().size();
  out.r = h2.torsion().size();
  const std::size_t rest_dim = out.r + static_cast<std::size_t>(p - 1) * out.t;
  if (rest_dim > n || (n - rest_dim) % static_cast<std::size_t>(p) != 0)
    throw Error(ErrorKind::BadInvariantFactors, "n - r - (p-1)t is not a nonnegative multiple of p");
  out.s = (n - rest_dim) / static_cast<std::size_t>(p);

  // Split along the eigenvalue orders e | m/p of phi^p; each piece is phi-invariant and the
  // pieces together have index prime to p.
  const IntMatrix phi_p = matrix_power(spec.phi, static_cast<std::size_t>(p));
  out.r_basis = IntMatrix(n, 0);
  out.t_basis = IntMatrix(n, 0);
  std::size_t t_total = 0, r_total = 0;
  for (long e : divisors(spec.m / p)) {
    const IntMatrix cut = evaluate(cyclotomic_polynomial(e), phi_p);
    const IntMatrix piece = kernel_basis(cut);
    if (piece.cols() == 0) continue;

    const IntMatrix t_lattice = kernel_basis(vstack(act.norm, cut));
    const IntMatrix t_gens = act.shift * piece;
    const AbelianGroup h1_e = lattice_quotient(t_lattice, t_gens);
    require_elementary(h1_e, p, "isotypic ker N / im(psi - 1)");
    const std::size_t t_e = count_divisible(h1_e, p);
    if (t_e > 0) {
      IntMatrix block = invariant_block(spec.phi, t_lattice, adapted_generators(t_lattice, t_gens, p),
                                        static_cast<std::size_t>(p - 1) * t_e);
      out.t_basis = hstack(out.t_basis, block);
    }

    const IntMatrix r_lattice = kernel_basis(vstack(act.shift, cut));
    const IntMatrix r_gens = act.norm * piece;
    const AbelianGroup h2_e = lattice_quotient(r_lattice, r_gens);
    require_elementary(h2_e, p, "isotypic ker(psi - 1) / im N");
    const std::size_t r_e = count_divisible(h2_e, p);
    if (r_e > 0) {
      IntMatrix block = invariant_block(spec.phi, r_lattice, adapted_generators(r_lattice, r_gens, p), r_e);
      out.r_basis = hstack(out.r_basis, block);
    }
    t_total += t_e;
    r_total += r_e;
  }
  if (t_total != out.t || r_total != out.r)
    throw Error(ErrorKind::BadInvariantFactors, "isotypic pieces do not add up to (r, t)");
  out.phi_r = restrict_to(spec.phi, out.r_basis);
  out.phi_t = restrict_to(spec.phi, out.t_basis);
  return out;
}

std::size_t IsotropyData::k_of(long d) const {
  auto it = k.find(d);
  return it == k.end() ? 0 : it->second;
}

IsotropyData isotropy_data(const GroupSpec& spec, long p, const RstDecomposition& rst) {
  if (rst.p != p) throw Error(ErrorKind::InvalidInput, "decomposition belongs to another prime");
  IsotropyData out;
  out.p = p;
  const CyclotomicCensus census = cyclotomic_census(charpoly(rst.phi_t), spec.m);
  for (const auto& [order, mu] : census.multiplicities) {
    if (order % p != 0)
      throw Error(ErrorKind::UnexpectedOrder,
                  "t-block eigenvalue of order " + std::to_string(order) + " is fixed by the order-p subgroup");
  }
  for (long d : divisors(spec.m / p)) {
    const long order = spec.m / d;
    const std::size_t md = census.multiplicity(order) * static_cast<std::size_t>(euler_phi(order));
    if (md % static_cast<std::size_t>(p - 1) != 0)
      throw Error(ErrorKind::NonIntegralK,
                  "m_" + std::to_string(d) + " = " + std::to_string(md) + " is not divisible by p - 1");
    out.m[d] = md;
    out.k[d] = md / static_cast<std::size_t>(p - 1);
    if (md > 0) out.divisors.push_back(d);
  }
  return out;
}

FreeActionReport free_outside_origin(const GroupSpec& spec) {
  FreeActionReport out;
  for (long p : spec.primes) {
    const IntMatrix psi = matrix_power(spec.phi, static_cast<std::size_t>(spec.m / p));
    const bool free = kernel_basis(psi - IntMatrix::identity(spec.n)).cols() == 0;
    out.per_prime[p] = free;
    out.overall = out.overall && free;
  }
  return out;
}

SubgroupCensus max_finite_subgroup_census(const GroupSpec& spec) {
  const FreeActionReport freeness = free_outside_origin(spec);
  if (!freeness.overall)
    throw Error(ErrorKind::NotFreeAction, "the action has nonzero fixed vectors for some prime");
  SubgroupCensus out;
  for (long p : spec.primes) {
    const PrimeAction act = prime_action(spec, p);
    const AbelianGroup h1 = lattice_quotient(kernel_basis(act.norm), act.shift);
    out.order_p_classes[p] = h1.torsion_order();
    std::optional<BigInt> closed;
    if (spec.n % static_cast<std::size_t>(p - 1) == 0) {
      BigInt power;
      mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(p), spec.n / static_cast<std::size_t>(p - 1));
      BigInt numerator = p * (power - 1);
      if (mpz_divisible_ui_p(numerator.get_mpz_t(), static_cast<unsigned long>(spec.m)))
        closed = BigInt(numerator / spec.m);
    }
    out.closed_form[p] = closed;
  }
  return out;
}

}  // namespace zncoh
