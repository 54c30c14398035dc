#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zncoh/cyclotomic.hpp"
#include "zncoh/linalg.hpp"

namespace zncoh {

/// Z^n semidirect Z/m, the generator acting on Z^n by phi.
struct GroupSpec {
  std::string name;
  std::size_t n = 0;
  long m = 1;
  IntMatrix phi;
  // filled in by validate()
  std::vector<long> primes;
  long order = 0;  // order of phi, a divisor of m
};

/// Checks shape, square-freeness of m, det phi = +-1 and phi^m = I.
GroupSpec validate(GroupSpec spec);

/// Per-prime splitting Z^n ~ Z^r + Z[Z/p]^s + I^t as a Z/p-module, with phi restricted
/// to phi-invariant lattices carrying the trivial part (r) and the augmentation-ideal
/// part (t).
struct RstDecomposition {
  long p = 0;
  std::size_t r = 0;
  std::size_t s = 0;
  std::size_t t = 0;
  IntMatrix r_basis;  // n x r, columns span the trivial block
  IntMatrix t_basis;  // n x (p-1)t
  IntMatrix phi_r;
  IntMatrix phi_t;
};

RstDecomposition rst_decompose(const GroupSpec& spec, long p);

struct IsotropyData {
  long p = 0;
  std::vector<long> divisors;     // D: divisors d of m/p with m_d > 0
  std::map<long, std::size_t> m;  // every d | m/p -> eigenvalue count
  std::map<long, std::size_t> k;  // every d | m/p -> m_d / (p-1)

  std::size_t k_of(long d) const;
};

IsotropyData isotropy_data(const GroupSpec& spec, long p, const RstDecomposition& rst);

struct FreeActionReport {
  std::map<long, bool> per_prime;
  bool overall = true;
};

FreeActionReport free_outside_origin(const GroupSpec& spec);

struct SubgroupCensus {
  /// Conjugacy classes of order-p subgroups of Z^n semidirect Z/p, |ker N / im(psi - 1)|.
  std::map<long, BigInt> order_p_classes;
  /// p (p^{n/(p-1)} - 1) / m when that is an integer; informational only.
  std::map<long, std::optional<BigInt>> closed_form;
  BigInt whole_group = 1;
};

SubgroupCensus max_finite_subgroup_census(const GroupSpec& spec);

}  // namespace zncoh
