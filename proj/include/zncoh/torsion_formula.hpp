#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "zncoh/cyclotomic.hpp"
#include "zncoh/group_model.hpp"

namespace zncoh {

enum class TorsionVariant { Published, Corrected };

/// Degree bound on sum(i_d) in the corrected orbit count.
enum class OrbitCutoff { HalfDegree, DegreeMinusOne };

std::string_view to_string(TorsionVariant v);
std::string_view to_string(OrbitCutoff c);

struct ThetaContext {
  long p = 0;
  long m = 1;
  std::size_t s = 0;
  std::vector<long> divisors;        // D
  std::map<long, std::size_t> k;     // k_d for d in D
  TorsionVariant variant = TorsionVariant::Corrected;
  OrbitCutoff cutoff = OrbitCutoff::HalfDegree;
};

/// Number of k-tuples with entries in [0, p-1] summing to i (inclusion-exclusion).
BigInt bounded_composition_count(std::size_t k, long p, long i);

/// T(A, beta) in the selected variant; throws NonIntegralOrbitCount if the orbit-count
/// fraction does not clear.
BigInt theta_coefficient(const ThetaContext& ctx, const std::vector<long>& subset, long beta);

/// Per-prime overrides that reproduce a worked evaluation which departs from the general
/// published formula.
struct PublishedPins {
  std::optional<std::size_t> tau_max;                // cap on the s-block shift index
  std::map<long, std::vector<BigInt>> h_override;    // d -> H(l1, d, Z^r) for l1 = 0, 1, ...
};

struct TorsionOptions {
  TorsionVariant variant = TorsionVariant::Corrected;
  OrbitCutoff cutoff = OrbitCutoff::HalfDegree;
  std::map<long, PublishedPins> pins;  // consulted only by the published variant
};

/// Everything the assembly needs for one prime, computed once.
struct PrimeData {
  RstDecomposition rst;
  IsotropyData isotropy;
  ExponentMultiset r_exponents;  // eigenvalue exponents of phi_r, modulus m
};

PrimeData prime_data(const GroupSpec& spec, long p);

/// Exponent of p in the torsion of H^l.
BigInt assemble_p_torsion(const GroupSpec& spec, const PrimeData& data, std::size_t l,
                          const TorsionOptions& options);
BigInt assemble_p_torsion(const GroupSpec& spec, long p, std::size_t l, const TorsionOptions& options);

/// Closed sum for m = p prime (D = {1}, k_1 = t, H(l1, 1, Z^r) = C(r, l1)).
BigInt one_prime_theta(const GroupSpec& spec, std::size_t l, TorsionVariant variant,
                       OrbitCutoff cutoff = OrbitCutoff::HalfDegree);

/// Rank of the free part of H^delta of Z[Z/p]^s, counted over tuples not all in {0, p}.
BigInt s_delta(std::size_t s, long p, std::size_t delta);

}  // namespace zncoh
