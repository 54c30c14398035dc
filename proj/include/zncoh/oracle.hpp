#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zncoh/group_model.hpp"
#include "zncoh/linalg.hpp"

namespace zncoh {

/// Lattice with an action of Z/q given by the matrix of a generator.
struct CyclicRep {
  long q = 1;
  IntMatrix matrix;
};

/// H^alpha(Z/q; M) by the periodic resolution: invariants for alpha = 0, ker N / im(g - 1)
/// for odd alpha, ker(g - 1) / im N for even alpha > 0.
AbelianGroup cyclic_cohomology(const CyclicRep& rep, std::size_t alpha);

struct CohomologyTable {
  std::size_t max_degree = 0;
  std::vector<AbelianGroup> groups;  // index = degree
  std::string engine;                // formula-published | formula-corrected | oracle
  std::size_t stable_from = 0;       // table(l + 2) = table(l) for l >= stable_from
  std::string conditions;            // assumptions the numbers rest on

  friend bool operator==(const CohomologyTable&, const CohomologyTable&) = default;
};

inline constexpr const char* kOracleConditions = "conditional on collapse+splitting";

/// H^l = sum over gamma of H^(l - gamma)(Z/m; wedge^gamma of the dual lattice).
CohomologyTable e2_table(const GroupSpec& spec, std::size_t max_degree);

/// e2_table of Z^n semidirect Z/q, generated by phi^(m/q).
CohomologyTable subgroup_oracle(const GroupSpec& spec, long q, std::size_t max_degree);

/// Number of invariant factors divisible by p, per degree.
std::vector<std::size_t> p_part(const CohomologyTable& table, long p);

}  // namespace zncoh
