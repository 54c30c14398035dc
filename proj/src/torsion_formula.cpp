#include "zncoh/torsion_formula.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "zncoh/error.hpp"

namespace zncoh {

std::string_view to_string(TorsionVariant v) {
  return v == TorsionVariant::Published ? "published" : "corrected";
}

std::string_view to_string(OrbitCutoff c) {
  return c == OrbitCutoff::HalfDegree ? "half-degree" : "degree-minus-one";
}

BigInt bounded_composition_count(std::size_t k, long p, long i) {
  if (i < 0) return 0;
  if (k == 0) return i == 0 ? 1 : 0;
  const auto kl = static_cast<long>(k);
  BigInt total = 0;
  for (long j = 0; j <= kl && j * p <= i; ++j) {
    BigInt term = binomial(kl, j) * binomial(i - j * p + kl - 1, kl - 1);
    if (j % 2 == 0) total += term;
    else total -= term;
  }
  return total;
}

namespace {

// Coefficients of prod_d f_d(x), truncated above `limit`.
std::vector<BigInt> truncated_product(const std::vector<std::vector<BigInt>>& factors, std::size_t limit) {
  std::vector<BigInt> acc(limit + 1);
  acc[0] = 1;
  for (const auto& f : factors) {
    std::vector<BigInt> next(limit + 1);
    for (std::size_t a = 0; a <= limit; ++a) {
      if (acc[a] == 0) continue;
      for (std::size_t b = 0; b < f.size() && a + b <= limit; ++b)
        if (f[b] != 0) mpz_addmul(next[a + b].get_mpz_t(), acc[a].get_mpz_t(), f[b].get_mpz_t());
    }
    acc = std::move(next);
  }
  return acc;
}

BigInt clear_fraction(const BigInt& numerator, const BigInt& denominator) {
  if (!mpz_divisible_p(numerator.get_mpz_t(), denominator.get_mpz_t()))
    throw Error(ErrorKind::NonIntegralOrbitCount,
                "orbit count " + numerator.get_str() + "/" + denominator.get_str() + " is not an integer");
  return numerator / denominator;
}

long subset_gcd(const std::vector<long>& subset, long m, long p) {
  if (subset.empty()) return m / p;
  long g = 0;
  for (long d : subset) g = std::gcd(g, d);
  return g;
}

}  // namespace

BigInt theta_coefficient(const ThetaContext& ctx, const std::vector<long>& subset, long beta) {
  const bool published = ctx.variant == TorsionVariant::Published;
  if (beta < 0 || beta % 2 != 0) return 0;
  if (!published && beta == 0) return 0;
  if (subset.empty()) return 1;

  auto bound_of = [&](long d) {
    auto it = ctx.k.find(d);
    if (it == ctx.k.end())
      throw Error(ErrorKind::InvalidInput, "divisor " + std::to_string(d) + " is not in D");
    return it->second * static_cast<std::size_t>(ctx.p - 1);
  };
  auto in_subset = [&](long d) {
    return std::find(subset.begin(), subset.end(), d) != subset.end();
  };
  for (long d : subset) bound_of(d);

  const BigInt ratio_num = ctx.p * subset_gcd(subset, ctx.m, ctx.p);
  std::vector<std::vector<BigInt>> factors;
  if (published) {
    for (long d : ctx.divisors) {
      const std::size_t bound = bound_of(d);
      std::vector<BigInt> f(bound + 1);
      for (std::size_t i = 0; i <= bound; ++i) {
        if (in_subset(d)) f[i] = bounded_composition_count(ctx.k.at(d), ctx.p, static_cast<long>(i)) - 1;
        else f[i] = 1;
      }
      factors.push_back(std::move(f));
    }
    const std::vector<BigInt> coeffs = truncated_product(factors, static_cast<std::size_t>(beta));
    const BigInt sum = std::accumulate(coeffs.begin(), coeffs.end(), BigInt(0));
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), ratio_num.get_mpz_t(), subset.size());
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(ctx.m), subset.size());
    return clear_fraction(sum * num, den);
  }

  const long limit = ctx.cutoff == OrbitCutoff::HalfDegree ? beta / 2 : beta - 1;
  for (long d : subset) {
    const std::size_t bound = bound_of(d);
    std::vector<BigInt> f(bound + 1);
    for (std::size_t i = 1; i <= bound; ++i)
      f[i] = bounded_composition_count(ctx.k.at(d), ctx.p, static_cast<long>(i));
    factors.push_back(std::move(f));
  }
  const std::vector<BigInt> coeffs = truncated_product(factors, static_cast<std::size_t>(limit));
  const BigInt sum = std::accumulate(coeffs.begin(), coeffs.end(), BigInt(0));
  return clear_fraction(sum * ratio_num, BigInt(ctx.m));
}

PrimeData prime_data(const GroupSpec& spec, long p) {
  PrimeData data;
  data.rst = rst_decompose(spec, p);
  data.isotropy = isotropy_data(spec, p, data.rst);
  data.r_exponents = exponent_multiset(cyclotomic_census(charpoly(data.rst.phi_r), spec.m));
  return data;
}

BigInt assemble_p_torsion(const GroupSpec& spec, const PrimeData& data, std::size_t l,
                          const TorsionOptions& options) {
  const bool published = options.variant == TorsionVariant::Published;
  if (published && l == 0) return 0;
  const long p = data.rst.p;

  ThetaContext ctx;
  ctx.p = p;
  ctx.m = spec.m;
  ctx.s = data.rst.s;
  ctx.divisors = data.isotropy.divisors;
  for (long d : ctx.divisors) ctx.k[d] = data.isotropy.k_of(d);
  ctx.variant = options.variant;
  ctx.cutoff = options.cutoff;

  const PublishedPins* pins = nullptr;
  if (published) {
    auto it = options.pins.find(p);
    if (it != options.pins.end()) pins = &it->second;
  }
  std::size_t tau_max = ctx.s;
  if (pins && pins->tau_max) tau_max = std::min(tau_max, *pins->tau_max);

  auto wedge_count = [&](std::size_t l1, long g) -> BigInt {
    if (pins) {
      auto it = pins->h_override.find(g);
      if (it != pins->h_override.end()) return l1 < it->second.size() ? it->second[l1] : BigInt(0);
    }
    return count_wedge_roots(data.r_exponents, l1, g);
  };

  const std::size_t dsize = ctx.divisors.size();
  BigInt theta = 0;
  for (std::size_t l1 = 0; l1 <= l; ++l1) {
    const long l2 = static_cast<long>(l - l1);
    if (published && l1 % 2 != 0) continue;  // l2 has the parity of l
    for (std::uint32_t mask = 0; mask < (1U << dsize); ++mask) {
      std::vector<long> subset;
      for (std::size_t i = 0; i < dsize; ++i)
        if (mask & (1U << i)) subset.push_back(ctx.divisors[i]);
      const BigInt h = wedge_count(l1, subset_gcd(subset, spec.m, p));
      if (h == 0) continue;
      BigInt coefficient = 0;
      for (std::size_t tau = 0; tau <= tau_max; ++tau)
        coefficient += theta_coefficient(ctx, subset, l2 - p * static_cast<long>(tau)) *
                       binomial(static_cast<long>(ctx.s), static_cast<long>(tau));
      theta += coefficient * h;
    }
  }
  return theta;
}

BigInt assemble_p_torsion(const GroupSpec& spec, long p, std::size_t l, const TorsionOptions& options) {
  return assemble_p_torsion(spec, prime_data(spec, p), l, options);
}

BigInt one_prime_theta(const GroupSpec& spec, std::size_t l, TorsionVariant variant, OrbitCutoff cutoff) {
  if (spec.primes.size() != 1 || spec.primes[0] != spec.m)
    throw Error(ErrorKind::NotPrimeOrder, "m = " + std::to_string(spec.m) + " is not prime");
  const bool published = variant == TorsionVariant::Published;
  if (published && l == 0) return 0;
  const long p = spec.m;
  const RstDecomposition rst = rst_decompose(spec, p);
  const auto top = static_cast<long>(rst.t) * (p - 1);

  auto trivial_part = [&](long beta) -> BigInt {
    if (beta < 0 || beta % 2 != 0) return 0;
    return published || beta >= 2 ? 1 : 0;
  };
  auto ideal_part = [&](long beta) -> BigInt {
    if (rst.t == 0 || beta < 0 || beta % 2 != 0) return 0;
    BigInt sum = 0;
    if (published) {
      for (long i = 0; i <= std::min(beta, top); ++i) sum += bounded_composition_count(rst.t, p, i) - 1;
    } else {
      const long limit = cutoff == OrbitCutoff::HalfDegree ? beta / 2 : beta - 1;
      for (long i = 1; i <= std::min(limit, top); ++i) sum += bounded_composition_count(rst.t, p, i);
    }
    return sum;
  };

  BigInt theta = 0;
  for (std::size_t l1 = 0; l1 <= l; ++l1) {
    if (published && l1 % 2 != 0) continue;
    const BigInt choose = binomial(static_cast<long>(rst.r), static_cast<long>(l1));
    if (choose == 0) continue;
    const long l2 = static_cast<long>(l - l1);
    for (std::size_t tau = 0; tau <= rst.s; ++tau) {
      const long beta = l2 - p * static_cast<long>(tau);
      theta += choose * binomial(static_cast<long>(rst.s), static_cast<long>(tau)) *
               (trivial_part(beta) + ideal_part(beta));
    }
  }
  return theta;
}

BigInt s_delta(std::size_t s, long p, std::size_t delta) {
  const std::size_t top = s * static_cast<std::size_t>(p);
  if (delta > top) throw Error(ErrorKind::DegreeOutOfRange, "delta exceeds p*s");
  // weight[f][sum]: f = 1 once some entry lies strictly between 0 and p
  std::vector<std::vector<BigInt>> weight(2, std::vector<BigInt>(top + 1));
  weight[0][0] = 1;
  for (std::size_t pos = 0; pos < s; ++pos) {
    std::vector<std::vector<BigInt>> next(2, std::vector<BigInt>(top + 1));
    for (int f = 0; f < 2; ++f) {
      for (std::size_t sum = 0; sum <= top; ++sum) {
        if (weight[f][sum] == 0) continue;
        for (long i = 0; i <= p && sum + static_cast<std::size_t>(i) <= top; ++i) {
          const int nf = (f == 1 || (i != 0 && i != p)) ? 1 : 0;
          next[nf][sum + static_cast<std::size_t>(i)] += weight[f][sum] * binomial(p, i);
        }
      }
    }
    weight = std::move(next);
  }
  const BigInt& total = weight[1][delta];
  if (!mpz_divisible_ui_p(total.get_mpz_t(), static_cast<unsigned long>(p)))
    throw Error(ErrorKind::NonIntegral, "tuple weight " + total.get_str() + " is not divisible by p");
  return total / p;
}

}  // namespace zncoh
