#include "zncoh/report.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "zncoh/cyclotomic.hpp"
#include "zncoh/error.hpp"

namespace zncoh {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// JSON conversions

Json bigint_to_json(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

BigInt bigint_from_json(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return BigInt(v.get<long>());
  if (v.is_number_unsigned()) return BigInt(v.get<unsigned long>());
  if (v.is_string()) {
    BigInt out;
    const auto& s = v.get_ref<const std::string&>();
    if (s.empty() || out.set_str(s, 10) != 0)
      throw Error(ErrorKind::InvalidInput, where + ": '" + s + "' is not a decimal integer");
    return out;
  }
  throw Error(ErrorKind::InvalidInput, where + ": expected an integer, got " + std::string(v.type_name()));
}

namespace {

long small_integer(const Json& doc, const char* field, long min_value) {
  if (!doc.contains(field)) throw Error(ErrorKind::InvalidInput, std::string("missing field '") + field + "'");
  const BigInt v = bigint_from_json(doc.at(field), std::string("field '") + field + "'");
  if (!v.fits_slong_p() || v < min_value)
    throw Error(ErrorKind::InvalidInput, std::string("field '") + field + "': must be an integer >= " +
                                             std::to_string(min_value));
  return v.get_si();
}

Json matrix_to_json(const IntMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (const auto& v : a.row(i)) row.push_back(bigint_to_json(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<long, PublishedPins> parse_pins(const Json& j) {
  std::map<long, PublishedPins> out;
  if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "field 'published_pins': expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string where = "published_pins." + key;
    long p = 0;
    try {
      p = std::stol(key);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, where + ": key must be a prime");
    }
    PublishedPins pins;
    if (value.contains("tau_max"))
      pins.tau_max = static_cast<std::size_t>(small_integer(value, "tau_max", 0));
    if (value.contains("h_override")) {
      for (const auto& [dkey, list] : value.at("h_override").items()) {
        if (!list.is_array()) throw Error(ErrorKind::InvalidInput, where + ".h_override." + dkey + ": expected a list");
        std::vector<BigInt> counts;
        for (std::size_t i = 0; i < list.size(); ++i)
          counts.push_back(bigint_from_json(list[i], where + ".h_override." + dkey + "[" + std::to_string(i) + "]"));
        pins.h_override[std::stol(dkey)] = std::move(counts);
      }
    }
    out[p] = std::move(pins);
  }
  return out;
}

std::string variant_engine(TorsionVariant v) { return "formula-" + std::string(to_string(v)); }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string cell(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

}  // namespace

InputDocument parse_input(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::InvalidInput, "top level: expected a JSON object");
  InputDocument out;
  GroupSpec spec;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) throw Error(ErrorKind::InvalidInput, "field 'name': expected a string");
    spec.name = doc.at("name").get<std::string>();
  }
  spec.n = static_cast<std::size_t>(small_integer(doc, "n", 1));
  spec.m = small_integer(doc, "m", 1);
  if (!doc.contains("phi")) throw Error(ErrorKind::InvalidInput, "missing field 'phi'");
  const Json& phi = doc.at("phi");
  if (!phi.is_array() || phi.size() != spec.n)
    throw Error(ErrorKind::InvalidInput, "field 'phi': expected " + std::to_string(spec.n) + " rows");
  spec.phi = IntMatrix(spec.n, spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::string row_where = "phi[" + std::to_string(i) + "]";
    if (!phi[i].is_array() || phi[i].size() != spec.n)
      throw Error(ErrorKind::InvalidInput, row_where + ": expected " + std::to_string(spec.n) + " entries");
    for (std::size_t j = 0; j < spec.n; ++j)
      spec.phi(i, j) = bigint_from_json(phi[i][j], row_where + "[" + std::to_string(j) + "]");
  }
  if (doc.contains("published_pins")) out.pins = parse_pins(doc.at("published_pins"));
  if (doc.contains("expected")) out.expected = doc.at("expected");
  if (doc.contains("notes") && doc.at("notes").is_string()) out.notes = doc.at("notes").get<std::string>();
  out.spec = validate(std::move(spec));
  return out;
}

InputDocument load_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, path.string() + ": " + e.what());
  }
  InputDocument out = parse_input(doc);
  if (out.spec.name.empty()) out.spec.name = path.stem().string();
  return out;
}

Json spec_to_json(const GroupSpec& spec) {
  return Json{{"name", spec.name}, {"n", spec.n}, {"m", spec.m}, {"phi", matrix_to_json(spec.phi)}};
}

Json pins_to_json(const std::map<long, PublishedPins>& pins) {
  Json out = Json::object();
  for (const auto& [p, pin] : pins) {
    Json entry = Json::object();
    if (pin.tau_max) entry["tau_max"] = *pin.tau_max;
    if (!pin.h_override.empty()) {
      Json h = Json::object();
      for (const auto& [d, counts] : pin.h_override) {
        Json list = Json::array();
        for (const auto& c : counts) list.push_back(bigint_to_json(c));
        h[std::to_string(d)] = std::move(list);
      }
      entry["h_override"] = std::move(h);
    }
    out[std::to_string(p)] = std::move(entry);
  }
  return out;
}

Json group_to_json(const AbelianGroup& g, std::size_t degree) {
  Json torsion = Json::array();
  for (const auto& f : g.torsion()) torsion.push_back(bigint_to_json(f));
  return Json{{"degree", degree}, {"rank", g.rank()}, {"torsion", std::move(torsion)}, {"group", g.to_string()}};
}

AbelianGroup group_from_json(const Json& j) {
  std::vector<BigInt> torsion;
  for (const auto& f : j.at("torsion")) torsion.push_back(bigint_from_json(f, "torsion"));
  return AbelianGroup(j.at("rank").get<std::size_t>(), std::move(torsion));
}

Json table_to_json(const CohomologyTable& table) {
  Json groups = Json::array();
  for (std::size_t l = 0; l < table.groups.size(); ++l) groups.push_back(group_to_json(table.groups[l], l));
  return Json{{"engine", table.engine},
              {"max_degree", table.max_degree},
              {"stable_from", table.stable_from},
              {"conditions", table.conditions},
              {"groups", std::move(groups)}};
}

CohomologyTable table_from_json(const Json& j) {
  CohomologyTable t;
  t.engine = j.at("engine").get<std::string>();
  t.max_degree = j.at("max_degree").get<std::size_t>();
  t.stable_from = j.at("stable_from").get<std::size_t>();
  t.conditions = j.at("conditions").get<std::string>();
  for (const auto& g : j.at("groups")) t.groups.push_back(group_from_json(g));
  return t;
}

// ---------------------------------------------------------------------------
// Engines

namespace {

ExponentMultiset phi_exponents(const GroupSpec& spec) {
  return exponent_multiset(cyclotomic_census(charpoly(spec.phi), spec.m));
}

std::map<long, PrimeData> all_prime_data(const GroupSpec& spec) {
  std::map<long, PrimeData> out;
  for (long p : spec.primes) out.emplace(p, prime_data(spec, p));
  return out;
}

CohomologyTable formula_table(const GroupSpec& spec, const std::map<long, PrimeData>& data,
                              std::size_t max_degree, const TorsionOptions& options) {
  const ExponentMultiset x = phi_exponents(spec);
  CohomologyTable table;
  table.max_degree = max_degree;
  table.engine = variant_engine(options.variant);
  table.stable_from = spec.n + 1;
  table.conditions = options.variant == TorsionVariant::Published ? "as printed" : "";
  for (std::size_t l = 0; l <= max_degree; ++l) {
    const BigInt rk = count_wedge_roots(x, l, spec.m);
    std::vector<BigInt> torsion;
    for (const auto& [p, d] : data) {
      const BigInt theta = assemble_p_torsion(spec, d, l, options);
      torsion.insert(torsion.end(), theta.get_ui(), BigInt(p));
    }
    table.groups.emplace_back(rk.get_ui(), std::move(torsion));
  }
  return table;
}

TorsionOptions options_for(TorsionVariant v, OrbitCutoff c, const std::map<long, PublishedPins>& pins) {
  TorsionOptions o;
  o.variant = v;
  o.cutoff = c;
  if (v == TorsionVariant::Published) o.pins = pins;
  return o;
}

// theta or the error that stopped it
Json theta_cell(const GroupSpec& spec, const PrimeData& data, std::size_t l, const TorsionOptions& options,
                std::string& error) {
  try {
    return bigint_to_json(assemble_p_torsion(spec, data, l, options));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonIntegralOrbitCount) throw;
    error = e.what();
    return nullptr;
  }
}

Json errata_notes(const InputDocument& input) {
  Json notes = Json::array();
  auto add = [&](const char* id, const char* where, const char* text) {
    notes.push_back(Json{{"id", id}, {"location", where}, {"note", text}});
  };
  add("rt-swap", "cyclic-group procedure for (r,s,t)",
      "The displayed cohomology of a (r,s,t)-module puts (Z/p)^r in degree 1 and (Z/p)^t in degree 2. "
      "The trivial summand has no degree-1 cohomology, so t is read from ker N / im(psi - 1) and r from "
      "ker(psi - 1) / im N.");
  add("orbit-exponent", "orbit-count lemma and the torsion theorem",
      "The orbit-count factor is printed as (p gcd(A)/m)^|A|; the counting argument ends with exponent 1. "
      "The corrected column uses exponent 1.");
  add("zero-class-degree", "per-degree splitting of the class set",
      "The printed per-degree count subtracts the zero class in every stratum, but it lies only in the "
      "i = 0 stratum. The corrected column counts classes with all i_d >= 1, entering in degree "
      "2 sum(i_d), and the class set of A = {} in degrees >= 2.");
  add("parity-restriction", "torsion theorem assembly",
      "The printed assembly keeps only l2 with the parity of l. The Kunneth splitting has no such "
      "restriction (Z^2 x Z/3 has (Z/3)^2 in degree 3), so the corrected column sums over all l1 + l2 = l.");
  add("p2-sign-twist", "free-rank lemma for Z[Z/p]^s",
      "For p = 2 the top exterior power of Z[Z/2] carries the sign action, which moves torsion through the "
      "s-block. Neither formula variant models this; disagreements are expected for p = 2 with s > 0.");
  if (!input.pins.empty())
    add("worked-example-pins", "worked example",
        "The published column applies the pins stored with this input so that it reproduces the printed "
        "worked table; see the pins listed above.");
  return notes;
}

Json decomposition_json(const std::map<long, PrimeData>& data) {
  Json out = Json::array();
  for (const auto& [p, d] : data) {
    Json k = Json::object();
    for (long dv : d.isotropy.divisors) k[std::to_string(dv)] = d.isotropy.k_of(dv);
    out.push_back(Json{{"p", p},
                       {"r", d.rst.r},
                       {"s", d.rst.s},
                       {"t", d.rst.t},
                       {"D", d.isotropy.divisors},
                       {"k", std::move(k)}});
  }
  return out;
}

}  // namespace

CohomologyTable formula_table(const GroupSpec& spec, std::size_t max_degree, const TorsionOptions& options) {
  return formula_table(spec, all_prime_data(spec), max_degree, options);
}

Json run_compare(const InputDocument& input, std::size_t max_degree) {
  const GroupSpec& spec = input.spec;
  const auto data = all_prime_data(spec);
  const ExponentMultiset x = phi_exponents(spec);
  const CohomologyTable oracle = e2_table(spec, max_degree);
  const TorsionOptions published = options_for(TorsionVariant::Published, OrbitCutoff::HalfDegree, input.pins);
  const TorsionOptions corrected = options_for(TorsionVariant::Corrected, OrbitCutoff::HalfDegree, {});
  const TorsionOptions alternative = options_for(TorsionVariant::Corrected, OrbitCutoff::DegreeMinusOne, {});

  Json rows = Json::array();
  Json mismatches = Json::array();
  std::size_t rank_agree = 0, published_bad = 0, corrected_bad = 0, alternative_bad = 0;
  for (std::size_t l = 0; l <= max_degree; ++l) {
    const BigInt wedge = count_wedge_roots(x, l, spec.m);
    const BigInt molien = molien_rank(spec.phi, spec.m, l);
    const BigInt orank = oracle.groups[l].rank();
    const bool agree = wedge == molien && molien == orank;
    rank_agree += agree ? 1 : 0;
    Json thetas = Json::array();
    for (const auto& [p, d] : data) {
      std::string pub_err, cor_err, alt_err;
      Json pub = theta_cell(spec, d, l, published, pub_err);
      Json cor = theta_cell(spec, d, l, corrected, cor_err);
      Json alt = theta_cell(spec, d, l, alternative, alt_err);
      Json orc = static_cast<long>(oracle.groups[l].p_rank(BigInt(p)));
      const bool pub_ok = pub == orc, cor_ok = cor == orc, alt_ok = alt == orc;
      published_bad += pub_ok ? 0 : 1;
      corrected_bad += cor_ok ? 0 : 1;
      alternative_bad += alt_ok ? 0 : 1;
      Json entry{{"p", p},
                 {"published", pub},
                 {"corrected", cor},
                 {"corrected_alt", alt},
                 {"oracle", orc},
                 {"published_agrees", pub_ok},
                 {"corrected_agrees", cor_ok}};
      if (!pub_err.empty()) entry["published_error"] = pub_err;
      if (!cor_err.empty()) entry["corrected_error"] = cor_err;
      if (!alt_err.empty()) entry["corrected_alt_error"] = alt_err;
      if (!pub_ok || !cor_ok)
        mismatches.push_back(Json{{"degree", l}, {"p", p}, {"published", pub}, {"corrected", cor}, {"oracle", orc}});
      thetas.push_back(std::move(entry));
    }
    rows.push_back(Json{{"degree", l},
                        {"rank", Json{{"count_wedge_roots", bigint_to_json(wedge)},
                                      {"molien", bigint_to_json(molien)},
                                      {"oracle", bigint_to_json(orank)},
                                      {"agree", agree}}},
                        {"theta", std::move(thetas)}});
  }
  const std::size_t cells = (max_degree + 1) * data.size();
  Json calibration{{std::string(to_string(OrbitCutoff::HalfDegree)),
                    Json{{"matches_oracle", corrected_bad == 0}, {"mismatched_cells", corrected_bad}}},
                   {std::string(to_string(OrbitCutoff::DegreeMinusOne)),
                    Json{{"matches_oracle", alternative_bad == 0}, {"mismatched_cells", alternative_bad}}}};
  return Json{{"command", "compare"},
              {"spec", spec_to_json(spec)},
              {"published_pins", pins_to_json(input.pins)},
              {"max_degree", max_degree},
              {"oracle_conditions", oracle.conditions},
              {"decomposition", decomposition_json(data)},
              {"rows", std::move(rows)},
              {"summary", Json{{"degrees", max_degree + 1},
                               {"rank_agreements", rank_agree},
                               {"theta_cells", cells},
                               {"published_disagreements", published_bad},
                               {"corrected_disagreements", corrected_bad},
                               {"mismatches", std::move(mismatches)}}},
              {"calibration", std::move(calibration)},
              {"errata", errata_notes(input)}};
}

Json run_analyze(const InputDocument& input, const RunOptions& options) {
  const GroupSpec& spec = input.spec;
  Json tables = Json::object();
  const bool formula = options.engine != EngineChoice::Oracle;
  const bool oracle = options.engine != EngineChoice::Formula;
  if (formula) {
    const auto data = all_prime_data(spec);
    if (options.variant != VariantChoice::Corrected) {
      CohomologyTable t = formula_table(
          spec, data, options.max_degree, options_for(TorsionVariant::Published, OrbitCutoff::HalfDegree, input.pins));
      tables[t.engine] = table_to_json(t);
    }
    if (options.variant != VariantChoice::Published) {
      CohomologyTable t =
          formula_table(spec, data, options.max_degree, options_for(TorsionVariant::Corrected, OrbitCutoff::HalfDegree, {}));
      tables[t.engine] = table_to_json(t);
    }
  }
  if (oracle) tables["oracle"] = table_to_json(e2_table(spec, options.max_degree));
  Json out{{"command", "analyze"},
           {"spec", spec_to_json(spec)},
           {"published_pins", pins_to_json(input.pins)},
           {"max_degree", options.max_degree},
           {"tables", std::move(tables)}};
  if (formula && oracle) out["comparison"] = run_compare(input, options.max_degree);
  return out;
}

Json run_rank(const InputDocument& input, std::size_t max_degree) {
  const GroupSpec& spec = input.spec;
  const ExponentMultiset x = phi_exponents(spec);
  const CohomologyTable oracle = e2_table(spec, max_degree);
  Json ranks = Json::array();
  for (std::size_t l = 0; l <= max_degree; ++l)
    ranks.push_back(Json{{"degree", l},
                         {"count_wedge_roots", bigint_to_json(count_wedge_roots(x, l, spec.m))},
                         {"molien", bigint_to_json(molien_rank(spec.phi, spec.m, l))},
                         {"oracle", oracle.groups[l].rank()}});
  return Json{{"command", "rank"}, {"spec", spec_to_json(spec)}, {"max_degree", max_degree}, {"ranks", std::move(ranks)}};
}

namespace {

std::vector<long> selected_primes(const GroupSpec& spec, std::optional<long> prime) {
  if (!prime) return spec.primes;
  if (std::find(spec.primes.begin(), spec.primes.end(), *prime) == spec.primes.end())
    throw Error(ErrorKind::NotADivisor, std::to_string(*prime) + " is not a prime divisor of m");
  return {*prime};
}

}  // namespace

Json run_rst(const InputDocument& input, std::optional<long> prime) {
  Json primes = Json::array();
  for (long p : selected_primes(input.spec, prime)) {
    const RstDecomposition d = rst_decompose(input.spec, p);
    primes.push_back(Json{{"p", p},
                          {"r", d.r},
                          {"s", d.s},
                          {"t", d.t},
                          {"r_basis", matrix_to_json(d.r_basis)},
                          {"t_basis", matrix_to_json(d.t_basis)},
                          {"phi_r", matrix_to_json(d.phi_r)},
                          {"phi_t", matrix_to_json(d.phi_t)}});
  }
  return Json{{"command", "rst"}, {"spec", spec_to_json(input.spec)}, {"primes", std::move(primes)}};
}

Json run_isotropy(const InputDocument& input, std::optional<long> prime) {
  Json primes = Json::array();
  for (long p : selected_primes(input.spec, prime)) {
    const RstDecomposition d = rst_decompose(input.spec, p);
    const IsotropyData iso = isotropy_data(input.spec, p, d);
    Json md = Json::object(), kd = Json::object();
    for (const auto& [dv, v] : iso.m) md[std::to_string(dv)] = v;
    for (const auto& [dv, v] : iso.k) kd[std::to_string(dv)] = v;
    primes.push_back(Json{{"p", p}, {"D", iso.divisors}, {"m_d", std::move(md)}, {"k_d", std::move(kd)}});
  }
  return Json{{"command", "isotropy"}, {"spec", spec_to_json(input.spec)}, {"primes", std::move(primes)}};
}

Json run_census(const InputDocument& input) {
  const GroupSpec& spec = input.spec;
  const IntPolynomial f = charpoly(spec.phi);
  const CyclotomicCensus census = cyclotomic_census(f, spec.m);
  const ExponentMultiset x = exponent_multiset(census);
  Json coeffs = Json::array();
  for (const auto& c : f.coefficients()) coeffs.push_back(bigint_to_json(c));
  Json mult = Json::object();
  for (const auto& [d, mu] : census.multiplicities) mult[std::to_string(d)] = mu;
  Json exps = Json::object();
  for (std::size_t a = 0; a < x.counts.size(); ++a)
    if (x.counts[a] > 0) exps[std::to_string(a)] = x.counts[a];
  const FreeActionReport freeness = free_outside_origin(spec);
  Json per_prime = Json::object();
  for (const auto& [p, b] : freeness.per_prime) per_prime[std::to_string(p)] = b;
  Json out{{"command", "census"},
           {"spec", spec_to_json(spec)},
           {"order", spec.order},
           {"charpoly", Json{{"coefficients", std::move(coeffs)}, {"text", f.to_string()}}},
           {"cyclotomic", std::move(mult)},
           {"exponents", std::move(exps)},
           {"free_outside_origin", Json{{"per_prime", std::move(per_prime)}, {"overall", freeness.overall}}}};
  if (freeness.overall) {
    const SubgroupCensus sc = max_finite_subgroup_census(spec);
    Json classes = Json::object(), closed = Json::object();
    for (const auto& [p, c] : sc.order_p_classes) classes[std::to_string(p)] = bigint_to_json(c);
    for (const auto& [p, c] : sc.closed_form) closed[std::to_string(p)] = c ? bigint_to_json(*c) : Json(nullptr);
    out["finite_subgroups"] = Json{{"order_p_classes", std::move(classes)},
                                   {"closed_form_informational", std::move(closed)},
                                   {"whole_group", bigint_to_json(sc.whole_group)}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string group_label(const Json& spec) {
  return "Z^" + std::to_string(spec.at("n").get<long>()) + " x| Z/" + std::to_string(spec.at("m").get<long>());
}

std::string matrix_text(const Json& rows) {
  std::vector<std::string> parts;
  for (const auto& row : rows) {
    std::vector<std::string> entries;
    for (const auto& v : row) entries.push_back(cell(v));
    parts.push_back("[" + join(entries, ", ") + "]");
  }
  return "[" + join(parts, ", ") + "]";
}

bool keep_prime(const Json& entry, std::optional<long> prime) {
  return !prime || entry.at("p").get<long>() == *prime;
}

void compare_markdown(std::ostringstream& out, const Json& r, std::optional<long> prime) {
  const Json& spec = r.at("spec");
  out << "# Engine comparison: " << spec.at("name").get<std::string>() << "\n\n";
  out << "Group " << group_label(spec) << ", phi = " << matrix_text(spec.at("phi")) << ".\n";
  out << "Degrees 0.." << r.at("max_degree").get<std::size_t>() << ". Oracle values are "
      << r.at("oracle_conditions").get<std::string>() << ".\n\n";

  out << "## Per-prime data\n\n| p | r | s | t | D | k_d |\n|---|---|---|---|---|---|\n";
  for (const auto& d : r.at("decomposition")) {
    if (!keep_prime(d, prime)) continue;
    std::vector<std::string> ds, ks;
    for (const auto& v : d.at("D")) ds.push_back(cell(v));
    for (const auto& [key, v] : d.at("k").items()) ks.push_back("k_" + key + " = " + cell(v));
    out << "| " << d.at("p") << " | " << d.at("r") << " | " << d.at("s") << " | " << d.at("t") << " | {"
        << join(ds, ", ") << "} | " << (ks.empty() ? "-" : join(ks, ", ")) << " |\n";
  }
  const Json& pins = r.at("published_pins");
  if (!pins.empty()) {
    out << "\nPublished-column pins:\n";
    for (const auto& [p, pin] : pins.items()) {
      if (pin.contains("tau_max")) out << "- p = " << p << ": s-block shift index capped at tau <= " << pin.at("tau_max") << "\n";
      if (pin.contains("h_override"))
        for (const auto& [d, list] : pin.at("h_override").items()) {
          std::vector<std::string> vals;
          for (const auto& v : list) vals.push_back(cell(v));
          out << "- p = " << p << ": H(l1, " << d << ", Z^r) taken as " << join(vals, ", ")
              << " for l1 = 0.." << list.size() - 1 << "\n";
        }
    }
  }

  out << "\n## Ranks\n\n| l | count_wedge_roots | molien | oracle | agree |\n|---|---|---|---|---|\n";
  for (const auto& row : r.at("rows")) {
    const Json& rk = row.at("rank");
    out << "| " << row.at("degree") << " | " << cell(rk.at("count_wedge_roots")) << " | " << cell(rk.at("molien"))
        << " | " << cell(rk.at("oracle")) << " | " << cell(rk.at("agree")) << " |\n";
  }

  out << "\n## Torsion exponents\n\n"
      << "| l | p | published (as printed) | corrected | corrected, cutoff beta-1 | oracle |\n"
      << "|---|---|---|---|---|---|\n";
  for (const auto& row : r.at("rows"))
    for (const auto& t : row.at("theta")) {
      if (!keep_prime(t, prime)) continue;
      out << "| " << row.at("degree") << " | " << t.at("p") << " | " << cell(t.at("published")) << " | "
          << cell(t.at("corrected")) << " | " << cell(t.at("corrected_alt")) << " | " << cell(t.at("oracle")) << " |\n";
    }

  out << "\n## Disagreements with the oracle\n\n";
  std::size_t shown = 0;
  for (const auto& mm : r.at("summary").at("mismatches")) {
    if (!keep_prime(mm, prime)) continue;
    out << "- l = " << mm.at("degree") << ", p = " << mm.at("p") << ": published " << cell(mm.at("published"))
        << ", corrected " << cell(mm.at("corrected")) << ", oracle " << cell(mm.at("oracle")) << "\n";
    ++shown;
  }
  if (shown == 0) out << "none\n";
  const Json& s = r.at("summary");
  out << "\nRanks agree in " << s.at("rank_agreements") << " of " << s.at("degrees") << " degrees. "
      << "Torsion cells: " << s.at("theta_cells") << "; published disagrees in " << s.at("published_disagreements")
      << ", corrected in " << s.at("corrected_disagreements") << ".\n";

  out << "\n## Corrected cutoff calibration\n\n";
  for (const auto& [name, c] : r.at("calibration").items()) {
    out << "- " << name << ": ";
    if (c.at("matches_oracle").get<bool>()) out << "matches the oracle in every cell\n";
    else out << "differs from the oracle in " << c.at("mismatched_cells") << " cells\n";
  }

  out << "\n## Erratum notes\n\n";
  for (const auto& e : r.at("errata"))
    out << "- **" << e.at("id").get<std::string>() << "** (" << e.at("location").get<std::string>() << "): "
        << e.at("note").get<std::string>() << "\n";
}

void analyze_markdown(std::ostringstream& out, const Json& r, std::optional<long> prime) {
  const Json& spec = r.at("spec");
  out << "# Cohomology of " << group_label(spec) << " (" << spec.at("name").get<std::string>() << ")\n\n";
  out << "phi = " << matrix_text(spec.at("phi")) << "\n\n";
  std::vector<std::string> engines;
  for (const auto& [name, t] : r.at("tables").items()) engines.push_back(name);
  out << "| l | " << join(engines, " | ") << " |\n|---|";
  for (std::size_t i = 0; i < engines.size(); ++i) out << "---|";
  out << "\n";
  for (std::size_t l = 0; l <= r.at("max_degree").get<std::size_t>(); ++l) {
    out << "| " << l << " |";
    for (const auto& e : engines) out << " " << r.at("tables").at(e).at("groups").at(l).at("group").get<std::string>() << " |";
    out << "\n";
  }
  for (const auto& e : engines) {
    const std::string cond = r.at("tables").at(e).at("conditions").get<std::string>();
    if (!cond.empty()) out << "\n" << e << ": " << cond << ".";
  }
  out << "\n";
  if (r.contains("comparison")) {
    out << "\n";
    compare_markdown(out, r.at("comparison"), prime);
  }
}

}  // namespace

std::string render_markdown(const Json& r, std::optional<long> prime) {
  std::ostringstream out;
  const std::string command = r.at("command").get<std::string>();
  if (command == "compare") {
    compare_markdown(out, r, prime);
  } else if (command == "analyze") {
    analyze_markdown(out, r, prime);
  } else if (command == "rank") {
    out << "# Ranks of " << group_label(r.at("spec")) << "\n\n| l | count_wedge_roots | molien | oracle |\n|---|---|---|---|\n";
    for (const auto& row : r.at("ranks"))
      out << "| " << row.at("degree") << " | " << cell(row.at("count_wedge_roots")) << " | " << cell(row.at("molien"))
          << " | " << cell(row.at("oracle")) << " |\n";
  } else if (command == "rst") {
    out << "# (r,s,t) decomposition of " << group_label(r.at("spec")) << "\n\n";
    for (const auto& d : r.at("primes"))
      out << "- p = " << d.at("p") << ": (r,s,t) = (" << d.at("r") << ", " << d.at("s") << ", " << d.at("t")
          << "), phi_r = " << matrix_text(d.at("phi_r")) << ", phi_t = " << matrix_text(d.at("phi_t")) << "\n";
  } else if (command == "isotropy") {
    out << "# Isotropy data of " << group_label(r.at("spec")) << "\n\n";
    for (const auto& d : r.at("primes")) {
      std::vector<std::string> ds, ks;
      for (const auto& v : d.at("D")) ds.push_back(cell(v));
      for (const auto& [key, v] : d.at("k_d").items()) ks.push_back("k_" + key + " = " + cell(v));
      out << "- p = " << d.at("p") << ": D = {" << join(ds, ", ") << "}, " << join(ks, ", ") << "\n";
    }
  } else if (command == "census") {
    out << "# Census of " << group_label(r.at("spec")) << "\n\n";
    out << "- order of phi: " << r.at("order") << "\n";
    out << "- characteristic polynomial: " << r.at("charpoly").at("text").get<std::string>() << "\n";
    std::vector<std::string> parts;
    for (const auto& [d, mu] : r.at("cyclotomic").items()) parts.push_back("Phi_" + d + "^" + cell(mu));
    out << "- cyclotomic factors: " << join(parts, " ") << "\n";
    out << "- free outside the origin: " << cell(r.at("free_outside_origin").at("overall")) << "\n";
    if (r.contains("finite_subgroups")) {
      for (const auto& [p, c] : r.at("finite_subgroups").at("order_p_classes").items())
        out << "- classes of order-" << p << " subgroups (degree-1 count): " << cell(c) << "\n";
      for (const auto& [p, c] : r.at("finite_subgroups").at("closed_form_informational").items())
        out << "- closed-form count for p = " << p << " (informational): " << cell(c) << "\n";
    }
  } else {
    throw Error(ErrorKind::InvalidInput, "no markdown renderer for '" + command + "'");
  }
  return out.str();
}

std::string render_csv(const Json& r, std::optional<long> prime) {
  std::ostringstream out;
  const std::string command = r.at("command").get<std::string>();
  auto torsion_text = [](const Json& g) {
    std::vector<std::string> parts;
    for (const auto& f : g.at("torsion")) parts.push_back(cell(f));
    return join(parts, ";");
  };
  auto compare_rows = [&](const Json& c) {
    out << "l,p,rank_wedge,rank_molien,rank_oracle,theta_published,theta_corrected,theta_corrected_alt,theta_oracle\n";
    for (const auto& row : c.at("rows"))
      for (const auto& t : row.at("theta")) {
        if (!keep_prime(t, prime)) continue;
        const Json& rk = row.at("rank");
        out << row.at("degree") << "," << t.at("p") << "," << cell(rk.at("count_wedge_roots")) << ","
            << cell(rk.at("molien")) << "," << cell(rk.at("oracle")) << "," << cell(t.at("published")) << ","
            << cell(t.at("corrected")) << "," << cell(t.at("corrected_alt")) << "," << cell(t.at("oracle")) << "\n";
      }
  };
  if (command == "compare") {
    compare_rows(r);
  } else if (command == "analyze") {
    std::vector<long> primes;
    const long m = r.at("spec").at("m").get<long>();
    for (long p : prime_factors(m))
      if (!prime || p == *prime) primes.push_back(p);
    out << "l,engine,rank,torsion";
    for (long p : primes) out << ",theta_" << p;
    out << "\n";
    for (const auto& [engine, t] : r.at("tables").items())
      for (const auto& g : t.at("groups")) {
        const AbelianGroup group = group_from_json(g);
        out << g.at("degree") << "," << engine << "," << g.at("rank") << "," << torsion_text(g);
        for (long p : primes) out << "," << group.p_rank(BigInt(p));
        out << "\n";
      }
  } else if (command == "rank") {
    out << "l,count_wedge_roots,molien,oracle\n";
    for (const auto& row : r.at("ranks"))
      out << row.at("degree") << "," << cell(row.at("count_wedge_roots")) << "," << cell(row.at("molien")) << ","
          << cell(row.at("oracle")) << "\n";
  } else if (command == "rst") {
    out << "p,r,s,t\n";
    for (const auto& d : r.at("primes")) out << d.at("p") << "," << d.at("r") << "," << d.at("s") << "," << d.at("t") << "\n";
  } else if (command == "isotropy") {
    out << "p,d,m_d,k_d,in_D\n";
    for (const auto& d : r.at("primes"))
      for (const auto& [key, v] : d.at("k_d").items()) {
        const long dv = std::stol(key);
        const auto& D = d.at("D");
        const bool in = std::find(D.begin(), D.end(), Json(dv)) != D.end();
        out << d.at("p") << "," << key << "," << d.at("m_d").at(key) << "," << v << "," << (in ? 1 : 0) << "\n";
      }
  } else if (command == "census") {
    out << "d,multiplicity\n";
    for (const auto& [d, mu] : r.at("cyclotomic").items()) out << d << "," << mu << "\n";
  } else {
    throw Error(ErrorKind::InvalidInput, "no csv renderer for '" + command + "'");
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Fixtures and cache

fs::path default_fixture_dir() {
  if (const char* env = std::getenv("ZNCOH_FIXTURE_DIR")) return env;
#ifdef ZNCOH_SOURCE_DIR
  return fs::path(ZNCOH_SOURCE_DIR) / "fixtures";
#else
  return "fixtures";
#endif
}

std::vector<Fixture> fixture_suite(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<Fixture> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    const Json doc = Json::parse(in);
    if (doc.value("expect_rejection", std::string()).size() > 0) continue;
    Fixture fx;
    fx.path = f;
    fx.input = load_input(f);
    fx.name = fx.input.spec.name;
    out.push_back(std::move(fx));
  }
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

ResultCache::ResultCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path ResultCache::default_dir() {
  if (const char* env = std::getenv("ZNCOH_CACHE_DIR")) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME")) return fs::path(xdg) / "zncoh";
  if (const char* home = std::getenv("HOME")) return fs::path(home) / ".cache" / "zncoh";
  return fs::temp_directory_path() / "zncoh-cache";
}

std::string ResultCache::key(const std::string& command, const InputDocument& input, const std::string& engine,
                             const std::string& variant, std::size_t max_degree) {
  Json canonical{{"command", command},
                 {"spec", spec_to_json(input.spec)},
                 {"pins", pins_to_json(input.pins)},
                 {"engine", engine},
                 {"variant", variant},
                 {"max_degree", max_degree},
                 {"schema", 1}};
  return sha256_hex(canonical.dump());
}

std::optional<Json> ResultCache::load(const std::string& key) const {
  std::ifstream in(dir_ / (key + ".json"));
  if (!in) return std::nullopt;
  try {
    return Json::parse(in);
  } catch (const Json::parse_error&) {
    return std::nullopt;
  }
}

void ResultCache::store(const std::string& key, const Json& value) const {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) return;
  const fs::path target = dir_ / (key + ".json");
  const fs::path tmp = dir_ / (key + ".json.tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << value.dump(2) << "\n";
  }
  fs::rename(tmp, target, ec);
  if (ec) fs::remove(tmp, ec);
}

}  // namespace zncoh
