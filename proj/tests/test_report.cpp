#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <fstream>

#include "zncoh/error.hpp"
#include "zncoh/report.hpp"

using namespace zncoh;

namespace {

const std::filesystem::path kFixtures = std::filesystem::path(ZNCOH_SOURCE_DIR) / "fixtures";

Json worked_example() {
  return Json::parse(R"({"name": "z5_z6", "n": 5, "m": 6,
    "phi": [[-1,0,0,0,0],[0,0,1,0,0],[0,1,0,0,0],[0,0,0,0,-1],[0,0,0,1,-1]]})");
}

ErrorKind rejection(const Json& doc) {
  try {
    parse_input(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected rejection");
  return ErrorKind::InvalidInput;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("zncoh_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("input parsing") {
  const InputDocument doc = parse_input(worked_example());
  CHECK(doc.spec.n == 5);
  CHECK(doc.spec.m == 6);
  CHECK(doc.spec.primes == std::vector<long>{2, 3});

  Json big = worked_example();
  big["phi"][0][0] = "-1";
  CHECK(parse_input(big).spec.phi == doc.spec.phi);

  Json bad = worked_example();
  bad.erase("m");
  CHECK(rejection(bad) == ErrorKind::InvalidInput);
  bad = worked_example();
  bad["phi"][1] = Json::array({0, 1});
  CHECK(rejection(bad) == ErrorKind::InvalidInput);
  bad = worked_example();
  bad["m"] = 12;
  CHECK(rejection(bad) == ErrorKind::NotSquareFree);
  bad = worked_example();
  bad["phi"][0][0] = 2;
  CHECK(rejection(bad) == ErrorKind::NotUnimodular);
  bad = worked_example();
  bad["phi"][0][0] = "x";
  CHECK(rejection(bad) == ErrorKind::InvalidInput);
  CHECK_THROWS_AS(load_input(kFixtures / "does_not_exist.json"), Error);
}

TEST_CASE("big integers and tables round trip through JSON") {
  const BigInt huge("123456789012345678901234567890");
  CHECK(bigint_from_json(bigint_to_json(huge), "x") == huge);
  CHECK(bigint_from_json(bigint_to_json(BigInt(-7)), "x") == -7);
  const InputDocument doc = parse_input(worked_example());
  const CohomologyTable oracle = e2_table(doc.spec, 8);
  CHECK(table_from_json(table_to_json(oracle)) == oracle);
  const CohomologyTable formula = formula_table(doc.spec, 8, TorsionOptions{});
  CHECK(table_from_json(table_to_json(formula)) == formula);
  const AbelianGroup g(2, {BigInt(2), BigInt(6), BigInt(1)});
  CHECK(group_from_json(group_to_json(g, 3)) == g);
}

TEST_CASE("reports are deterministic") {
  const InputDocument doc = parse_input(worked_example());
  CHECK(run_compare(doc, 8).dump() == run_compare(doc, 8).dump());
  RunOptions o;
  o.max_degree = 8;
  CHECK(run_analyze(doc, o).dump() == run_analyze(doc, o).dump());
  CHECK(render_markdown(run_compare(doc, 8), std::nullopt) == render_markdown(run_compare(doc, 8), std::nullopt));
  CHECK(render_csv(run_compare(doc, 8), 2L) == render_csv(run_compare(doc, 8), 2L));
}

TEST_CASE("comparison summary") {
  const InputDocument doc = parse_input(worked_example());
  const Json report = run_compare(doc, 12);
  const Json& summary = report.at("summary");
  CHECK(summary.at("degrees") == 13);
  CHECK(summary.at("rank_agreements") == 13);
  for (const auto& row : report.at("rows")) CHECK(row.at("rank").at("agree").get<bool>());
  CHECK(report.at("oracle_conditions") == kOracleConditions);
  bool has_parity_note = false;
  for (const auto& e : report.at("errata")) has_parity_note |= e.at("id") == "parity-restriction";
  CHECK(has_parity_note);
}

TEST_CASE("orbit-count failures are recorded in report cells") {
  const InputDocument doc = load_input(kFixtures / "p6.json");
  const Json report = run_compare(doc, 4);
  bool recorded = false;
  for (const auto& row : report.at("rows"))
    for (const auto& cell : row.at("theta"))
      if (cell.contains("corrected_error")) {
        recorded = true;
        CHECK(cell.at("corrected").is_null());
      }
  CHECK(recorded);
}

TEST_CASE("cache hit equals recomputation") {
  const auto dir = scratch_dir("cache");
  const ResultCache cache(dir);
  const InputDocument doc = parse_input(worked_example());
  const std::string key = ResultCache::key("compare", doc, "both", "both", 8);
  CHECK(key.size() == 64);
  CHECK(key != ResultCache::key("compare", doc, "both", "both", 9));
  CHECK(key != ResultCache::key("analyze", doc, "both", "both", 8));
  CHECK_FALSE(cache.load(key).has_value());
  const Json fresh = run_compare(doc, 8);
  cache.store(key, fresh);
  const auto hit = cache.load(key);
  REQUIRE(hit.has_value());
  CHECK(*hit == run_compare(doc, 8));
  std::filesystem::remove_all(dir);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("fixture annotations hold") {
  const std::vector<Fixture> suite = fixture_suite(kFixtures);
  CHECK(suite.size() >= 8);
  for (const Fixture& fx : suite) {
    CAPTURE(fx.name);
    const GroupSpec& spec = fx.input.spec;
    const Json& expected = fx.input.expected;
    if (expected.contains("groups")) {
      std::size_t top = 0;
      for (const auto& [degree, _] : expected.at("groups").items()) top = std::max(top, std::stoul(degree));
      const CohomologyTable oracle = e2_table(spec, top);
      for (const auto& [degree, text] : expected.at("groups").items())
        CHECK(oracle.groups[std::stoul(degree)].to_string() == text.get<std::string>());
    }
    if (expected.contains("rst")) {
      for (const auto& [prime, rst] : expected.at("rst").items()) {
        const RstDecomposition d = rst_decompose(spec, std::stol(prime));
        CHECK(Json::array({d.r, d.s, d.t}) == rst);
      }
    }
    if (expected.contains("free_outside_origin"))
      CHECK(free_outside_origin(spec).overall == expected.at("free_outside_origin").get<bool>());
    if (expected.contains("order_p_classes")) {
      const SubgroupCensus c = max_finite_subgroup_census(spec);
      for (const auto& [prime, count] : expected.at("order_p_classes").items())
        CHECK(c.order_p_classes.at(std::stol(prime)) == count.get<long>());
      if (expected.contains("closed_form"))
        for (const auto& [prime, count] : expected.at("closed_form").items())
          CHECK(*c.closed_form.at(std::stol(prime)) == count.get<long>());
    }
    if (expected.contains("isotropy")) {
      for (const auto& [prime, iso] : expected.at("isotropy").items()) {
        const long p = std::stol(prime);
        const IsotropyData data = isotropy_data(spec, p, rst_decompose(spec, p));
        CHECK(Json(data.divisors) == iso.at("D"));
        for (const auto& [d, k] : iso.at("k").items()) CHECK(data.k_of(std::stol(d)) == k.get<std::size_t>());
      }
    }
    if (expected.contains("ranks")) {
      const CohomologyTable oracle = e2_table(spec, expected.at("ranks").size() - 1);
      for (std::size_t l = 0; l < expected.at("ranks").size(); ++l)
        CHECK(oracle.groups[l].rank() == expected.at("ranks")[l].get<std::size_t>());
    }
    if (expected.contains("published_groups")) {
      TorsionOptions o;
      o.variant = TorsionVariant::Published;
      o.pins = fx.input.pins;
      const CohomologyTable published = formula_table(spec, 12, o);
      for (const auto& [degree, text] : expected.at("published_groups").items())
        CHECK(published.groups[std::stoul(degree)].to_string() == text.get<std::string>());
    }
  }
}

TEST_CASE("rejection fixture") {
  std::ifstream in(kFixtures / "m4_reject.json");
  const Json doc = Json::parse(in);
  CHECK(rejection(doc) == ErrorKind::NotSquareFree);
  CHECK(doc.at("expect_rejection") == "NotSquareFree");
}
