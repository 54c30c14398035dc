// Command-line front end: analyze, compare, rank, rst, isotropy, census, fixtures.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "zncoh/error.hpp"
#include "zncoh/report.hpp"

namespace {

using zncoh::Json;

struct CommonFlags {
  std::string input;
  long max_degree = -1;
  std::string engine = "both";
  std::string variant = "both";
  long prime = 0;
  std::string format = "json";
  bool no_cache = false;
};

std::optional<long> prime_of(const CommonFlags& f) {
  if (f.prime == 0) return std::nullopt;
  return f.prime;
}

void emit(const Json& result, const CommonFlags& f) {
  if (f.format == "json") {
    std::cout << result.dump(2) << "\n";
  } else if (f.format == "md") {
    std::cout << zncoh::render_markdown(result, prime_of(f));
  } else {
    std::cout << zncoh::render_csv(result, prime_of(f));
  }
}

std::size_t degree_bound(const CommonFlags& f, const zncoh::InputDocument& input) {
  return f.max_degree >= 0 ? static_cast<std::size_t>(f.max_degree) : input.spec.n + 3;
}

template <class Compute>
Json cached(const std::string& command, const CommonFlags& f, const zncoh::InputDocument& input,
            std::size_t max_degree, Compute compute) {
  if (f.no_cache) return compute();
  zncoh::ResultCache cache(zncoh::ResultCache::default_dir());
  const std::string key = zncoh::ResultCache::key(command, input, f.engine, f.variant, max_degree);
  if (auto hit = cache.load(key)) return *hit;
  Json result = compute();
  cache.store(key, result);
  return result;
}

zncoh::RunOptions run_options(const CommonFlags& f, std::size_t max_degree) {
  zncoh::RunOptions o;
  o.max_degree = max_degree;
  o.engine = f.engine == "formula" ? zncoh::EngineChoice::Formula
             : f.engine == "oracle" ? zncoh::EngineChoice::Oracle
                                    : zncoh::EngineChoice::Both;
  o.variant = f.variant == "published" ? zncoh::VariantChoice::Published
              : f.variant == "corrected" ? zncoh::VariantChoice::Corrected
                                         : zncoh::VariantChoice::Both;
  return o;
}

int exit_code(zncoh::ErrorCategory c) {
  switch (c) {
    case zncoh::ErrorCategory::Validation: return 2;
    case zncoh::ErrorCategory::Invariant: return 3;
    case zncoh::ErrorCategory::Limit: return 4;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral cohomology of Z^n x| Z/m for square-free m"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto add_common = [&](CLI::App* sub, bool with_engines) {
    sub->add_option("input", flags.input, "Input JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "md", "csv"}));
    sub->add_option("--prime", flags.prime, "Restrict the torsion report to one prime");
    if (with_engines) {
      sub->add_option("--max-degree", flags.max_degree, "Largest degree (default n+3)")->check(CLI::NonNegativeNumber);
      sub->add_option("--engine", flags.engine, "Engines to run")->check(CLI::IsMember({"formula", "oracle", "both"}));
      sub->add_option("--variant", flags.variant, "Formula variants")
          ->check(CLI::IsMember({"published", "corrected", "both"}));
      sub->add_flag("--no-cache", flags.no_cache, "Skip the result cache");
    }
  };

  auto* analyze = app.add_subcommand("analyze", "Cohomology tables from the selected engines");
  add_common(analyze, true);
  auto* compare = app.add_subcommand("compare", "Rank and torsion comparison of all engines");
  add_common(compare, true);
  auto* rank = app.add_subcommand("rank", "Free ranks from the three rank computations");
  add_common(rank, true);
  auto* rst = app.add_subcommand("rst", "Per-prime (r,s,t) decomposition");
  add_common(rst, false);
  auto* isotropy = app.add_subcommand("isotropy", "Per-prime isotropy divisors D, m_d, k_d");
  add_common(isotropy, false);
  auto* census = app.add_subcommand("census", "Cyclotomic census, free action and finite subgroup counts");
  add_common(census, false);
  auto* fixtures = app.add_subcommand("fixtures", "List the shipped fixtures with their comparison summary");
  std::string fixture_dir;
  fixtures->add_option("--dir", fixture_dir, "Fixture directory");
  fixtures->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "md"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (fixtures->parsed()) {
      const auto dir = fixture_dir.empty() ? zncoh::default_fixture_dir() : std::filesystem::path(fixture_dir);
      Json list = Json::array();
      for (const auto& fx : zncoh::fixture_suite(dir)) {
        const Json report = zncoh::run_compare(fx.input, fx.input.spec.n + 3);
        const Json& s = report.at("summary");
        list.push_back(Json{{"name", fx.name},
                            {"file", fx.path.filename().string()},
                            {"n", fx.input.spec.n},
                            {"m", fx.input.spec.m},
                            {"rank_agreements", s.at("rank_agreements")},
                            {"degrees", s.at("degrees")},
                            {"published_disagreements", s.at("published_disagreements")},
                            {"corrected_disagreements", s.at("corrected_disagreements")},
                            {"calibration", report.at("calibration")}});
      }
      if (flags.format == "md") {
        std::cout << "| fixture | n | m | ranks agree | published mismatches | corrected mismatches | "
                     "half-degree cutoff | degree-minus-one cutoff |\n|---|---|---|---|---|---|---|---|\n";
        for (const auto& f : list) {
          const Json& c = f.at("calibration");
          std::cout << "| " << f.at("name").get<std::string>() << " | " << f.at("n") << " | " << f.at("m") << " | "
                    << f.at("rank_agreements") << "/" << f.at("degrees") << " | " << f.at("published_disagreements")
                    << " | " << f.at("corrected_disagreements") << " | "
                    << (c.at("half-degree").at("matches_oracle").get<bool>() ? "matches" : "differs") << " | "
                    << (c.at("degree-minus-one").at("matches_oracle").get<bool>() ? "matches" : "differs") << " |\n";
        }
      } else {
        std::cout << list.dump(2) << "\n";
      }
      return 0;
    }

    const zncoh::InputDocument input = zncoh::load_input(flags.input);
    Json result;
    if (analyze->parsed()) {
      const std::size_t L = degree_bound(flags, input);
      result = cached("analyze", flags, input, L, [&] { return zncoh::run_analyze(input, run_options(flags, L)); });
    } else if (compare->parsed()) {
      const std::size_t L = degree_bound(flags, input);
      result = cached("compare", flags, input, L, [&] { return zncoh::run_compare(input, L); });
    } else if (rank->parsed()) {
      const std::size_t L = degree_bound(flags, input);
      result = cached("rank", flags, input, L, [&] { return zncoh::run_rank(input, L); });
    } else if (rst->parsed()) {
      result = zncoh::run_rst(input, prime_of(flags));
    } else if (isotropy->parsed()) {
      result = zncoh::run_isotropy(input, prime_of(flags));
    } else if (census->parsed()) {
      result = zncoh::run_census(input);
    }
    emit(result, flags);
    return 0;
  } catch (const zncoh::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
