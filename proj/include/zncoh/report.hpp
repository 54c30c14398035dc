#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zncoh/group_model.hpp"
#include "zncoh/oracle.hpp"
#include "zncoh/torsion_formula.hpp"

namespace zncoh {

using Json = nlohmann::json;

/// Parsed input file: the group plus optional fixture annotations.
struct InputDocument {
  GroupSpec spec;  // validated
  std::map<long, PublishedPins> pins;
  Json expected = Json::object();
  std::string notes;
};

/// Throws Error(InvalidInput) with the offending field in the message; the group itself
/// is run through validate().
InputDocument parse_input(const Json& doc);
InputDocument load_input(const std::filesystem::path& path);

Json bigint_to_json(const BigInt& v);
BigInt bigint_from_json(const Json& v, const std::string& where);

Json spec_to_json(const GroupSpec& spec);
Json pins_to_json(const std::map<long, PublishedPins>& pins);
Json group_to_json(const AbelianGroup& g, std::size_t degree);
AbelianGroup group_from_json(const Json& j);
Json table_to_json(const CohomologyTable& table);
CohomologyTable table_from_json(const Json& j);

/// Rank from the wedge-eigenvalue count plus (Z/p)^theta for every prime of m.
CohomologyTable formula_table(const GroupSpec& spec, std::size_t max_degree, const TorsionOptions& options);

enum class EngineChoice { Formula, Oracle, Both };
enum class VariantChoice { Published, Corrected, Both };

struct RunOptions {
  std::size_t max_degree = 0;
  EngineChoice engine = EngineChoice::Both;
  VariantChoice variant = VariantChoice::Both;
};

/// Full comparison document: three rank engines, both formula variants (plus the
/// alternative corrected cutoff), the oracle, disagreements, cutoff calibration, notes.
Json run_compare(const InputDocument& input, std::size_t max_degree);

/// Tables for the selected engines/variants; embeds a comparison when both engines run.
Json run_analyze(const InputDocument& input, const RunOptions& options);

Json run_rank(const InputDocument& input, std::size_t max_degree);
Json run_rst(const InputDocument& input, std::optional<long> prime);
Json run_isotropy(const InputDocument& input, std::optional<long> prime);
Json run_census(const InputDocument& input);

std::string render_markdown(const Json& result, std::optional<long> prime);
std::string render_csv(const Json& result, std::optional<long> prime);

struct Fixture {
  std::string name;
  std::filesystem::path path;
  InputDocument input;
};

std::filesystem::path default_fixture_dir();
std::vector<Fixture> fixture_suite(const std::filesystem::path& dir);

/// Content-addressed store of result documents.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);
  /// ZNCOH_CACHE_DIR, else $XDG_CACHE_HOME/zncoh, else ~/.cache/zncoh.
  static std::filesystem::path default_dir();

  static std::string key(const std::string& command, const InputDocument& input, const std::string& engine,
                         const std::string& variant, std::size_t max_degree);
  std::optional<Json> load(const std::string& key) const;
  void store(const std::string& key, const Json& value) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

std::string sha256_hex(const std::string& data);

}  // namespace zncoh
