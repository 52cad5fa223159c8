#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gacomb/action.hpp"
#include "gacomb/types.hpp"

// Scenario runner behind the command-line tool: a JSON config names an
// action, a list of generated sets and a list of operations; running it
// produces a report holding every certificate.
namespace gacomb::scenario {

using Json = nlohmann::ordered_json;

inline constexpr const char* kScenarioSchema = "gacomb-scenario/1";
inline constexpr const char* kReportSchema = "gacomb-report/1";

/// Malformed or inconsistent scenario (bad reference, missing field, value
/// out of range). Parse errors carry the line and column.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolved scenario: the action and every named set.
struct Context {
  Json config;
  std::optional<std::uint64_t> seed_override;
  ActionPtr action;
  std::map<std::string, ElementSet> elements;
  std::map<std::string, PointSet> points;
};

/// Typed view of one operation's "args" object.
class Args {
 public:
  Args(const Context& ctx, std::string op, const Json& args);

  const GroupAction& action() const { return *ctx_.action; }

  const ElementSet& elements(const char* key) const;
  std::optional<ElementSet> optional_elements(const char* key) const;
  std::vector<ElementSet> element_family(const char* key) const;
  const PointSet& points(const char* key) const;
  Point point(const char* key) const;
  Rational rational(const char* key) const;
  std::optional<Rational> optional_rational(const char* key) const;
  std::uint32_t count(const char* key) const;
  std::vector<std::int64_t> integers(const char* key) const;
  /// Fails on any key not read by the operation.
  void finish() const;

 private:
  const Json& field(const char* key) const;
  [[noreturn]] void fail(const std::string& what) const;

  const Context& ctx_;
  std::string op_;
  Json args_;
  mutable std::vector<std::string> seen_;
};

struct Operation {
  std::string name;
  std::string summary;
  /// Computes the certificate.
  std::function<Json(const Args&)> run;
  /// Strict-parses a recorded certificate and runs its checker.
  std::function<std::vector<std::string>(const Args&, const Json&)> check;
};

const std::vector<Operation>& operations();
const Operation* find_operation(const std::string& name);

/// Statement slugs used in checker messages, with a one-line description.
const std::vector<std::pair<std::string, std::string>>& statements();

Json read_json_file(const std::filesystem::path& path);
/// Parses text, rethrowing parse errors as ValidationError with line and column.
Json parse_json_text(const std::string& text, const std::string& origin);

/// Validates the config and builds its action and sets. A seed override is
/// added to the seed of every randomized generator.
Context load(const Json& config, std::optional<std::uint64_t> seed_override = std::nullopt);

struct RunResult {
  Json report;
  Json timings;
  bool ok = true;
};

RunResult run(const Context& ctx);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Re-checks a report against its scenario: strict parse and checker for
/// every certificate, and equality with a fresh recomputation.
VerifyResult verify(const Context& ctx, const Json& report);

/// Summary rows (id, op, field, value) for every scalar top-level certificate field.
std::string csv_summary(const Json& report);

/// Report and CSV paths named by the config, resolved under out_dir.
std::filesystem::path report_path(const Json& config, const std::filesystem::path& out_dir);
std::optional<std::filesystem::path> csv_path(const Json& config, const std::filesystem::path& out_dir);

}  // namespace gacomb::scenario
