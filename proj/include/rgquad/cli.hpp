#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rgquad/catalog.hpp"
#include "rgquad/model.hpp"

namespace rgquad::cli {

using Json = nlohmann::ordered_json;

/// Malformed configuration or command line (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { kJson, kTsv };
enum class SolverMethod { kHomotopy, kMultistart, kAuto };

inline constexpr std::uint64_t kDefaultSeed = 12345;

struct Tolerances {
  double integrability = 1e-10;
  double solver = 1e-12;
  /// Default derived from the system (1e-7 * (1 + max sqrt K_i)).
  std::optional<double> dedupe;
  /// Max-norm distance for matching solver tuples to oracle tuples.
  double oracle = 1e-8;
};

struct SolverConfig {
  SolverMethod method = SolverMethod::kAuto;
  std::uint64_t seed = kDefaultSeed;
  int max_iter = 100;
  std::optional<std::size_t> sample_count;
};

struct OracleConfig {
  bool enabled = true;
  int dimension_cap = kDefaultSpinCap;
};

struct OutputConfig {
  OutputFormat format = OutputFormat::kJson;
  std::optional<std::string> path;
  bool timings = true;
};

struct InlineModel {
  std::vector<Vec3> B;
  std::vector<std::vector<Vec3>> Gamma;
};

struct RunConfig {
  std::variant<CatalogParams, InlineModel> model;
  Tolerances tolerances;
  SolverConfig solver;
  OracleConfig oracle;
  OutputConfig output;
};

/// Strict parser: unknown keys, missing fields, non-real numbers and
/// non-positive tolerances raise ConfigError naming the offending field.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);
/// Fully resolved config, suitable for re-running.
Json to_json(const RunConfig& config);

ModelSpec build_model(const RunConfig& config);

/// Command-line and environment overrides, applied after the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> cap;          // --cap
  std::optional<int> env_cap;      // RGQUAD_CAP
  std::optional<OutputFormat> format;
  std::optional<std::string> output;
};

void apply_overrides(RunConfig& config, const Overrides& o);

struct CommandResult {
  int exit_code = 0;
  Json report;
};

CommandResult cmd_check(const RunConfig& config);
CommandResult cmd_derive(const RunConfig& config);
CommandResult cmd_solve(const RunConfig& config, bool allow_incomplete);
CommandResult cmd_verify(const RunConfig& config, bool allow_incomplete);
Json cmd_catalog();

/// Exit code as a pure function of a report.
int exit_code_for(const Json& report);

std::string render_json(const Json& report);
std::string render_tsv(const Json& report);
/// Short human-readable summary table.
std::string render_summary(const Json& report);

/// Entry point of the `rgquad` tool.
int run(int argc, char** argv);

}  // namespace rgquad::cli
