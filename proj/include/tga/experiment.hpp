#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tga/search.hpp"
#include "tga/serialize.hpp"
#include "tga/spaces.hpp"
#include "tga/verify.hpp"

namespace tga {

inline constexpr int kReportSchemaVersion = 1;

/// Suite names accepted in a config.
const std::vector<std::string>& suite_names();

struct ExperimentConfig {
  std::vector<SpaceSpec> spaces;
  std::vector<std::string> suites;
  /// Random search budget; the seed is mandatory in config files.
  SearchConfig budget;
  /// Family used by the exhaustive checks and the classification suite.
  ExhaustiveFamily family{6, {1.0, 0.5}, 50000};
  std::string output_dir;
  bool write_json = true;
  bool write_csv = true;

  std::size_t identity_samples = 1000;
  std::size_t horizon = 256;
  std::vector<double> tolerances{1e-1, 1e-2, 1e-3};
  double eps = 0.5;
  std::vector<std::size_t> classify_dimensions{4, 6, 8};
  std::vector<std::size_t> question1_dimensions{8, 16, 32, 64};
};

/// Parses a config record:
///   {"spaces": [...], "suites": [...], "budget": {"seed": 1, ...},
///    "family": {...}, "output": {"directory": ..., "formats": ["json", "csv"]},
///    "options": {"identity_samples", "horizon", "tolerances", "eps",
///                "classify_dimensions", "question1_dimensions"}}
/// Throws InputError on unknown keys, missing seed, empty space or suite lists.
ExperimentConfig experiment_config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

/// Result of one (space, suite) task.
struct SuiteReport {
  std::string space;
  std::string slug;
  std::string suite;
  std::vector<CheckReport> checks;
  Json results = Json::object();
  /// Residual curve rows, CSV text without the header; empty when not produced.
  std::string csv;
  /// Replayable records of the worst identity instances.
  std::vector<Json> samples;
};

SuiteReport run_suite(const SpaceSpec& space, const std::string& suite, const ExperimentConfig& config,
                      std::uint64_t seed);
Json to_json(const SuiteReport& r);

/// Header of the residual-curve CSV.
inline constexpr const char* kResidualCsvHeader = "n,greedy_residual,cesaro_residual,vp_residual";

struct RunOutcome {
  int exit_code = 0;
  Json summary;
  /// Payload files of failed checks, relative to the output directory.
  std::vector<std::string> failures;
};

/// Runs every (space, suite) pair on `jobs` workers and writes
///   <out>/<slug>/<suite>.json, <out>/<slug>/<suite>_residuals.csv, <out>/payloads/*.json,
///   <out>/summary.json.
/// Exit code 1 when some identity or exact-mode inequality check failed, else 0.
RunOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& out, unsigned jobs = 1);

/// Recomputes the instance of a payload. A "recorded" field, when present, is compared
/// with the recomputed report and any difference is flagged in details["recorded_mismatch"].
/// Throws InputError for malformed payloads.
CheckReport replay(const Json& payload);

/// True when a replayed report disagrees with its recorded values or fails.
bool replay_failed(const CheckReport& r);

/// Catalog of example spaces with their config records.
std::vector<SpaceSpec> example_spaces();

}  // namespace tga
