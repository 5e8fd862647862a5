#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "anomaly/model.hpp"

namespace anomaly {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct Tolerances {
  double quadrature = 1e-9;
  double eta_oracle = 1e-6;
};

struct OutputSpec {
  std::string report_path; // empty: stdout only
  std::optional<std::string> csv_path;
};

struct JobSpec {
  std::string command; // charge | flow | eta | forms | validate | reference | suite
  std::optional<SpacetimeModel> model;
  Tolerances tolerances;
  OutputSpec output;
  std::uint64_t seed = 0;
  int flow_samples = 129;
  double validate_tol = 1e-10;
  int suite_cases = 200;

  nlohmann::ordered_json echo; // normalized job document for the report
};

struct RunResult {
  int exit_code = 0;
  nlohmann::ordered_json report;
};

// Exit codes: 0 success, 1 failed check (validation / suite failures),
// 2 usage or schema error, 3 precondition error, 4 accuracy error.
enum ExitCode {
  kExitOk = 0,
  kExitFailedCheck = 1,
  kExitUsage = 2,
  kExitPrecondition = 3,
  kExitAccuracy = 4,
};

// Parses and validates a job document; throws JobParseError with a JSON
// pointer to the offending field.
JobSpec parse_job(const nlohmann::json& doc);

nlohmann::ordered_json serialize_model(const SpacetimeModel& model);

// Executes the job and assembles the report.  Writes report/CSV files when
// paths are configured (atomically, temp file + rename).  Never throws for
// domain failures; they are encoded in the exit code and report.
RunResult run(const JobSpec& job);

} // namespace anomaly
