#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "onofri/quadrature.hpp"

namespace onofri {

enum class Command {
  constants,
  verify_onofri,
  verify_poincare,
  verify_gn,
  verify_logsob,
  limits,
  extrapolate,
  second_variation,
  minimize,
  report_all
};

enum class OutputFormat { json, csv };

/// Throws DomainError for unknown names.
Command parse_command(const std::string& name);
std::string command_name(Command c);
OutputFormat parse_format(const std::string& name);

/// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutputDirEnv = "ONOFRI_LAB_OUTPUT_DIR";

struct RunConfig {
  Command command = Command::constants;
  int d = 2;
  std::optional<double> p;
  std::optional<double> a;
  std::string profile;  // empty selects the command's default
  double tol = 1e-10;
  int radial_nodes = 48;
  int angular_nodes = 16;
  int max_refine = 4;
  int seeds = 3;
  std::string output_path;  // empty: $ONOFRI_LAB_OUTPUT_DIR/<command>.<format>, else stdout
  OutputFormat format = OutputFormat::json;
  bool timing = false;

  /// Throws DomainError on an inconsistent configuration.
  void validate() const;
  QuadratureSpec quadrature() const;
};

struct ReportRecord {
  std::string inequality;
  int d = 0;
  std::string profile;
  std::map<std::string, double> params;
  std::optional<double> lhs, rhs, deficit, quotient;
  double quad_error = 0.0;
  bool pass = true;
  long runtime_ms = 0;
  /// Plot-ready columns (JSON only).
  std::map<std::string, std::vector<double>> series;
};

/// pass <=> deficit >= -3 quad_error.
bool deficit_passes(double deficit, double quad_error);

struct RunResult {
  int exit_code = 0;  // 0 all pass, 1 violation, 2 failure
  std::vector<ReportRecord> records;
  std::string message;
};

/// Runs the command without touching the file system. Errors are caught and
/// turned into exit code 2.
RunResult run(const RunConfig& config);

std::string to_json(const RunConfig& config, const RunResult& result);
std::string to_csv(const RunResult& result);

/// Inverse of the record part of to_json / to_csv. Missing numbers read back
/// as empty optionals; `series` is not part of the CSV projection.
std::vector<ReportRecord> records_from_json(const std::string& text);
std::vector<ReportRecord> records_from_csv(const std::string& text);

/// File the report goes to, or empty for stdout.
std::string output_target(const RunConfig& config);

/// run + serialization + write. Returns the exit code.
int run_and_write(const RunConfig& config);

}  // namespace onofri
