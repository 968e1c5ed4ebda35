#pragma once

// The classify / metrize / verify / geodesic / report commands. Each one
// builds a JSON report (schema in docs/report_schema.md) and an exit status.

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "berwald/cli/config.hpp"

namespace berwald::cli {

enum ExitCode { kExitOk = 0, kExitFail = 1, kExitUndetermined = 2, kExitUsage = 64 };

inline constexpr int kSchemaVersion = 1;

struct GlobalOptions {
  std::optional<std::pair<int, int>> grid;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tol_overrides;  // name=value
  std::string json_path;
  bool quiet = false;
};

struct GeodesicArgs {
  std::optional<TangentPoint> initial;
  std::optional<double> T;
  std::optional<int> n_out;
  std::string out;          // autoparallel trajectory; empty: not written
  std::string finsler_out;  // Finsler trajectory; setting it turns on the comparison
  bool compare = false;
};

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json report;
};

// Applies --grid, --seed and --tol-override. UsageError on bad values.
Tolerances apply_globals(const GlobalOptions& g, JobConfig& cfg);

CommandResult cmd_classify(const JobConfig& cfg, const Tolerances& tol);
CommandResult cmd_metrize(const JobConfig& cfg, const Tolerances& tol);
CommandResult cmd_verify(const JobConfig& cfg, const Tolerances& tol);
CommandResult cmd_geodesic(const JobConfig& cfg, const Tolerances& tol, const GeodesicArgs& args);

// Human-readable table for any report produced above.
std::string render_human(const nlohmann::json& report);

// Full command line handling; returns the exit status.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace berwald::cli
