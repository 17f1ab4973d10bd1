#pragma once

#include "hino/cli/bundle.hpp"
#include "hino/cli/csv.hpp"
#include "hino/cli/scenario_file.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hino {

// Process exit codes of the hino tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitSchema = 2,       // malformed scenario or bundle, bad arguments
  kExitDivergence = 3,   // estimate or Riccati divergence, jump cycle
  kExitUnsupported = 4,  // landmark configuration cannot support the observer
};

int exit_code_for(ErrorCode code);

struct SimulateOptions {
  std::string scenario;
  std::optional<RunMode> mode;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string export_bundle;  // empty = none
};

struct ReplayOptions {
  std::string bundle;
  std::string config;  // scenario file; observer, riccati and run.gravity are used
  std::string out_dir;
  std::string truth;   // optional truth.csv
};

/// Writes <out>/estimate.csv and <out>/summary.json.
int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);
/// Runs cmd_simulate per scenario on `jobs` worker threads; each scenario
/// writes into <out>/<scenario file stem>/. Returns the largest exit code.
int cmd_simulate_batch(const std::vector<std::string>& scenarios, const SimulateOptions& common, int jobs,
                       std::ostream& out, std::ostream& err);
int cmd_replay(const ReplayOptions& opt, std::ostream& out, std::ostream& err);
int cmd_diagnose(const std::string& scenario, std::ostream& out, std::ostream& err);

/// Summary document written next to the estimate log.
std::string run_summary_json(const Scenario& sc, const RunLog& log, const ObserverConfig& cfg,
                             const std::string& command);

}  // namespace hino
