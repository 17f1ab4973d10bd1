#pragma once

#include "hino/simkit/measurements.hpp"
#include "hino/simkit/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hino {

struct ErrorNorms {
  double rot = 0.0;  // |R Rhat^T|_I
  double pos = 0.0;
  double vel = 0.0;
  double bw = 0.0;
  double ba = 0.0;

  double max() const;
};

ErrorNorms error_norms(const TruthState& truth, const ObserverState& est);

struct LogRecord {
  double t = 0.0;
  int j = 0;
  SE23 X;
  Vec3 bw = Vec3::Zero();
  Vec3 ba = Vec3::Zero();
  double mu_q = 0.0;
  bool jump = false;  // first row of a duplicated (t, j), (t, j + 1) pair
  std::optional<TruthState> truth;
  ErrorNorms err;
  double cost_R = 0.0;  // tr((I - R~) M), simulation only
  double p_eig_min = 0.0;
  double p_eig_max = 0.0;
  MatX P;  // recorded on request
};

struct RunLog {
  std::vector<LogRecord> records;
  std::vector<JumpRecord> jumps;
  std::vector<std::string> warnings;
  int skipped_frames = 0;
  double p_min = 0.0;  // extreme eigenvalues of P over the run, 0 for fixed gains
  double p_max = 0.0;
  bool has_truth = false;

  const LogRecord& last() const { return records.back(); }
};

struct RunOptions {
  int log_every = 0;  // 0 = scenario value
  bool record_covariance = false;
  std::optional<ObserverState> initial_state;  // overrides the scenario's initial estimate
  std::optional<ObserverConfig> config;        // overrides build_observer_config(sc)
};

/// Joint fixed-step integration of truth and observer with landmark outputs
/// available at every step and a jump check after each step (and at t = 0).
RunLog run_continuous(const Scenario& sc, const RunOptions& opt = {});

ObserverState scenario_initial_state(const Scenario& sc, const ObserverConfig& cfg);

/// Fills a log row from the current state.
LogRecord make_record(const ObserverState& s, const ObserverConfig& cfg, const std::vector<Vec3>& y,
                      const TruthState* truth, bool record_covariance);

/// Throws kDivergence when any error norm or state entry is non-finite or above the limit.
void check_divergence(const LogRecord& r);

}  // namespace hino
