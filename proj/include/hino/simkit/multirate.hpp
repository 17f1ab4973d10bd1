#pragma once

#include "hino/simkit/run.hpp"

#include <map>
#include <vector>

namespace hino {

struct ImuSample {
  double t = 0.0;
  Vec3 gyro = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
};

struct LandmarkObservation {
  int id = 0;
  Vec3 y = Vec3::Zero();
};

struct LandmarkFrame {
  double t = 0.0;
  std::vector<LandmarkObservation> obs;
};

struct LandmarkCatalog {
  std::vector<int> ids;
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::size_t size() const { return ids.size(); }
};

/// IMU stream, landmark map and landmark frames, all time-sorted.
struct MultirateInput {
  std::vector<ImuSample> imu;
  LandmarkCatalog catalog;
  std::vector<LandmarkFrame> frames;
  std::map<double, TruthState> truth;  // keyed by timestamp, optional
};

struct MultirateOptions {
  int log_every = 1;        // IMU samples between log rows
  int n_min = 3;            // frames with fewer distinct ids are skipped
  double max_step = 1e-3;   // s, RK4 substep bound between events
  bool record_covariance = false;
};

/// Continuous-discrete loop: prediction with zero-order-hold IMU between
/// events, discrete_update at every usable frame. Frames observing a subset of
/// the catalog use a configuration rebuilt for that subset.
RunLog run_multirate(const MultirateInput& in, const ObserverConfig& cfg, const ObserverState& init,
                     const MultirateOptions& opt = {});

/// true for frame indices removed by the scripted dropout pattern.
bool frame_dropped(long frame_index, double fraction);

/// IMU samples at imu.rate and landmark frames at landmarks.rate (every
/// landmark observed, dropout applied), with truth at every IMU timestamp.
MultirateInput simulate_streams(const Scenario& sc);

LandmarkCatalog scenario_catalog(const Scenario& sc);

RunLog run_algorithm1(const Scenario& sc, const RunOptions& opt = {});

}  // namespace hino
