#pragma once

#include "hino/observers.hpp"
#include "hino/simkit/trajectory.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace hino {

struct TrajectorySpec {
  enum class Kind { kCircle, kHover, kWaypoints };
  Kind kind = Kind::kCircle;
  double radius = 10.0;  // m
  double rate = 0.8;     // rad/s
  double height = 10.0;  // m
  Vec3 hover_position = Vec3::Zero();
  std::vector<double> waypoint_times;
  std::vector<Vec3> waypoint_points;
  OmegaSpec omega;
  Rot3 initial_rotation = Rot3::Identity();
};

struct ImuSpec {
  double rate = 200.0;                    // Hz, continuous-discrete mode only
  Vec3 gyro_variance = Vec3::Zero();      // (rad/s)^2 per sample
  Vec3 accel_variance = Vec3::Zero();     // (m/s^2)^2 per sample
  Vec3 gyro_bias = Vec3::Zero();          // rad/s
  Vec3 accel_bias = Vec3::Zero();         // m/s^2
};

struct LandmarkSpec {
  std::vector<Vec3> points;
  std::vector<double> weights;
  double rate = 20.0;                     // Hz, continuous-discrete mode only
  Vec3 noise_variance = Vec3::Zero();     // m^2 per sample
  double dropout_fraction = 0.0;          // deterministic pattern of skipped frames
};

struct InitialEstimate {
  double attitude_angle = 0.99 * M_PI;    // rad
  int attitude_eigen_axis = 0;            // index into the eigenbasis of M, or -1
  Vec3 attitude_axis = Vec3::UnitX();     // used when attitude_eigen_axis < 0
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 gyro_bias = Vec3::Zero();
  Vec3 accel_bias = Vec3::Zero();
};

struct ObserverSpec {
  ObserverKind kind = ObserverKind::kHino;
  bool estimate_gyro_bias = true;
  FixedGains gains;
  HybridDesign design;
  InitialEstimate initial;
};

struct RiccatiSpec {
  // empty = defaults for the state dimension (6: 0.5 I, I; 9: I, 0.05 I)
  MatX P0;
  MatX V;
  Mat3 Q = 10.0 * Mat3::Identity();
};

enum class RunMode { kContinuous, kAlgorithm1 };
const char* to_string(RunMode m);

struct RunSpec {
  RunMode mode = RunMode::kContinuous;
  double duration = 30.0;   // s
  double dt = 1e-3;         // s, integration step
  int truth_substeps = 10;  // truth integrated at dt / truth_substeps
  std::uint64_t seed = 1;
  int log_every = 10;       // steps (continuous) or IMU samples (continuous-discrete)
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
};

struct Scenario {
  std::string name = "scenario";
  TrajectorySpec trajectory;
  ImuSpec imu;
  LandmarkSpec landmarks;
  ObserverSpec observer;
  RiccatiSpec riccati;
  RunSpec run;
};

/// Throws kSchema with a description when a field is out of range.
void validate(const Scenario& sc);

std::unique_ptr<Trajectory> make_trajectory(const TrajectorySpec& spec);
LandmarkSet scenario_landmarks(const Scenario& sc);
CreSettings scenario_cre(const Scenario& sc);
ObserverConfig build_observer_config(const Scenario& sc);
SE23 initial_estimate(const Scenario& sc, const ObserverConfig& cfg);

/// Landmark set shipped with the bundled scenarios (six points, k_i = 1/6).
LandmarkSpec default_landmarks();
/// Circle trajectory, HINO with gyro-bias estimation, noise-free.
Scenario paper_fig3_scenario();
/// Circle trajectory, HINO-CRE2 with gyro and accelerometer bias, noise-free.
Scenario paper_fig4_scenario();

}  // namespace hino
