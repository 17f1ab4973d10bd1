#include "hino/simkit/scenario.hpp"

#include <cmath>

namespace hino {

const char* to_string(RunMode m) {
  return m == RunMode::kContinuous ? "continuous" : "algorithm1";
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kSchema, what);
}

bool nonneg(const Vec3& v) { return (v.array() >= 0.0).all() && v.allFinite(); }

}  // namespace

void validate(const Scenario& sc) {
  const auto& tr = sc.trajectory;
  require(std::isfinite(tr.radius) && tr.radius >= 0.0, "trajectory.radius must be >= 0");
  require(std::isfinite(tr.rate), "trajectory.rate must be finite");
  require(is_rotation(tr.initial_rotation), "trajectory.initial_rotation must be a rotation matrix");
  if (tr.kind == TrajectorySpec::Kind::kWaypoints)
    require(tr.waypoint_times.size() == tr.waypoint_points.size() && tr.waypoint_times.size() >= 2,
            "trajectory.waypoints needs at least two entries");

  require(sc.imu.rate > 0.0, "imu.rate must be > 0");
  require(sc.landmarks.rate > 0.0, "landmarks.rate must be > 0");
  require(sc.imu.rate >= sc.landmarks.rate, "imu.rate must be >= landmarks.rate");
  require(nonneg(sc.imu.gyro_variance) && nonneg(sc.imu.accel_variance), "imu variances must be >= 0");
  require(nonneg(sc.landmarks.noise_variance), "landmarks.noise_variance must be >= 0");
  require(sc.landmarks.dropout_fraction >= 0.0 && sc.landmarks.dropout_fraction < 1.0,
          "landmarks.dropout_fraction must be in [0, 1)");
  require(sc.landmarks.weights.empty() || sc.landmarks.weights.size() == sc.landmarks.points.size(),
          "landmarks.weights must match landmarks.points in length");

  const auto& g = sc.observer.gains;
  require(g.k_R > 0.0 && g.k_p > 0.0 && g.k_v > 0.0 && g.k_w > 0.0, "observer gains must be > 0");
  require(sc.observer.design.theta > 0.0 && sc.observer.design.theta <= M_PI, "observer.theta must be in (0, pi]");
  require(sc.observer.initial.attitude_eigen_axis >= -1 && sc.observer.initial.attitude_eigen_axis <= 2,
          "observer.initial.attitude_eigen_axis must be -1, 0, 1 or 2");

  require(sc.run.duration > 0.0, "run.duration must be > 0");
  require(sc.run.dt > 0.0 && sc.run.dt <= sc.run.duration, "run.dt must be in (0, duration]");
  require(sc.run.truth_substeps >= 1, "run.truth_substeps must be >= 1");
  require(sc.run.log_every >= 1, "run.log_every must be >= 1");
  if (sc.run.mode == RunMode::kAlgorithm1) {
    const double ratio = sc.imu.rate / sc.landmarks.rate;
    require(std::abs(ratio - std::round(ratio)) < 1e-9, "imu.rate must be an integer multiple of landmarks.rate");
  }
}

std::unique_ptr<Trajectory> make_trajectory(const TrajectorySpec& spec) {
  switch (spec.kind) {
    case TrajectorySpec::Kind::kCircle:
      return std::make_unique<CircleTrajectory>(spec.radius, spec.rate, spec.height, spec.omega);
    case TrajectorySpec::Kind::kHover:
      return std::make_unique<HoverTrajectory>(spec.hover_position, spec.omega);
    case TrajectorySpec::Kind::kWaypoints:
      return std::make_unique<WaypointTrajectory>(spec.waypoint_times, spec.waypoint_points, spec.omega);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown trajectory kind");
}

LandmarkSet scenario_landmarks(const Scenario& sc) {
  std::vector<double> w = sc.landmarks.weights;
  if (w.empty()) w.assign(sc.landmarks.points.size(), 1.0 / static_cast<double>(sc.landmarks.points.size()));
  return build_landmark_set(sc.landmarks.points, w);
}

namespace {

bool is_variable(ObserverKind k) { return k == ObserverKind::kHinoCre || k == ObserverKind::kHinoCre2; }

}  // namespace

CreSettings scenario_cre(const Scenario& sc) {
  CreSettings cre;
  cre.Q = sc.riccati.Q;
  if (!is_variable(sc.observer.kind)) return cre;
  const int n = sc.observer.kind == ObserverKind::kHinoCre2 ? 9 : 6;
  const bool nine = n == 9;
  cre.P0 = sc.riccati.P0.size() ? sc.riccati.P0 : MatX((nine ? 1.0 : 0.5) * MatX::Identity(n, n));
  cre.V = sc.riccati.V.size() ? sc.riccati.V : MatX((nine ? 0.05 : 1.0) * MatX::Identity(n, n));
  return cre;
}

ObserverConfig build_observer_config(const Scenario& sc) {
  return make_observer_config(sc.observer.kind, sc.observer.estimate_gyro_bias, sc.observer.gains,
                              scenario_landmarks(sc), sc.observer.design, scenario_cre(sc), sc.run.gravity);
}

SE23 initial_estimate(const Scenario& sc, const ObserverConfig& cfg) {
  const InitialEstimate& ie = sc.observer.initial;
  const Vec3 u = ie.attitude_eigen_axis >= 0 ? Vec3(cfg.landmarks.eigenvectors.col(ie.attitude_eigen_axis))
                                             : ie.attitude_axis.normalized();
  SE23 X;
  X.rot = angle_axis_to_rot({ie.attitude_angle, u});
  X.vel = ie.velocity;
  X.pos = ie.position;
  return X;
}

LandmarkSpec default_landmarks() {
  LandmarkSpec spec;
  spec.points = {Vec3(-1.29, 1.57, 5.42), Vec3(0.31, -0.78, 5.25), Vec3(0.34, 1.24, 3.50),
                 Vec3(-0.07, 1.54, 3.78), Vec3(-1.24, -0.17, 3.70), Vec3(1.15, 1.32, 3.66)};
  spec.weights.assign(spec.points.size(), 1.0 / 6.0);
  return spec;
}

Scenario paper_fig3_scenario() {
  Scenario sc;
  sc.name = "paper_fig3";
  sc.landmarks = default_landmarks();
  sc.imu.gyro_bias = Vec3(-0.1, 0.02, 0.02);
  sc.observer.kind = ObserverKind::kHino;
  sc.observer.estimate_gyro_bias = true;
  sc.run.duration = 30.0;
  return sc;
}

Scenario paper_fig4_scenario() {
  Scenario sc = paper_fig3_scenario();
  sc.name = "paper_fig4";
  sc.imu.accel_bias = Vec3(-0.01, 0.55, 0.07);
  sc.observer.kind = ObserverKind::kHinoCre2;
  sc.run.duration = 40.0;
  return sc;
}

}  // namespace hino
