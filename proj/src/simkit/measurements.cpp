#include "hino/simkit/measurements.hpp"

#include <cmath>

namespace hino {

TruthPropagator::TruthPropagator(const Trajectory& traj, const Rot3& R0, const Vec3& gravity, const Vec3& bw,
                                 const Vec3& ba, double substep)
    : traj_(traj), g_(gravity), h_(substep) {
  if (!(substep > 0.0)) throw Error(ErrorCode::kInvalidArgument, "truth substep must be positive");
  s_.X.rot = R0;
  s_.X.vel = traj.velocity(0.0);
  s_.X.pos = traj.position(0.0);
  s_.bw = bw;
  s_.ba = ba;
}

TruthInputs TruthPropagator::inputs() const {
  TruthInputs in;
  in.omega = traj_.omega(s_.t);
  in.accel = s_.X.rot.transpose() * (traj_.acceleration(s_.t) - g_);
  return in;
}

void TruthPropagator::advance_to(double t) {
  const double span = t - s_.t;
  if (span < 0.0) throw Error(ErrorCode::kInvalidArgument, "truth cannot move backwards in time");
  if (span == 0.0) return;
  const int n = static_cast<int>(std::ceil(span / h_ - 1e-9));
  const double h = span / n;
  Mat3 R = s_.X.rot;
  double tk = s_.t;
  for (int k = 0; k < n; ++k) {
    const Mat3 W1 = hat(traj_.omega(tk));
    const Mat3 Wh = hat(traj_.omega(tk + 0.5 * h));
    const Mat3 W4 = hat(traj_.omega(tk + h));
    const Mat3 k1 = R * W1;
    const Mat3 k2 = (R + 0.5 * h * k1) * Wh;
    const Mat3 k3 = (R + 0.5 * h * k2) * Wh;
    const Mat3 k4 = (R + h * k3) * W4;
    R += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tk = s_.t + (k + 1) * h;
  }
  s_.t = t;
  s_.X.rot = orthonormalize(R);
  s_.X.vel = traj_.velocity(t);
  s_.X.pos = traj_.position(t);
}

std::vector<Vec3> landmark_outputs(const SE23& X, const LandmarkSet& L) {
  std::vector<Vec3> y;
  y.reserve(L.size());
  for (const Vec3& p : L.points) y.push_back(X.rot.transpose() * (p - X.pos));
  return y;
}

Vec3 NoiseSource::sample(const Vec3& variance) {
  Vec3 n;
  for (int i = 0; i < 3; ++i) {
    const double z = normal_(rng_);
    n(i) = variance(i) > 0.0 ? std::sqrt(variance(i)) * z : 0.0;
  }
  return n;
}

NoiseDraw draw_noise(NoiseSource& src, const Scenario& sc, std::size_t n_landmarks, bool with_landmarks) {
  NoiseDraw d;
  d.gyro = src.sample(sc.imu.gyro_variance);
  d.accel = src.sample(sc.imu.accel_variance);
  if (with_landmarks) {
    d.landmarks.reserve(n_landmarks);
    for (std::size_t i = 0; i < n_landmarks; ++i) d.landmarks.push_back(src.sample(sc.landmarks.noise_variance));
  }
  return d;
}

MeasurementSample synthesize_measurements(const TruthState& truth, const TruthInputs& in, const LandmarkSet& L,
                                          const NoiseDraw& noise, bool with_landmarks) {
  MeasurementSample m;
  m.gyro = in.omega + truth.bw + noise.gyro;
  m.accel = in.accel + truth.ba + noise.accel;
  if (with_landmarks) {
    m.landmarks = landmark_outputs(truth.X, L);
    for (std::size_t i = 0; i < m.landmarks.size() && i < noise.landmarks.size(); ++i)
      m.landmarks[i] += noise.landmarks[i];
  }
  return m;
}

TruthState synthesize_truth(const Scenario& sc, double t, TruthInputs* inputs) {
  const auto traj = make_trajectory(sc.trajectory);
  TruthPropagator prop(*traj, sc.trajectory.initial_rotation, sc.run.gravity, sc.imu.gyro_bias, sc.imu.accel_bias,
                       sc.run.dt / sc.run.truth_substeps);
  prop.advance_to(t);
  if (inputs) *inputs = prop.inputs();
  return prop.state();
}

}  // namespace hino
