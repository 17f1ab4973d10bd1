#pragma once

#include "hino/observers.hpp"
#include "hino/simkit/scenario.hpp"

#include <random>

namespace hino {

struct TruthState {
  SE23 X;
  Vec3 bw = Vec3::Zero();
  Vec3 ba = Vec3::Zero();
  double t = 0.0;
};

/// Exact body-frame inputs at a truth state.
struct TruthInputs {
  Vec3 omega = Vec3::Zero();
  Vec3 accel = Vec3::Zero();  // R^T (dv/dt - g)
};

/// Integrates R from omega(t) with RK4 on a fine grid; v and p are read from
/// the analytic trajectory.
class TruthPropagator {
 public:
  TruthPropagator(const Trajectory& traj, const Rot3& R0, const Vec3& gravity, const Vec3& bw, const Vec3& ba,
                  double substep);
  const TruthState& state() const { return s_; }
  TruthInputs inputs() const;
  /// Advances to t using steps of at most the configured substep, then re-projects R.
  void advance_to(double t);

 private:
  const Trajectory& traj_;
  Vec3 g_;
  double h_;
  TruthState s_;
};

/// y_i = R^T (p_i - p)
std::vector<Vec3> landmark_outputs(const SE23& X, const LandmarkSet& L);

/// Gaussian noise per axis; standard deviations are sqrt of the configured variances.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : rng_(seed) {}
  Vec3 sample(const Vec3& variance);

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Additive noise drawn for one sample instant; held over an integration step.
struct NoiseDraw {
  Vec3 gyro = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
  std::vector<Vec3> landmarks;
};

NoiseDraw draw_noise(NoiseSource& src, const Scenario& sc, std::size_t n_landmarks, bool with_landmarks);

/// omega_y = omega + b_w + n, a_y = a + b_a + n, y_i = R^T (p_i - p) + n_i.
/// Landmark outputs are omitted when with_landmarks is false.
MeasurementSample synthesize_measurements(const TruthState& truth, const TruthInputs& in, const LandmarkSet& L,
                                          const NoiseDraw& noise, bool with_landmarks);

/// Truth at time t from R(0) (fine RK4), for spot checks.
TruthState synthesize_truth(const Scenario& sc, double t, TruthInputs* inputs = nullptr);

}  // namespace hino
