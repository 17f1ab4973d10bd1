#include "hino/simkit/trajectory.hpp"

#include <unsupported/Eigen/Splines>

#include <algorithm>
#include <cmath>

namespace hino {

Vec3 OmegaSpec::at(double t) const {
  if (profile == Profile::kConstant) return value;
  return Vec3(std::sin(frequency * t), value(1), value(2));
}

Vec3 OmegaSpec::derivative(double t) const {
  if (profile == Profile::kConstant) return Vec3::Zero();
  return Vec3(frequency * std::cos(frequency * t), 0.0, 0.0);
}

Vec3 CircleTrajectory::position(double t) const {
  return Vec3(r_ * std::cos(w_ * t), r_ * std::sin(w_ * t), h_);
}

Vec3 CircleTrajectory::velocity(double t) const {
  return Vec3(-r_ * w_ * std::sin(w_ * t), r_ * w_ * std::cos(w_ * t), 0.0);
}

Vec3 CircleTrajectory::acceleration(double t) const {
  return Vec3(-r_ * w_ * w_ * std::cos(w_ * t), -r_ * w_ * w_ * std::sin(w_ * t), 0.0);
}

struct WaypointTrajectory::Impl {
  Eigen::Spline3d spline;
};

WaypointTrajectory::WaypointTrajectory(const std::vector<double>& times, const std::vector<Vec3>& points, OmegaSpec w)
    : Trajectory(w), impl_(std::make_unique<Impl>()) {
  if (times.size() != points.size() || times.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "waypoint trajectory needs at least two timed waypoints");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw Error(ErrorCode::kInvalidArgument, "waypoint times must be strictly increasing");
  t0_ = times.front();
  t1_ = times.back();
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd pts(3, n);
  Eigen::RowVectorXd knots(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    pts.col(i) = points[i];
    knots(i) = (times[i] - t0_) / (t1_ - t0_);
  }
  const int degree = static_cast<int>(std::min<Eigen::Index>(3, n - 1));
  impl_->spline = Eigen::SplineFitting<Eigen::Spline3d>::Interpolate(pts, degree, knots);
}

WaypointTrajectory::~WaypointTrajectory() = default;

namespace {
double clamp01(double u) { return std::clamp(u, 0.0, 1.0); }
}  // namespace

Vec3 WaypointTrajectory::position(double t) const {
  return impl_->spline(clamp01((t - t0_) / (t1_ - t0_)));
}

Vec3 WaypointTrajectory::velocity(double t) const {
  const auto d = impl_->spline.derivatives(clamp01((t - t0_) / (t1_ - t0_)), 1);
  return d.col(1) / (t1_ - t0_);
}

Vec3 WaypointTrajectory::acceleration(double t) const {
  const auto d = impl_->spline.derivatives(clamp01((t - t0_) / (t1_ - t0_)), 2);
  const double T = t1_ - t0_;
  return d.col(2) / (T * T);
}

}  // namespace hino
