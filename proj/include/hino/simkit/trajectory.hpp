#pragma once

#include "hino/liegroup.hpp"

#include <memory>
#include <vector>

namespace hino {

/// Body angular velocity profile. kSinusoidal replaces the x component by
/// sin(frequency * t); kConstant uses `value` as is.
struct OmegaSpec {
  enum class Profile { kConstant, kSinusoidal };
  Profile profile = Profile::kConstant;
  Vec3 value = Vec3(std::sin(0.3 * M_PI), 0.0, 0.1);  // rad/s
  double frequency = 0.3 * M_PI;                        // rad/s, sinusoidal only

  Vec3 at(double t) const;
  Vec3 derivative(double t) const;
};

class Trajectory {
 public:
  virtual ~Trajectory() = default;
  virtual Vec3 position(double t) const = 0;
  virtual Vec3 velocity(double t) const = 0;
  virtual Vec3 acceleration(double t) const = 0;  // inertial dv/dt
  Vec3 omega(double t) const { return omega_.at(t); }
  Vec3 omega_dot(double t) const { return omega_.derivative(t); }
  const OmegaSpec& omega_spec() const { return omega_; }

 protected:
  explicit Trajectory(OmegaSpec w) : omega_(w) {}
  OmegaSpec omega_;
};

/// p(t) = [r cos(w t), r sin(w t), h]
class CircleTrajectory : public Trajectory {
 public:
  CircleTrajectory(double radius, double rate, double height, OmegaSpec w)
      : Trajectory(w), r_(radius), w_(rate), h_(height) {}
  Vec3 position(double t) const override;
  Vec3 velocity(double t) const override;
  Vec3 acceleration(double t) const override;

 private:
  double r_, w_, h_;
};

class HoverTrajectory : public Trajectory {
 public:
  HoverTrajectory(const Vec3& p, OmegaSpec w) : Trajectory(w), p_(p) {}
  Vec3 position(double) const override { return p_; }
  Vec3 velocity(double) const override { return Vec3::Zero(); }
  Vec3 acceleration(double) const override { return Vec3::Zero(); }

 private:
  Vec3 p_;
};

/// Interpolating cubic B-spline through timed waypoints (chord parameter = time).
class WaypointTrajectory : public Trajectory {
 public:
  WaypointTrajectory(const std::vector<double>& times, const std::vector<Vec3>& points, OmegaSpec w);
  ~WaypointTrajectory() override;
  Vec3 position(double t) const override;
  Vec3 velocity(double t) const override;
  Vec3 acceleration(double t) const override;
  double end_time() const { return t1_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double t0_, t1_;
};

}  // namespace hino
