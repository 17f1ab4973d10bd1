#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hino {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;

enum class ErrorCode {
  kInvalidArgument,
  kInsufficientLandmarks,
  kCollinearLandmarks,
  kConfigurationUnsupported,
  kRiccatiDivergence,
  kJumpCycle,
  kDivergence,
  kSchema,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when P loses positive definiteness; carries the time of failure.
class RiccatiDivergence : public Error {
 public:
  RiccatiDivergence(double t, const std::string& msg)
      : Error(ErrorCode::kRiccatiDivergence, msg), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct Tolerances {
  static constexpr double kOrthonormality = 1e-9;  // ||R R^T - I||_F and |det R - 1|
  static constexpr double kAntisymmetry = 1e-9;    // input check for vee
  static constexpr double kUnitAxis = 1e-12;       // | ||u|| - 1 |
  static constexpr double kSmallAngle = 1e-6;      // Taylor branch of exp
  static constexpr double kEigenGap = 1e-7;        // relative gap for "repeated" eigenvalues
  static constexpr double kCollinear = 1e-9;       // relative size of a "zero" eigenvalue of M
  static constexpr double kSymmetry = 1e-9;        // P symmetry check
  static constexpr double kTie = 1e-12;            // relative to tr(M), gamma tie-break
  static constexpr double kDivergence = 1e6;       // any error norm above this aborts a run
};

}  // namespace hino
