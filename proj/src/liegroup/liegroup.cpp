#include "hino/liegroup.hpp"

#include <algorithm>
#include <cmath>

namespace hino {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInsufficientLandmarks: return "insufficient-landmarks";
    case ErrorCode::kCollinearLandmarks: return "collinear-landmarks";
    case ErrorCode::kConfigurationUnsupported: return "configuration-unsupported";
    case ErrorCode::kRiccatiDivergence: return "riccati-divergence";
    case ErrorCode::kJumpCycle: return "jump-cycle";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Mat5 SE23::matrix() const {
  Mat5 X = Mat5::Identity();
  X.topLeftCorner<3, 3>() = rot;
  X.block<3, 1>(0, 3) = vel;
  X.block<3, 1>(0, 4) = pos;
  return X;
}

SE23 SE23::from_matrix(const Mat5& X) {
  return {X.topLeftCorner<3, 3>(), X.block<3, 1>(0, 3), X.block<3, 1>(0, 4)};
}

Mat5 TangentSE23::matrix() const {
  Mat5 U = Mat5::Zero();
  U.topLeftCorner<3, 3>() = hat(omega);
  U.block<3, 1>(0, 3) = alpha;
  U.block<3, 1>(0, 4) = nu;
  return U;
}

Mat3 hat(const Vec3& x) {
  Mat3 W;
  W << 0.0, -x(2), x(1),
       x(2), 0.0, -x(0),
       -x(1), x(0), 0.0;
  return W;
}

Vec3 vee(const Mat3& W) {
  if ((W + W.transpose()).norm() > Tolerances::kAntisymmetry * std::max(1.0, W.norm()))
    throw Error(ErrorCode::kInvalidArgument, "vee: matrix is not antisymmetric");
  return Vec3(W(2, 1), W(0, 2), W(1, 0));
}

Rot3 angle_axis_to_rot(const AngleAxis& aa) {
  if (std::abs(aa.axis.norm() - 1.0) > Tolerances::kUnitAxis)
    throw Error(ErrorCode::kInvalidArgument, "angle_axis_to_rot: axis is not a unit vector");
  const Mat3 U = hat(aa.axis);
  return Mat3::Identity() + std::sin(aa.theta) * U + (1.0 - std::cos(aa.theta)) * U * U;
}

AngleAxis rot_to_angle_axis(const Rot3& R) {
  const Vec3 s = psi(R);  // sin(theta) u
  const double c = 0.5 * (R.trace() - 1.0);
  const double theta = std::atan2(s.norm(), c);
  AngleAxis out;
  out.theta = theta;
  if (theta < Tolerances::kSmallAngle) return out;  // axis is arbitrary at the identity
  if (theta < 0.5 * M_PI) {
    out.axis = s.normalized();
    return out;
  }
  // near pi sin(theta) is small; read the axis from the symmetric part
  // (R + R^T)/2 = cos(theta) I + (1 - cos(theta)) u u^T
  const Mat3 uu = (0.5 * (R + R.transpose()) - c * Mat3::Identity()) / (1.0 - c);
  Eigen::Index k;
  uu.diagonal().maxCoeff(&k);
  Vec3 u = uu.col(k) / std::sqrt(std::max(uu(k, k), 1e-300));
  u.normalize();
  if (u.dot(s) < 0.0) u = -u;
  out.axis = u;
  return out;
}

double rot_distance(const Rot3& R) {
  const double d2 = 0.25 * (3.0 - R.trace());
  return std::sqrt(std::clamp(d2, 0.0, 1.0));
}

bool is_rotation(const Mat3& R, double tol) {
  return (R * R.transpose() - Mat3::Identity()).norm() <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

Rot3 orthonormalize(const Mat3& A) {
  Eigen::JacobiSVD<Mat3> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 U = svd.matrixU();
  const Mat3& V = svd.matrixV();
  if ((U * V.transpose()).determinant() < 0.0) U.col(2) *= -1.0;
  return U * V.transpose();
}

SE23 compose(const SE23& a, const SE23& b) {
  return {a.rot * b.rot, a.rot * b.vel + a.vel, a.rot * b.pos + a.pos};
}

SE23 inverse(const SE23& X) {
  const Mat3 Rt = X.rot.transpose();
  return {Rt, -Rt * X.vel, -Rt * X.pos};
}

Mat3 proj_antisym(const Mat3& A) { return 0.5 * (A - A.transpose()); }

Vec3 psi(const Mat3& A) {
  return 0.5 * Vec3(A(2, 1) - A(1, 2), A(0, 2) - A(2, 0), A(1, 0) - A(0, 1));
}

TangentSE23 proj_se23(const Mat5& A) {
  return {psi(A.topLeftCorner<3, 3>()), A.block<3, 1>(0, 3), A.block<3, 1>(0, 4)};
}

TangentSE23 proj_se23_gains(const Mat5& A, double k_R, const Mat3& K_v, const Mat3& K_p) {
  if (!(k_R > 0.0)) throw Error(ErrorCode::kInvalidArgument, "proj_se23_gains: k_R must be positive");
  return {k_R * psi(A.topLeftCorner<3, 3>()), K_v * A.block<3, 1>(0, 3), K_p * A.block<3, 1>(0, 4)};
}

TangentSE23 adjoint(const SE23& X, const TangentSE23& U) {
  // X U X^{-1} = [R W R^T, R alpha - (R omega)^x v, R nu - (R omega)^x p]
  const Vec3 w = X.rot * U.omega;
  return {w, X.rot * U.alpha - w.cross(X.vel), X.rot * U.nu - w.cross(X.pos)};
}

SE23 exp_se23(const TangentSE23& U) {
  const double theta = U.omega.norm();
  const Mat3 W = hat(U.omega);
  const Mat3 W2 = W * W;
  Mat3 R, J;
  if (theta < Tolerances::kSmallAngle) {
    R = Mat3::Identity() + W + 0.5 * W2;
    J = Mat3::Identity() + 0.5 * W + W2 / 6.0;
  } else {
    const double s = std::sin(theta), c = std::cos(theta);
    const double t2 = theta * theta;
    R = Mat3::Identity() + (s / theta) * W + ((1.0 - c) / t2) * W2;
    J = Mat3::Identity() + ((1.0 - c) / t2) * W + ((theta - s) / (t2 * theta)) * W2;
  }
  return {R, J * U.alpha, J * U.nu};
}

}  // namespace hino
