#pragma once

#include "hino/common.hpp"

namespace hino {

/// SO(3) elements are plain 3x3 matrices; is_rotation() checks the invariants.
using Rot3 = Mat3;

struct AngleAxis {
  double theta = 0.0;  // rad, [0, pi] when produced by rot_to_angle_axis
  Vec3 axis = Vec3::UnitX();
};

/// Element of SE_2(3): T(R, v, p) = [R v p; 0 1 0; 0 0 1].
struct SE23 {
  Rot3 rot = Rot3::Identity();
  Vec3 vel = Vec3::Zero();
  Vec3 pos = Vec3::Zero();

  static SE23 identity() { return {}; }
  Mat5 matrix() const;
  static SE23 from_matrix(const Mat5& X);
};

/// Element of se_2(3): [omega^x alpha nu; 0 0 0; 0 0 0].
/// alpha sits in the velocity column, nu in the position column.
struct TangentSE23 {
  Vec3 omega = Vec3::Zero();
  Vec3 alpha = Vec3::Zero();
  Vec3 nu = Vec3::Zero();

  Mat5 matrix() const;
  TangentSE23 operator-() const { return {-omega, -alpha, -nu}; }
  TangentSE23 operator*(double s) const { return {s * omega, s * alpha, s * nu}; }
};

Mat3 hat(const Vec3& x);
/// Throws kInvalidArgument if W is not antisymmetric within tolerance.
Vec3 vee(const Mat3& W);

/// R_a(theta, u) = I + sin(theta) u^x + (1 - cos(theta)) (u^x)^2
Rot3 angle_axis_to_rot(const AngleAxis& aa);
AngleAxis rot_to_angle_axis(const Rot3& R);

/// |R|_I = sqrt(tr(I - R) / 4), clamped to [0, 1]
double rot_distance(const Rot3& R);

bool is_rotation(const Mat3& R, double tol = Tolerances::kOrthonormality);
/// Nearest rotation in the Frobenius sense (polar factor).
Rot3 orthonormalize(const Mat3& A);

SE23 compose(const SE23& a, const SE23& b);
SE23 inverse(const SE23& X);
inline SE23 operator*(const SE23& a, const SE23& b) { return compose(a, b); }

/// P_a(A) = (A - A^T) / 2
Mat3 proj_antisym(const Mat3& A);
/// psi(A) = vee(P_a(A))
Vec3 psi(const Mat3& A);

/// Orthogonal projection of a 5x5 matrix onto se_2(3).
TangentSE23 proj_se23(const Mat5& A);
/// Gain-weighted projection: [k_R P_a(A1), K_v a2, K_p a3].
TangentSE23 proj_se23_gains(const Mat5& A, double k_R, const Mat3& K_v, const Mat3& K_p);

/// Ad_X U = X U X^{-1}
TangentSE23 adjoint(const SE23& X, const TangentSE23& U);

SE23 exp_se23(const TangentSE23& U);

/// <<A, B>> = tr(A^T B)
inline double frobenius_inner(const Mat5& A, const Mat5& B) { return (A.transpose() * B).trace(); }

}  // namespace hino
