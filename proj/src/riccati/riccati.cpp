#include "hino/riccati.hpp"

#include <sstream>

namespace hino {

const char* to_string(RiccatiVariant v) {
  switch (v) {
    case RiccatiVariant::kNoBias6: return "no-bias-6";
    case RiccatiVariant::kGyroBias6: return "gyro-bias-6";
    case RiccatiVariant::kFullBias9: return "full-bias-9";
  }
  return "unknown";
}

int state_dim(RiccatiVariant v) { return v == RiccatiVariant::kFullBias9 ? 9 : 6; }

MatX system_matrix(RiccatiVariant v, const Vec3& varpi) {
  const int n = state_dim(v);
  const Mat3 W = hat(varpi);
  MatX A = MatX::Zero(n, n);
  A.block<3, 3>(0, 0) = -W;
  A.block<3, 3>(0, 3) = Mat3::Identity();
  A.block<3, 3>(3, 3) = -W;
  if (n == 9) A.block<3, 3>(3, 6) = Mat3::Identity();
  return A;
}

MatX output_matrix(RiccatiVariant v) {
  MatX C = MatX::Zero(3, state_dim(v));
  C.block<3, 3>(0, 0) = Mat3::Identity();
  return C;
}

MatX cre_rhs(const MatX& P, const MatX& A, const MatX& C, const Mat3& Q, const MatX& V) {
  const MatX PCt = P * C.transpose();
  return A * P + P * A.transpose() - PCt * Q * PCt.transpose() + V;
}

MatX open_loop_rhs(const MatX& P, const MatX& A, const MatX& V) { return A * P + P * A.transpose() + V; }

MatX symmetrize(const MatX& P) { return 0.5 * (P + P.transpose()); }

void check_positive_definite(const MatX& P, double t) {
  if (!P.allFinite()) {
    std::ostringstream os;
    os << "Riccati solution became non-finite at t = " << t;
    throw RiccatiDivergence(t, os.str());
  }
  Eigen::LLT<MatX> llt(P);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "Riccati solution lost positive definiteness at t = " << t;
    throw RiccatiDivergence(t, os.str());
  }
}

namespace {

template <class Rhs>
MatX rk4(const MatX& P, double dt, Rhs&& f) {
  const MatX k1 = f(P);
  const MatX k2 = f(P + 0.5 * dt * k1);
  const MatX k3 = f(P + 0.5 * dt * k2);
  const MatX k4 = f(P + dt * k3);
  return P + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

CreState cre_step(const CreState& s, const MatX& A, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "cre_step: dt must be positive");
  const MatX C = output_matrix(s.P.rows() == 9 ? RiccatiVariant::kFullBias9 : RiccatiVariant::kNoBias6);
  CreState out = s;
  out.P = symmetrize(rk4(s.P, dt, [&](const MatX& P) { return cre_rhs(P, A, C, s.Q, s.V); }));
  out.t = s.t + dt;
  check_positive_definite(out.P, out.t);
  return out;
}

CreState open_loop_step(const CreState& s, const MatX& A, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "open_loop_step: dt must be positive");
  CreState out = s;
  out.P = symmetrize(rk4(s.P, dt, [&](const MatX& P) { return open_loop_rhs(P, A, s.V); }));
  out.t = s.t + dt;
  check_positive_definite(out.P, out.t);
  return out;
}

DiscreteCorrection discrete_correction(const MatX& P, const Mat3& Q, double t) {
  const MatX C = output_matrix(P.rows() == 9 ? RiccatiVariant::kFullBias9 : RiccatiVariant::kNoBias6);
  const MatX PCt = P * C.transpose();
  const Mat3 S = C * PCt + Q.inverse();
  DiscreteCorrection out;
  out.L = PCt * S.inverse();
  out.P = symmetrize(P - out.L * C * P);
  check_positive_definite(out.P, t);
  return out;
}

VariableGains gains_from_l(const MatX& L, const Rot3& Rhat, double k_c) {
  VariableGains g;
  const Mat3 Rt = Rhat.transpose();
  g.K_p = Rhat * L.block<3, 3>(0, 0) * Rt / k_c;
  g.K_v = Rhat * L.block<3, 3>(3, 0) * Rt / k_c;
  if (L.rows() == 9) g.K_a = Rhat * L.block<3, 3>(6, 0) * Rt / k_c;
  return g;
}

VariableGains extract_gains(const MatX& P, const Mat3& Q, const Rot3& Rhat, double k_c) {
  // C = [I 0 ...] so P C^T is the first block column of P
  const MatX L = P.leftCols<3>() * Q;
  return gains_from_l(L, Rhat, k_c);
}

}  // namespace hino
