#pragma once

#include "hino/liegroup.hpp"

#include <functional>

namespace hino {

using MatX = Eigen::MatrixXd;

enum class RiccatiVariant { kNoBias6, kGyroBias6, kFullBias9 };

const char* to_string(RiccatiVariant v);
int state_dim(RiccatiVariant v);

/// A(t) for the error state (p_e, v[, b_a]) given varpi = omega_y - bhat_w.
MatX system_matrix(RiccatiVariant v, const Vec3& varpi);
/// C = [I3 0 ...]
MatX output_matrix(RiccatiVariant v);

struct CreState {
  MatX P;         // n x n, symmetric positive definite
  MatX V;         // n x n process weight
  Mat3 Q;         // output weight
  double t = 0.0; // for divergence reports
};

/// AP + PA^T - P C^T Q C P + V
MatX cre_rhs(const MatX& P, const MatX& A, const MatX& C, const Mat3& Q, const MatX& V);
/// AP + PA^T + V (prediction between discrete corrections)
MatX open_loop_rhs(const MatX& P, const MatX& A, const MatX& V);

/// One RK4 step of the continuous Riccati equation with A held constant.
CreState cre_step(const CreState& s, const MatX& A, double dt);
/// One RK4 step of the open-loop covariance flow.
CreState open_loop_step(const CreState& s, const MatX& A, double dt);

/// Throws RiccatiDivergence if P is not finite or Cholesky fails.
void check_positive_definite(const MatX& P, double t);
MatX symmetrize(const MatX& P);

struct DiscreteCorrection {
  MatX L;  // P C^T (C P C^T + Q^{-1})^{-1}
  MatX P;  // P - L C P, symmetrized
};
DiscreteCorrection discrete_correction(const MatX& P, const Mat3& Q, double t = 0.0);

struct VariableGains {
  Mat3 K_p = Mat3::Zero();
  Mat3 K_v = Mat3::Zero();
  Mat3 K_a = Mat3::Zero();  // zero for 6-state variants
};

/// K_i = R L_i R^T / k_c for the 3x3 blocks of L.
VariableGains gains_from_l(const MatX& L, const Rot3& Rhat, double k_c);
/// L = P C^T Q
VariableGains extract_gains(const MatX& P, const Mat3& Q, const Rot3& Rhat, double k_c);

using OmegaFn = std::function<Vec3(double)>;

/// Phi(t, tau) for the 6-state variants from T(t) exp(Abar (t - tau)) T(tau)^T,
/// with T = blkdiag(Rbar, Rbar) and dRbar/dt = (-omega)^x Rbar.
MatX transition_factorization(const OmegaFn& varpi, double t, double tau, double max_step = 1e-3);
/// Phi(t, tau) by RK4 integration of dPhi/dt = A(t) Phi.
MatX transition_direct(RiccatiVariant v, const OmegaFn& varpi, double t, double tau, double step = 1e-4);

struct Gramian {
  MatX W;
  double lambda_min = 0.0;
};

/// W(t, t + window) by composite Simpson; 6-state variants use the factorized
/// transition matrix, the 9-state one integrates it directly.
Gramian observability_gramian(RiccatiVariant v, const OmegaFn& varpi, double t, double window,
                              int subintervals = 64);

/// The 9x9 matrix [I 0 0; -w^x I 0; (w^x)^2 - wdot^x  -2 w^x  I] with
/// w = omega - bhat_w, and its determinant.
Eigen::Matrix<double, 9, 9> observability_matrix(const Vec3& omega, const Vec3& omega_dot, const Vec3& bhat_w,
                                                 const Vec3& bhat_w_dot);
double observability_matrix_check(const Vec3& omega, const Vec3& omega_dot, const Vec3& bhat_w,
                                  const Vec3& bhat_w_dot);

}  // namespace hino
