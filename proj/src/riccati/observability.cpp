#include "hino/riccati.hpp"

#include <algorithm>
#include <cmath>

namespace hino {
namespace {

// RK4 for dR/dt = (-w(t))^x R over [t0, t1], re-projected at the end
Mat3 propagate_rbar(const OmegaFn& w, const Mat3& R0, double t0, double t1, double max_step) {
  const double span = t1 - t0;
  if (span <= 0.0) return R0;
  const int n = std::max(1, static_cast<int>(std::ceil(span / max_step)));
  const double h = span / n;
  Mat3 R = R0;
  auto f = [&](double t, const Mat3& X) -> Mat3 { return -hat(w(t)) * X; };
  for (int k = 0; k < n; ++k) {
    const double t = t0 + k * h;
    const Mat3 k1 = f(t, R);
    const Mat3 k2 = f(t + 0.5 * h, R + 0.5 * h * k1);
    const Mat3 k3 = f(t + 0.5 * h, R + 0.5 * h * k2);
    const Mat3 k4 = f(t + h, R + h * k3);
    R += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return orthonormalize(R);
}

MatX phibar6(double s) {
  MatX P = MatX::Identity(6, 6);
  P.block<3, 3>(0, 3) = s * Mat3::Identity();
  return P;
}

MatX blkdiag2(const Mat3& R) {
  MatX T = MatX::Zero(6, 6);
  T.block<3, 3>(0, 0) = R;
  T.block<3, 3>(3, 3) = R;
  return T;
}

MatX phi_step(RiccatiVariant v, const OmegaFn& w, const MatX& Phi0, double t0, double t1, double max_step) {
  const double span = t1 - t0;
  if (span <= 0.0) return Phi0;
  const int n = std::max(1, static_cast<int>(std::ceil(span / max_step)));
  const double h = span / n;
  MatX Phi = Phi0;
  for (int k = 0; k < n; ++k) {
    const double t = t0 + k * h;
    const MatX A0 = system_matrix(v, w(t));
    const MatX Am = system_matrix(v, w(t + 0.5 * h));
    const MatX A1 = system_matrix(v, w(t + h));
    const MatX k1 = A0 * Phi;
    const MatX k2 = Am * (Phi + 0.5 * h * k1);
    const MatX k3 = Am * (Phi + 0.5 * h * k2);
    const MatX k4 = A1 * (Phi + h * k3);
    Phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return Phi;
}

}  // namespace

MatX transition_factorization(const OmegaFn& varpi, double t, double tau, double max_step) {
  if (t < tau) throw Error(ErrorCode::kInvalidArgument, "transition_factorization: need tau <= t");
  // Rbar(tau) = I, so T(tau) = I and Phi = T(t) exp(Abar (t - tau))
  const Mat3 Rbar = propagate_rbar(varpi, Mat3::Identity(), tau, t, max_step);
  return blkdiag2(Rbar) * phibar6(t - tau);
}

MatX transition_direct(RiccatiVariant v, const OmegaFn& varpi, double t, double tau, double step) {
  if (t < tau) throw Error(ErrorCode::kInvalidArgument, "transition_direct: need tau <= t");
  const int n = state_dim(v);
  return phi_step(v, varpi, MatX::Identity(n, n), tau, t, step);
}

Gramian observability_gramian(RiccatiVariant v, const OmegaFn& varpi, double t, double window, int subintervals) {
  if (!(window > 0.0)) throw Error(ErrorCode::kInvalidArgument, "observability window must be positive");
  if (subintervals < 2 || subintervals % 2 != 0)
    throw Error(ErrorCode::kInvalidArgument, "Simpson quadrature needs an even number of subintervals");
  const int n = state_dim(v);
  const MatX C = output_matrix(v);
  const double h = window / subintervals;
  constexpr double kMaxStep = 1e-3;

  MatX W = MatX::Zero(n, n);
  Mat3 Rbar = Mat3::Identity();
  MatX Phi = MatX::Identity(n, n);
  for (int k = 0; k <= subintervals; ++k) {
    const double tk = t + k * h;
    if (k > 0) {
      if (n == 6)
        Rbar = propagate_rbar(varpi, Rbar, tk - h, tk, kMaxStep);
      else
        Phi = phi_step(v, varpi, Phi, tk - h, tk, kMaxStep);
    }
    const MatX Phik = n == 6 ? MatX(blkdiag2(Rbar) * phibar6(k * h)) : Phi;
    const double wk = (k == 0 || k == subintervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    const MatX CPhi = C * Phik;
    W += wk * CPhi.transpose() * CPhi;
  }
  W *= h / 3.0 / window;
  Gramian g;
  g.W = symmetrize(W);
  g.lambda_min = Eigen::SelfAdjointEigenSolver<MatX>(g.W, Eigen::EigenvaluesOnly).eigenvalues()(0);
  return g;
}

Eigen::Matrix<double, 9, 9> observability_matrix(const Vec3& omega, const Vec3& omega_dot, const Vec3& bhat_w,
                                                 const Vec3& bhat_w_dot) {
  const Mat3 W = hat(omega - bhat_w);
  const Mat3 Wdot = hat(omega_dot - bhat_w_dot);
  Eigen::Matrix<double, 9, 9> O = Eigen::Matrix<double, 9, 9>::Zero();
  O.block<3, 3>(0, 0) = Mat3::Identity();
  O.block<3, 3>(3, 0) = -W;
  O.block<3, 3>(3, 3) = Mat3::Identity();
  O.block<3, 3>(6, 0) = W * W - Wdot;
  O.block<3, 3>(6, 3) = -2.0 * W;
  O.block<3, 3>(6, 6) = Mat3::Identity();
  return O;
}

double observability_matrix_check(const Vec3& omega, const Vec3& omega_dot, const Vec3& bhat_w,
                                  const Vec3& bhat_w_dot) {
  return observability_matrix(omega, omega_dot, bhat_w, bhat_w_dot).fullPivLu().determinant();
}

}  // namespace hino
