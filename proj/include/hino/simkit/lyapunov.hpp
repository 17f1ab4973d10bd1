#pragma once

#include "hino/simkit/run.hpp"

#include <vector>

namespace hino {

struct LyapunovParams {
  double epsilon = 0.0;  // weight of the translational part
  double mu = 0.0;       // cross term in L_p (fixed gains)
  double mu_bar = 0.0;   // cross term in the gyro-bias attitude function
};

/// 0 < mu < min{1/sqrt(k_c k_v), 4 k_p / (4 k_v + k_c k_p^2)}; returns the bound itself.
double mu_upper_bound(const FixedGains& g, double k_c);

/// min over the noise-free flow set {mu_Q <= delta} of 1 - |R~|_I^2 cos^2(u, Mbar u),
/// sampled on a Fibonacci sphere of axes times a uniform angle grid.
double rho_m(const ObserverConfig& cfg, int n_axes = 2000, int n_angles = 360);

/// Noise-free mu_Q as a function of R~ = R Rhat^T: max_q tr(R~ (R_q - I) M).
double mu_q_of_error(const Rot3& Rtilde, const ObserverConfig& cfg);

/// lambda_R lambda_min(P3) / (4 c1^2) for the given mu (fixed gains, no bias).
double epsilon_upper_bound(const ObserverConfig& cfg, double mu);

/// Half of each upper bound.
LyapunovParams admissible_params(const ObserverConfig& cfg);

struct TranslationalError {
  Vec3 p_e = Vec3::Zero();  // p~ - (I - R~) p_c, p~ = p - R~ phat
  Vec3 v = Vec3::Zero();    // v - R~ vhat
};

TranslationalError translational_error(const TruthState& truth, const SE23& Xhat, const Vec3& p_c);

/// L = L_R + epsilon L_p at every record; the variant follows the configuration:
/// fixed gains use 1/2 |p_e|^2 + 1/(2 k_c k_v) |v|^2 - mu p_e^T v, Riccati gains
/// x^T P^{-1} x with x = [R^T p_e; R^T v(; b_a - bhat_a)]. With gyro-bias estimation
/// L_R gains 1/k_w |bw~|^2 - mu_bar psi(R~)^T Rhat bw~. Records must carry truth
/// (and P for Riccati gains).
std::vector<double> lyapunov_eval(const RunLog& log, const ObserverConfig& cfg, const LyapunovParams& p);

struct LogLinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Least-squares fit of log(v) against t for t >= t_start, stopping at the first
/// sample below `floor`.
LogLinearFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& v, double t_start,
                            double floor);

/// Estimate at the undesired equilibrium R~ = R_a(pi, u_k), u_k the k-th eigenvector
/// of M, with p~_e = (k_c k_v)^{-1} (I - R~) g and v~ = k_c k_p p~_e.
SE23 undesired_equilibrium_estimate(const TruthState& truth, const ObserverConfig& cfg, int k);

}  // namespace hino
