#include "hino/simkit/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hino {

double mu_upper_bound(const FixedGains& g, double k_c) {
  return std::min(1.0 / std::sqrt(k_c * g.k_v), 4.0 * g.k_p / (4.0 * g.k_v + k_c * g.k_p * g.k_p));
}

double mu_q_of_error(const Rot3& Rtilde, const ObserverConfig& cfg) {
  const Mat3& M = cfg.landmarks.M;
  double best = -std::numeric_limits<double>::infinity();
  for (const Rot3& Rq : cfg.transforms.rots)
    best = std::max(best, (Rtilde * (Rq - Mat3::Identity()) * M).trace());
  return best;
}

double rho_m(const ObserverConfig& cfg, int n_axes, int n_angles) {
  const Mat3 Mb = mbar(cfg.landmarks.M);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  double rho = 1.0;
  for (int i = 0; i < n_axes; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n_axes;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 u(r * std::cos(golden * i), r * std::sin(golden * i), z);
    const Vec3 Mu = Mb * u;
    const double c = u.dot(Mu) / Mu.norm();
    for (int k = 1; k <= n_angles; ++k) {
      const double theta = M_PI * k / n_angles;
      const Rot3 Rt = angle_axis_to_rot({theta, u});
      if (cfg.hybrid() && mu_q_of_error(Rt, cfg) > cfg.gap.delta) continue;
      const double s = std::sin(0.5 * theta);
      rho = std::min(rho, 1.0 - s * s * c * c);
    }
  }
  return rho;
}

double epsilon_upper_bound(const ObserverConfig& cfg, double mu) {
  const FixedGains& g = cfg.gains;
  const double k_c = cfg.landmarks.k_c;
  const Mat3 Mb = mbar(cfg.landmarks.M);
  const Mat3 Mb2 = Mb * Mb;
  const Mat3 Mu = Mb2.trace() * Mat3::Identity() - 2.0 * Mb2;
  const Mat3 Mub = 0.5 * (Mu.trace() * Mat3::Identity() - Mu);
  const double lam_R = 4.0 * g.k_R * rho_m(cfg) * Eigen::SelfAdjointEigenSolver<Mat3>(Mub).eigenvalues().minCoeff();

  Eigen::Matrix2d P3;
  P3 << (g.k_p - mu * g.k_v) * k_c, 0.5 * mu * k_c * g.k_p, 0.5 * mu * k_c * g.k_p, mu;
  const double lam_P3 = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(P3).eigenvalues().minCoeff();
  const double gn = cfg.gravity.norm();
  const double c1 = std::max(gn / (k_c * g.k_v), mu * gn);
  return lam_R * lam_P3 / (4.0 * c1 * c1);
}

LyapunovParams admissible_params(const ObserverConfig& cfg) {
  LyapunovParams p;
  p.mu = 0.5 * mu_upper_bound(cfg.gains, cfg.landmarks.k_c);
  p.epsilon = 0.5 * epsilon_upper_bound(cfg, p.mu);
  return p;
}

TranslationalError translational_error(const TruthState& truth, const SE23& Xhat, const Vec3& p_c) {
  const Rot3 Rt = truth.X.rot * Xhat.rot.transpose();
  TranslationalError e;
  e.p_e = truth.X.pos - Rt * Xhat.pos - (Mat3::Identity() - Rt) * p_c;
  e.v = truth.X.vel - Rt * Xhat.vel;
  return e;
}

std::vector<double> lyapunov_eval(const RunLog& log, const ObserverConfig& cfg, const LyapunovParams& p) {
  std::vector<double> out;
  out.reserve(log.records.size());
  const double k_c = cfg.landmarks.k_c;
  for (const LogRecord& r : log.records) {
    if (!r.truth) throw Error(ErrorCode::kInvalidArgument, "lyapunov_eval needs truth in every record");
    const TruthState& tr = *r.truth;
    const Rot3 Rt = tr.X.rot * r.X.rot.transpose();
    double L = ((Mat3::Identity() - Rt) * cfg.landmarks.M).trace();
    if (cfg.estimates_gyro_bias()) {
      const Vec3 bt = tr.bw - r.bw;
      L += bt.squaredNorm() / cfg.gains.k_w - p.mu_bar * psi(Rt).dot(r.X.rot * bt);
    }
    const TranslationalError e = translational_error(tr, r.X, cfg.landmarks.p_c);
    double Lp = 0.0;
    if (cfg.variable_gain()) {
      if (r.P.size() == 0) throw Error(ErrorCode::kInvalidArgument, "lyapunov_eval needs P in every record");
      Eigen::VectorXd x(r.P.rows());
      x.head<3>() = tr.X.rot.transpose() * e.p_e;
      x.segment<3>(3) = tr.X.rot.transpose() * e.v;
      if (x.size() == 9) x.tail<3>() = tr.ba - r.ba;
      Lp = x.dot(r.P.ldlt().solve(x));
    } else {
      Lp = 0.5 * e.p_e.squaredNorm() + e.v.squaredNorm() / (2.0 * k_c * cfg.gains.k_v) - p.mu * e.p_e.dot(e.v);
    }
    out.push_back(L + p.epsilon * Lp);
  }
  return out;
}

LogLinearFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& v, double t_start,
                            double floor) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size() && i < v.size(); ++i) {
    if (t[i] < t_start) continue;
    if (!(v[i] > floor)) break;
    xs.push_back(t[i]);
    ys.push_back(std::log(v[i]));
  }
  LogLinearFit f;
  f.n = xs.size();
  if (f.n < 2) return f;
  const double n = static_cast<double>(f.n);
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < f.n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < f.n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

SE23 undesired_equilibrium_estimate(const TruthState& truth, const ObserverConfig& cfg, int k) {
  const Vec3 u = cfg.landmarks.eigenvectors.col(k);
  const Rot3 Rt = angle_axis_to_rot({M_PI, u});
  const double k_c = cfg.landmarks.k_c;
  const Vec3 p_e = (Mat3::Identity() - Rt) * cfg.gravity / (k_c * cfg.gains.k_v);
  const Vec3 v_t = k_c * cfg.gains.k_p * p_e;
  const Vec3 p_t = p_e + (Mat3::Identity() - Rt) * cfg.landmarks.p_c;
  SE23 X;
  X.rot = Rt.transpose() * truth.X.rot;
  X.pos = Rt.transpose() * (truth.X.pos - p_t);
  X.vel = Rt.transpose() * (truth.X.vel - v_t);
  return X;
}

}  // namespace hino
