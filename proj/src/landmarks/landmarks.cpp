#include "hino/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hino {

void sorted_eigen(const Mat3& M, Vec3& values, Mat3& vectors) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(M);
  // Eigen returns ascending order
  for (int i = 0; i < 3; ++i) {
    values(i) = es.eigenvalues()(2 - i);
    Vec3 v = es.eigenvectors().col(2 - i);
    Eigen::Index k;
    v.cwiseAbs().maxCoeff(&k);
    if (v(k) < 0.0) v = -v;
    vectors.col(i) = v;
  }
}

LandmarkSet build_landmark_set(const std::vector<Vec3>& points, const std::vector<double>& weights) {
  if (points.size() != weights.size())
    throw Error(ErrorCode::kInvalidArgument, "landmark points and weights differ in length");
  if (points.size() < 3)
    throw Error(ErrorCode::kInsufficientLandmarks,
                "need at least 3 landmarks, got " + std::to_string(points.size()));
  LandmarkSet L;
  L.points = points;
  L.weights = weights;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw Error(ErrorCode::kInvalidArgument, "landmark weight " + std::to_string(i) + " is not positive");
    if (!points[i].allFinite())
      throw Error(ErrorCode::kInvalidArgument, "landmark " + std::to_string(i) + " is not finite");
    L.k_c += weights[i];
    L.p_c += weights[i] * points[i];
  }
  L.p_c /= L.k_c;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3 d = points[i] - L.p_c;
    L.M += weights[i] * d * d.transpose();
  }
  L.M = 0.5 * (L.M + L.M.transpose());
  sorted_eigen(L.M, L.eigenvalues, L.eigenvectors);

  const double scale = std::max(L.eigenvalues(0), 0.0);
  int zeros = 0;
  for (int i = 0; i < 3; ++i)
    if (L.eigenvalues(i) <= Tolerances::kCollinear * scale) ++zeros;
  if (scale <= 0.0 || zeros >= 2)
    throw Error(ErrorCode::kCollinearLandmarks, "landmarks are collinear (M has two zero eigenvalues)");
  return L;
}

TransformationSet build_transformation_set(const LandmarkSet& L, double theta, const std::vector<Vec3>& axes) {
  if (!(theta > 0.0 && theta <= M_PI))
    throw Error(ErrorCode::kInvalidArgument, "transformation angle must lie in (0, pi]");
  if (axes.empty()) throw Error(ErrorCode::kInvalidArgument, "transformation set needs at least one axis");
  TransformationSet Q;
  Q.theta = theta;
  for (const Vec3& u : axes) {
    const Rot3 Rq = angle_axis_to_rot({theta, u});
    Q.axes.push_back(u);
    Q.rots.push_back(Rq);
    Q.elements.push_back({Rq, Vec3::Zero(), (Mat3::Identity() - Rq) * L.p_c});
  }
  return Q;
}

TransformationSet build_transformation_set(const LandmarkSet& L, double theta, AxisPolicy policy) {
  std::vector<Vec3> axes;
  if (policy == AxisPolicy::kEigenbasis) {
    for (int i = 0; i < 3; ++i) axes.push_back(L.eigenvectors.col(i));
  } else {
    axes = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  }
  if (policy == AxisPolicy::kEigenbasis && !eigenbasis_condition(L.eigenvalues))
    throw Error(ErrorCode::kConfigurationUnsupported,
                "eigenbasis policy needs lambda1 >= lambda2 >= lambda3 > 0 or lambda1 > lambda2 > lambda3 = 0");
  if (policy == AxisPolicy::kOrthogonalTriple && !(L.M.trace() - 2.0 * L.eigenvalues(0) > 0.0))
    throw Error(ErrorCode::kConfigurationUnsupported, "orthogonal-triple policy needs tr(M) - 2 lambda_max > 0");
  return build_transformation_set(L, theta, axes);
}

Mat3 mbar(const Mat3& M) { return 0.5 * (M.trace() * Mat3::Identity() - M); }

int jump_bound(const Mat3& M, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "jump_bound: delta must be positive");
  Vec3 ev;
  Mat3 evec;
  sorted_eigen(mbar(M), ev, evec);
  return static_cast<int>(std::ceil(4.0 * ev(0) / delta));
}

HybridGap make_hybrid_gap_explicit(const LandmarkSet& L, const TransformationSet& Q, double delta) {
  const DeltaMStar d = delta_m_star(L.M, Q.axes);
  HybridGap g;
  g.delta_m_star = d.value;
  g.policy = d.branch;
  g.delta_max = (1.0 - std::cos(Q.theta)) * d.value;
  g.delta = delta;
  if (!(delta > 0.0) || !(delta < g.delta_max))
    throw Error(ErrorCode::kConfigurationUnsupported,
                "delta = " + std::to_string(delta) + " violates 0 < delta < (1 - cos theta) Delta*_M = " +
                    std::to_string(g.delta_max));
  return g;
}

HybridGap make_hybrid_gap(const LandmarkSet& L, const TransformationSet& Q, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "delta fraction must lie in (0, 1)");
  const DeltaMStar d = delta_m_star(L.M, Q.axes);
  return make_hybrid_gap_explicit(L, Q, fraction * (1.0 - std::cos(Q.theta)) * d.value);
}

double cost_upsilon(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y) {
  if (y.size() != L.size())
    throw Error(ErrorCode::kInvalidArgument, "measurement count does not match landmark count");
  Vec3 y_c = Vec3::Zero();
  for (std::size_t i = 0; i < y.size(); ++i) y_c += L.weights[i] * y[i];
  y_c /= L.k_c;
  double cost = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    cost += L.weights[i] * ((L.points[i] - L.p_c) - Xhat.rot * (y[i] - y_c)).squaredNorm();
  return 0.5 * cost;
}

JumpEvaluation evaluate_jump(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y,
                             const TransformationSet& Q) {
  if (Q.size() == 0) throw Error(ErrorCode::kInvalidArgument, "transformation set is empty");
  JumpEvaluation ev;
  ev.costs.reserve(Q.size());
  for (std::size_t q = 0; q < Q.size(); ++q) ev.costs.push_back(cost_upsilon(inverse(Q.elements[q]) * Xhat, L, y));
  const double best = *std::min_element(ev.costs.begin(), ev.costs.end());
  // costs equal up to rounding count as a tie; the lowest index wins
  const double tie = Tolerances::kTie * std::max(1.0, L.M.trace());
  while (ev.costs[ev.argmin] > best + tie) ++ev.argmin;
  ev.mu = cost_upsilon(Xhat, L, y) - best;
  return ev;
}

double mu_q(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y, const TransformationSet& Q) {
  return evaluate_jump(Xhat, L, y, Q).mu;
}

SE23 gamma_select(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y, const TransformationSet& Q) {
  return Q.elements[evaluate_jump(Xhat, L, y, Q).argmin];
}

}  // namespace hino
