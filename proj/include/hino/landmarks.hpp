#pragma once

#include "hino/liegroup.hpp"

#include <cstddef>
#include <vector>

namespace hino {

struct LandmarkSet {
  std::vector<Vec3> points;     // p_i, inertial frame [m]
  std::vector<double> weights;  // k_i > 0
  double k_c = 0.0;             // sum of weights
  Vec3 p_c = Vec3::Zero();      // weighted centroid
  Mat3 M = Mat3::Zero();        // sum k_i (p_i - p_c)(p_i - p_c)^T
  Vec3 eigenvalues = Vec3::Zero();         // descending
  Mat3 eigenvectors = Mat3::Identity();    // columns match eigenvalues

  std::size_t size() const { return points.size(); }
};

/// Throws kInsufficientLandmarks (n < 3) or kCollinearLandmarks (two zero eigenvalues).
LandmarkSet build_landmark_set(const std::vector<Vec3>& points, const std::vector<double>& weights);

/// Symmetric eigen-decomposition, descending, with the largest-magnitude
/// component of each eigenvector made positive.
void sorted_eigen(const Mat3& M, Vec3& values, Mat3& vectors);

enum class AxisPolicy { kEigenbasis, kOrthogonalTriple };

struct TransformationSet {
  double theta = 0.0;
  std::vector<Vec3> axes;      // U
  std::vector<Rot3> rots;      // R_q = R_a(theta, u)
  std::vector<SE23> elements;  // X_q = T(R_q, 0, (I - R_q) p_c)

  std::size_t size() const { return elements.size(); }
};

TransformationSet build_transformation_set(const LandmarkSet& L, double theta, AxisPolicy policy);
TransformationSet build_transformation_set(const LandmarkSet& L, double theta, const std::vector<Vec3>& axes);

/// Delta_M(u, v) = u^T (tr(M_v) I - M_v) u with M_v = M (I - 2 v v^T)
double delta_m(const Vec3& u, const Vec3& v, const Mat3& M);

enum class GapBoundBranch { kEigenbasis, kOrthogonalTriple };

struct DeltaMStar {
  double value = 0.0;
  GapBoundBranch branch = GapBoundBranch::kEigenbasis;
  double lower_bound = 0.0;  // bound guaranteed by the applicable branch
};

/// min over eigenvectors v of M of max over u in U of Delta_M(u, v).
/// Repeated eigenvalues make the eigenvector set a circle or sphere; the
/// minimum is then searched over that whole set.
DeltaMStar delta_m_star(const Mat3& M, const std::vector<Vec3>& U);

/// lambda1 >= lambda2 >= lambda3 > 0, or lambda1 > lambda2 > lambda3 = 0
/// (descending input, equality judged with the relative eigen gap).
bool eigenbasis_condition(const Vec3& lambda);

/// Branch-specific lower bound for Delta*_M; throws kConfigurationUnsupported
/// when neither branch applies.
DeltaMStar gap_bound_branch(const Mat3& M, const std::vector<Vec3>& U);

struct HybridGap {
  double delta = 0.0;
  double delta_m_star = 0.0;
  GapBoundBranch policy = GapBoundBranch::kEigenbasis;
  double delta_max = 0.0;  // (1 - cos theta) Delta*_M, exclusive
};

/// delta = fraction * (1 - cos theta) * Delta*_M, fraction in (0, 1)
HybridGap make_hybrid_gap(const LandmarkSet& L, const TransformationSet& Q, double fraction = 0.3);
/// Validates an explicit delta against the gap condition.
HybridGap make_hybrid_gap_explicit(const LandmarkSet& L, const TransformationSet& Q, double delta);

/// J = ceil(4 lambda_max(Mbar) / delta), Mbar = (tr(M) I - M) / 2
int jump_bound(const Mat3& M, double delta);
Mat3 mbar(const Mat3& M);

/// Upsilon = 1/2 sum k_i || (p_i - p_c) - Rhat (y_i - y_c) ||^2
double cost_upsilon(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y);

struct JumpEvaluation {
  double mu = 0.0;             // mu_Q
  std::size_t argmin = 0;      // gamma, lowest index on ties
  std::vector<double> costs;   // Upsilon(X_q^{-1} Xhat) per element
};

JumpEvaluation evaluate_jump(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y,
                             const TransformationSet& Q);
double mu_q(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y, const TransformationSet& Q);
SE23 gamma_select(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y, const TransformationSet& Q);

}  // namespace hino
