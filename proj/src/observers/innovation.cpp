#include "hino/observers.hpp"

namespace hino {
namespace {

Eigen::Matrix<double, 5, 1> lift(const Vec3& x) {
  Eigen::Matrix<double, 5, 1> r;
  r << x, 0.0, 1.0;
  return r;
}

Mat5 column_copy() {
  Mat5 K = Mat5::Zero();
  K.topLeftCorner<3, 3>() = Mat3::Identity();
  K(4, 3) = 1.0;
  K(4, 4) = 1.0;
  return K;
}

}  // namespace

Innovation compute_innovation(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y, const GainSet& g) {
  Innovation out;
  if (y.empty()) return out;
  if (y.size() != L.size())
    throw Error(ErrorCode::kInvalidArgument, "measurement count does not match landmark count");
  const SE23 Xc{Mat3::Identity(), Vec3::Zero(), L.p_c};
  const Mat5 Xc_inv = inverse(Xc).matrix();
  const Mat5 Xh = Xhat.matrix();
  Mat5 S = Mat5::Zero();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto r = lift(L.points[i]);
    const auto b = lift(y[i]);
    S += L.weights[i] * (Xc_inv * (r - Xh * b)) * (Xc_inv * r).transpose();
  }
  out.Delta_R = S.topLeftCorner<3, 3>();
  out.Delta_p = S.block<3, 1>(0, 4);
  out.Delta = -adjoint(Xc, proj_se23_gains(S * column_copy(), g.k_R, g.K_v, g.K_p));
  return out;
}

Innovation innovation_block_form(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y,
                                 const GainSet& g) {
  Innovation out;
  if (y.empty()) return out;
  if (y.size() != L.size())
    throw Error(ErrorCode::kInvalidArgument, "measurement count does not match landmark count");
  for (std::size_t i = 0; i < y.size(); ++i) {
    const Vec3 yt = L.points[i] - Xhat.pos - Xhat.rot * y[i];
    out.Delta_R += L.weights[i] * yt * (L.points[i] - L.p_c).transpose();
    out.Delta_p += L.weights[i] * yt;
  }
  const Vec3 w = g.k_R * psi(out.Delta_R);
  out.Delta.omega = -w;
  out.Delta.alpha = -g.K_v * out.Delta_p;
  out.Delta.nu = -(g.K_p * out.Delta_p - w.cross(L.p_c));
  return out;
}

}  // namespace hino
