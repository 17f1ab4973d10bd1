// Delta*_M and the lower bounds that make the hybrid gap well defined.
#include "hino/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hino {
namespace {

using Group = std::vector<int>;  // indices into the descending eigenvalue list

std::vector<Group> eigen_groups(const Vec3& lambda) {
  const double scale = std::max(std::abs(lambda(0)), std::numeric_limits<double>::min());
  auto eq = [&](int i, int j) { return std::abs(lambda(i) - lambda(j)) <= Tolerances::kEigenGap * scale; };
  if (eq(0, 1) && eq(1, 2)) return {{0, 1, 2}};
  if (eq(0, 1)) return {{0, 1}, {2}};
  if (eq(1, 2)) return {{0}, {1, 2}};
  return {{0}, {1}, {2}};
}

bool is_zero(double lambda, double scale) { return lambda <= Tolerances::kCollinear * scale; }

bool contains_eigenbasis(const Mat3& E, const std::vector<Group>& groups, const std::vector<Vec3>& U) {
  for (const Group& g : groups) {
    Eigen::Matrix<double, 3, Eigen::Dynamic> B(3, g.size());
    for (std::size_t k = 0; k < g.size(); ++k) B.col(k) = E.col(g[k]);
    Eigen::Matrix<double, 3, Eigen::Dynamic> inside(3, 0);
    for (const Vec3& u : U) {
      if ((u - B * (B.transpose() * u)).norm() <= 1e-9) {
        inside.conservativeResize(Eigen::NoChange, inside.cols() + 1);
        inside.col(inside.cols() - 1) = u;
      }
    }
    if (inside.cols() < static_cast<Eigen::Index>(g.size())) return false;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(inside);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-6) ++rank;
    if (rank < static_cast<int>(g.size())) return false;
  }
  return true;
}

bool contains_orthogonal_triple(const std::vector<Vec3>& U) {
  const std::size_t n = U.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(U[i].dot(U[j])) > 1e-9) continue;
      for (std::size_t k = j + 1; k < n; ++k)
        if (std::abs(U[i].dot(U[k])) <= 1e-9 && std::abs(U[j].dot(U[k])) <= 1e-9) return true;
    }
  return false;
}

double max_over_u(const Vec3& v, const Mat3& M, const std::vector<Vec3>& U) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec3& u : U) best = std::max(best, delta_m(u, v, M));
  return best;
}

// minimise max_u Delta_M(u, v) over v = cos(phi) a + sin(phi) b
double min_over_circle(const Vec3& a, const Vec3& b, const Mat3& M, const std::vector<Vec3>& U) {
  auto g = [&](double phi) { return max_over_u(std::cos(phi) * a + std::sin(phi) * b, M, U); };
  constexpr int kGrid = 2048;
  const double h = M_PI / kGrid;
  double best = std::numeric_limits<double>::infinity();
  double best_phi = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double val = g(i * h);
    if (val < best) {
      best = val;
      best_phi = i * h;
    }
  }
  // golden-section refinement inside the bracketing cell
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_phi - h, hi = best_phi + h;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - r * (hi - lo); f1 = g(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + r * (hi - lo); f2 = g(x2);
    }
  }
  return std::min({best, f1, f2});
}

// minimise over the unit sphere: Fibonacci lattice then shrinking pattern search
double min_over_sphere(const Mat3& M, const std::vector<Vec3>& U) {
  constexpr int kPoints = 8192;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  double best = std::numeric_limits<double>::infinity();
  Vec3 vbest = Vec3::UnitZ();
  for (int i = 0; i < kPoints; ++i) {
    const double z = 1.0 - (i + 0.5) / kPoints;  // upper hemisphere suffices, g(v) = g(-v)
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 v(rho * std::cos(golden * i), rho * std::sin(golden * i), z);
    const double val = max_over_u(v, M, U);
    if (val < best) {
      best = val;
      vbest = v;
    }
  }
  double step = 0.05;
  while (step > 1e-12) {
    bool improved = false;
    Vec3 t1 = vbest.unitOrthogonal();
    Vec3 t2 = vbest.cross(t1);
    for (const Vec3& d : {t1, Vec3(-t1), t2, Vec3(-t2), Vec3(t1 + t2), Vec3(-t1 - t2), Vec3(t1 - t2), Vec3(t2 - t1)}) {
      const Vec3 v = (vbest + step * d).normalized();
      const double val = max_over_u(v, M, U);
      if (val < best) {
        best = val;
        vbest = v;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

double delta_m(const Vec3& u, const Vec3& v, const Mat3& M) {
  const Mat3 Mv = M * (Mat3::Identity() - 2.0 * v * v.transpose());
  return u.dot((Mv.trace() * Mat3::Identity() - Mv) * u);
}

bool eigenbasis_condition(const Vec3& lambda) {
  const double scale = std::max(std::abs(lambda(0)), std::numeric_limits<double>::min());
  if (lambda(0) <= 0.0) return false;
  if (!is_zero(lambda(2), scale)) return true;
  return eigen_groups(lambda).size() == 3 && !is_zero(lambda(1), scale);
}

DeltaMStar gap_bound_branch(const Mat3& M, const std::vector<Vec3>& U) {
  if (U.empty()) throw Error(ErrorCode::kInvalidArgument, "axis set U is empty");
  for (const Vec3& u : U)
    if (std::abs(u.norm() - 1.0) > Tolerances::kUnitAxis * 1e3)
      throw Error(ErrorCode::kInvalidArgument, "axis set U contains a non-unit vector");
  Vec3 lambda;
  Mat3 E;
  sorted_eigen(M, lambda, E);
  const std::vector<Group> groups = eigen_groups(lambda);
  const double tr = M.trace();

  DeltaMStar out;
  if (eigenbasis_condition(lambda) && contains_eigenbasis(E, groups, U)) {
    out.branch = GapBoundBranch::kEigenbasis;
    if (groups.size() == 1) {
      out.lower_bound = 2.0 / 3.0 * lambda(0);
    } else if (groups.size() == 2) {
      const Group& pair = groups[0].size() == 2 ? groups[0] : groups[1];
      const Group& single = groups[0].size() == 2 ? groups[1] : groups[0];
      const double lr = 0.5 * (lambda(pair[0]) + lambda(pair[1]));
      out.lower_bound = std::min(2.0 * lr, lambda(single[0]));
    } else {
      out.lower_bound = tr - lambda(0);
    }
    return out;
  }
  if (tr - 2.0 * lambda(0) > 0.0 && contains_orthogonal_triple(U)) {
    out.branch = GapBoundBranch::kOrthogonalTriple;
    out.lower_bound = 2.0 / 3.0 * (tr - 2.0 * lambda(0));
    return out;
  }
  throw Error(ErrorCode::kConfigurationUnsupported,
              "M and U satisfy neither the eigenbasis nor the orthogonal-triple condition");
}

DeltaMStar delta_m_star(const Mat3& M, const std::vector<Vec3>& U) {
  DeltaMStar out = gap_bound_branch(M, U);
  Vec3 lambda;
  Mat3 E;
  sorted_eigen(M, lambda, E);
  double value = std::numeric_limits<double>::infinity();
  for (const Group& g : eigen_groups(lambda)) {
    if (g.size() == 1) {
      value = std::min(value, max_over_u(E.col(g[0]), M, U));
    } else if (g.size() == 2) {
      value = std::min(value, min_over_circle(E.col(g[0]), E.col(g[1]), M, U));
    } else {
      value = std::min(value, min_over_sphere(M, U));
    }
  }
  out.value = value;
  const double slack = 1e-9 * std::max(1.0, std::abs(lambda(0)));
  if (value < out.lower_bound - slack)
    throw std::logic_error("Delta*_M fell below its guaranteed lower bound");
  return out;
}

}  // namespace hino
