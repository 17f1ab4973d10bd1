#include "hino/observers.hpp"

#include "gen.hpp"

#include <gtest/gtest.h>

using namespace hino;

namespace {

const Vec3 kG(0.0, 0.0, -9.81);

LandmarkSet bench_set(const Vec3& c = Vec3::Zero()) {
  const double a = std::sqrt(1.5), b = 1.0, d = std::sqrt(0.5);
  std::vector<Vec3> p = {c + Vec3(a, 0, 0), c - Vec3(a, 0, 0), c + Vec3(0, b, 0),
                         c - Vec3(0, b, 0), c + Vec3(0, 0, d), c - Vec3(0, 0, d)};
  return build_landmark_set(p, std::vector<double>(6, 1.0));
}

LandmarkSet scattered_set() {
  return build_landmark_set({Vec3(-1.29, 1.57, 5.42), Vec3(0.31, -0.78, 5.25), Vec3(0.34, 1.24, 3.50),
                             Vec3(-0.07, 1.54, 3.78), Vec3(-1.24, -0.17, 3.70), Vec3(1.15, 1.32, 3.66)},
                            std::vector<double>(6, 1.0 / 6.0));
}

ObserverConfig config(ObserverKind kind, const LandmarkSet& L, bool gyro_bias = false) {
  CreSettings cre;
  if (kind == ObserverKind::kHinoCre) {
    cre.P0 = 0.5 * MatX::Identity(6, 6);
    cre.V = MatX::Identity(6, 6);
    cre.Q = 10.0 * Mat3::Identity();
  } else if (kind == ObserverKind::kHinoCre2) {
    cre.P0 = MatX::Identity(9, 9);
    cre.V = 0.05 * MatX::Identity(9, 9);
    cre.Q = 10.0 * Mat3::Identity();
  }
  return make_observer_config(kind, gyro_bias, FixedGains{}, L, HybridDesign{}, cre, kG);
}

std::vector<Vec3> outputs(const SE23& X, const LandmarkSet& L) {
  std::vector<Vec3> y;
  for (const Vec3& p : L.points) y.push_back(X.rot.transpose() * (p - X.pos));
  return y;
}

// Estimate with attitude error Rt = R Rhat^T, translational errors p_e and v_e.
SE23 estimate_from_errors(const SE23& X, const Rot3& Rt, const Vec3& p_e, const Vec3& v_e, const Vec3& p_c) {
  SE23 Xh;
  Xh.rot = Rt.transpose() * X.rot;
  Xh.pos = Rt.transpose() * (X.pos - (Mat3::Identity() - Rt) * p_c - p_e);
  Xh.vel = Rt.transpose() * (X.vel - v_e);
  return Xh;
}

struct Errors {
  Rot3 Rt;
  Vec3 p_e, v;
};

Errors errors(const SE23& X, const SE23& Xh, const Vec3& p_c) {
  const Rot3 Rt = X.rot * Xh.rot.transpose();
  return {Rt, X.pos - Rt * Xh.pos - (Mat3::Identity() - Rt) * p_c, X.vel - Rt * Xh.vel};
}

Rot3 polar(const Mat3& A) {
  Eigen::JacobiSVD<Mat3> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

TEST(Innovation, ZeroAtTruth) {
  const LandmarkSet L = scattered_set();
  const ObserverConfig cfg = config(ObserverKind::kHino, L);
  gen::for_all(50, 40, [&](gen::Rng& r, int) {
    const SE23 X = r.se23();
    const ObserverState s = initial_state(cfg, X);
    const Innovation inn = compute_innovation(X, L, outputs(X, L), current_gains(s, cfg));
    EXPECT_LT(inn.Delta.matrix().norm(), 1e-9);
    EXPECT_LT(inn.Delta_R.norm(), 1e-9);
    EXPECT_LT(inn.Delta_p.norm(), 1e-9);
  });
}

TEST(Innovation, PositionErrorLeavesAttitudeTermZero) {
  const LandmarkSet L = scattered_set();
  gen::for_all(50, 41, [&](gen::Rng& r, int) {
    const SE23 X = r.se23();
    const Vec3 d = r.vec(2.0);
    SE23 Xh = X;
    Xh.pos = X.pos - d;
    const Innovation inn = compute_innovation(Xh, L, outputs(X, L), GainSet{});
    EXPECT_LT(inn.Delta_R.norm(), 1e-9);
    EXPECT_LT((inn.Delta_p - L.k_c * d).norm(), 1e-9);
    EXPECT_LT(inn.Delta.omega.norm(), 1e-9);
  });
}

TEST(Innovation, BlockFormMatchesGroupForm) {
  const LandmarkSet L = scattered_set();
  gen::for_all(200, 42, [&](gen::Rng& r, int) {
    const SE23 X = r.se23(), Xh = r.se23();
    auto y = outputs(X, L);
    for (auto& yi : y) yi += r.vec(0.1);
    GainSet g;
    g.k_R = r.uniform(0.1, 3.0);
    g.K_p = r.mat3();
    g.K_v = r.mat3();
    const Innovation a = compute_innovation(Xh, L, y, g);
    const Innovation b = innovation_block_form(Xh, L, y, g);
    EXPECT_LT((a.Delta.matrix() - b.Delta.matrix()).norm(), 1e-9);
    EXPECT_LT((a.Delta_R - b.Delta_R).norm(), 1e-9);
    EXPECT_LT((a.Delta_p - b.Delta_p).norm(), 1e-9);
  });
}

TEST(FlowStep, HoverEquilibrium) {
  const LandmarkSet L = scattered_set();
  for (ObserverKind k : {ObserverKind::kCino, ObserverKind::kHino, ObserverKind::kHinoCre, ObserverKind::kHinoCre2}) {
    const ObserverConfig cfg = config(k, L, true);
    const SE23 X{angle_axis_to_rot({0.4, Vec3(1, 2, 3).normalized()}), Vec3::Zero(), Vec3(1, 2, 3)};
    MeasurementSample m;
    m.accel = -X.rot.transpose() * kG;
    m.landmarks = outputs(X, L);
    ObserverState s = initial_state(cfg, X);
    for (int i = 0; i < 1000; ++i) s = flow_step(s, m, 1e-3, cfg);
    EXPECT_LT((s.X.matrix() - X.matrix()).norm(), 1e-9) << to_string(k);
    EXPECT_LT(s.bw.norm() + s.ba.norm(), 1e-9) << to_string(k);
  }
}

TEST(FlowStep, MatchesExplicitComponentForm) {
  const LandmarkSet L = scattered_set();
  const ObserverConfig cfg = config(ObserverKind::kHino, L, true);
  const double kR = cfg.gains.k_R, kp = cfg.gains.k_p, kv = cfg.gains.k_v, kw = cfg.gains.k_w;
  struct S {
    Mat3 R;
    Vec3 v, p, b;
  };
  gen::for_all(50, 43, [&](gen::Rng& r, int) {
    const SE23 X = r.se23(), Xh = r.se23();
    MeasurementSample m;
    m.gyro = r.vec();
    m.accel = r.vec(5.0);
    m.landmarks = outputs(X, L);
    const Vec3 bw0 = r.vec(0.1);
    const double h = 1e-2;

    auto deriv = [&](const S& s) {
      Mat3 DR = Mat3::Zero();
      Vec3 Dp = Vec3::Zero();
      for (std::size_t i = 0; i < L.size(); ++i) {
        const Vec3 yt = L.points[i] - s.p - s.R * m.landmarks[i];
        DR += L.weights[i] * yt * (L.points[i] - L.p_c).transpose();
        Dp += L.weights[i] * yt;
      }
      const Mat3 W = kR * 0.5 * (DR - DR.transpose());
      const Vec3 w = m.gyro - s.b;
      S d;
      d.R = s.R * hat(w) + W * s.R;
      d.v = kG + s.R * m.accel + W * s.v + kv * Dp;
      d.p = s.v + W * (s.p - L.p_c) + kp * Dp;
      d.b = -kw * s.R.transpose() * vee(0.5 * (DR - DR.transpose()));
      return d;
    };
    auto axpy = [](const S& s, const S& d, double a) {
      return S{s.R + a * d.R, s.v + a * d.v, s.p + a * d.p, s.b + a * d.b};
    };
    const S s0{Xh.rot, Xh.vel, Xh.pos, bw0};
    const S k1 = deriv(s0), k2 = deriv(axpy(s0, k1, h / 2)), k3 = deriv(axpy(s0, k2, h / 2)), k4 = deriv(axpy(s0, k3, h));
    S s1 = s0;
    s1.R += h / 6 * (k1.R + 2 * k2.R + 2 * k3.R + k4.R);
    s1.v += h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
    s1.p += h / 6 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p);
    s1.b += h / 6 * (k1.b + 2 * k2.b + 2 * k3.b + k4.b);
    s1.R = polar(s1.R);

    ObserverState st = initial_state(cfg, Xh, bw0);
    st = flow_step(st, m, h, cfg);
    EXPECT_LT((st.X.rot - s1.R).norm(), 1e-10);
    EXPECT_LT((st.X.vel - s1.v).norm(), 1e-10);
    EXPECT_LT((st.X.pos - s1.p).norm(), 1e-10);
    EXPECT_LT((st.bw - s1.b).norm(), 1e-10);
  });
}

TEST(FlowRates, AttitudeErrorDecoupled) {
  // dR~/dt = R omega^x Rhat^T + R dRhat^T/dt must not depend on p~ and v~
  const LandmarkSet L = scattered_set();
  for (ObserverKind k : {ObserverKind::kCino, ObserverKind::kHino}) {
    const ObserverConfig cfg = config(k, L);
    gen::for_all(50, 44, [&](gen::Rng& r, int) {
      const SE23 X = r.se23();
      const Vec3 omega = r.vec();
      const Rot3 Rt = r.rot();
      MeasurementSample m;
      m.gyro = omega;
      m.accel = r.vec(5.0);
      m.landmarks = outputs(X, L);
      auto dRt = [&](const Vec3& pe, const Vec3& ve) {
        const SE23 Xh = estimate_from_errors(X, Rt, pe, ve, L.p_c);
        const StateRates rates = flow_rates(initial_state(cfg, Xh), m, cfg);
        const Mat3 dRh = rates.dX.topLeftCorner<3, 3>();
        return Mat3(X.rot * hat(omega) * Xh.rot.transpose() + X.rot * dRh.transpose());
      };
      const Mat3 base = dRt(Vec3::Zero(), Vec3::Zero());
      // closed form -k_R R~ P_a(M R~)
      const Mat3 MR = L.M * Rt;
      EXPECT_LT((base - (-cfg.gains.k_R * Rt * 0.5 * (MR - MR.transpose()))).norm(), 1e-9);
      for (int i = 0; i < 5; ++i) EXPECT_LT((dRt(r.vec(5.0), r.vec(5.0)) - base).norm(), 1e-9);
    });
  }
}

TEST(FlowRates, UndesiredEquilibriaAreEquilibria) {
  const LandmarkSet L = scattered_set();
  const ObserverConfig cfg = config(ObserverKind::kCino, L);
  const double kc = L.k_c, kp = cfg.gains.k_p, kv = cfg.gains.k_v;
  gen::for_all(20, 45, [&](gen::Rng& r, int) {
    const SE23 X = r.se23();
    const Vec3 omega = r.vec(), vdot = r.vec(3.0);
    for (int k = 0; k < 3; ++k) {
      const Rot3 Rt = angle_axis_to_rot({M_PI, L.eigenvectors.col(k)});
      const Vec3 pe = (Mat3::Identity() - Rt) * kG / (kc * kv);
      const Vec3 ve = kc * kp * pe;
      const SE23 Xh = estimate_from_errors(X, Rt, pe, ve, L.p_c);
      MeasurementSample m;
      m.gyro = omega;
      m.accel = X.rot.transpose() * (vdot - kG);
      m.landmarks = outputs(X, L);
      const StateRates d = flow_rates(initial_state(cfg, Xh), m, cfg);
      const Mat3 dRh = d.dX.topLeftCorner<3, 3>();
      const Vec3 dvh = d.dX.block<3, 1>(0, 3), dph = d.dX.block<3, 1>(0, 4);
      const Mat3 dR = X.rot * hat(omega);
      const Mat3 dRt = dR * Xh.rot.transpose() + X.rot * dRh.transpose();
      const Vec3 dpe = X.vel - dRt * Xh.pos - Rt * dph + dRt * L.p_c;
      const Vec3 dve = vdot - dRt * Xh.vel - Rt * dvh;
      EXPECT_LT(dRt.norm() + dpe.norm() + dve.norm(), 1e-9) << k;
    }
  });
}

TEST(Jump, ShouldJumpCases) {
  const LandmarkSet L = bench_set(Vec3(0.2, -0.1, 0.4));
  ObserverConfig cfg = config(ObserverKind::kHino, L);
  EXPECT_NEAR(cfg.gap.delta, 1.628115, 1e-6);
  const SE23 X{Mat3::Identity(), Vec3(1, 0, 0), Vec3(0, 0, 3)};
  const auto y = outputs(X, L);
  EXPECT_FALSE(should_jump(initial_state(cfg, X), y, cfg));

  SE23 Xh = X;
  Xh.rot = angle_axis_to_rot({M_PI, Vec3::UnitX()}).transpose();
  const ObserverState s = initial_state(cfg, Xh);
  EXPECT_NEAR(jump_value(s, y, cfg), 5.4271, 1e-4);
  EXPECT_TRUE(should_jump(s, y, cfg));

  cfg.gap.delta = jump_value(s, y, cfg);
  EXPECT_TRUE(should_jump(s, y, cfg));

  const ObserverConfig cino = config(ObserverKind::kCino, L);
  EXPECT_FALSE(should_jump(initial_state(cino, Xh), y, cino));
  EXPECT_FALSE(should_jump(s, {}, cfg));
}

TEST(Jump, SingletonHalfTurn) {
  const LandmarkSet L = bench_set();
  ObserverConfig cfg = config(ObserverKind::kHino, L);
  const Vec3 u = Vec3(1, 1, 0).normalized();
  cfg.transforms = build_transformation_set(L, M_PI, std::vector<Vec3>{u});
  gen::Rng r(46);
  const SE23 X = r.se23(), Xh = r.se23();
  JumpRecord rec;
  const ObserverState after = jump_step(initial_state(cfg, Xh), outputs(X, L), cfg, &rec);
  const Rot3 Ru = angle_axis_to_rot({M_PI, u});
  EXPECT_LT((after.X.rot - Ru * Xh.rot).norm(), 1e-12);
  EXPECT_LT((after.X.pos - Ru * Xh.pos).norm(), 1e-12);
  EXPECT_LT((after.X.vel - Ru * Xh.vel).norm(), 1e-12);
  EXPECT_EQ(after.j, 1);
  EXPECT_EQ(rec.axis, 0u);
}

TEST(Jump, CostDropAndTranslationalInvariance) {
  const LandmarkSet L = scattered_set();
  const ObserverConfig cfg = config(ObserverKind::kHino, L);
  int jumped = 0;
  gen::for_all(300, 47, [&](gen::Rng& r, int) {
    const SE23 X = r.se23();
    const SE23 Xh = r.se23();
    const auto y = outputs(X, L);
    const ObserverState s = initial_state(cfg, Xh);
    if (!should_jump(s, y, cfg)) return;
    ++jumped;
    const double mu = jump_value(s, y, cfg);
    const ObserverState n = jump_step(s, y, cfg);
    const Errors e0 = errors(X, Xh, L.p_c), e1 = errors(X, n.X, L.p_c);
    const double c0 = ((Mat3::Identity() - e0.Rt) * L.M).trace();
    const double c1 = ((Mat3::Identity() - e1.Rt) * L.M).trace();
    EXPECT_NEAR(c1 - c0, -mu, 1e-9);
    EXPECT_LE(c1 - c0, -cfg.gap.delta + 1e-9);
    EXPECT_LT((e1.p_e - e0.p_e).norm(), 1e-9);
    EXPECT_LT((e1.v - e0.v).norm(), 1e-9);
  });
  EXPECT_GT(jumped, 20);
}

TEST(Jump, ResolveTerminatesWithinBound) {
  const LandmarkSet L = scattered_set();
  const ObserverConfig cfg = config(ObserverKind::kHino, L);
  const int J = jump_bound(L.M, cfg.gap.delta);
  gen::for_all(200, 48, [&](gen::Rng& r, int) {
    const SE23 X = r.se23(), Xh = r.se23();
    const auto y = outputs(X, L);
    std::vector<JumpRecord> recs;
    const ObserverState s = resolve_jumps(initial_state(cfg, Xh), y, cfg, &recs);
    EXPECT_LE(static_cast<int>(recs.size()), J);
    EXPECT_LT(jump_value(s, y, cfg), cfg.gap.delta);
    for (std::size_t i = 0; i < recs.size(); ++i) EXPECT_EQ(recs[i].j, static_cast<int>(i));
  });
}

TEST(Jump, CycleIsAnError) {
  const LandmarkSet L = scattered_set();
  ObserverConfig cfg = config(ObserverKind::kHino, L);
  cfg.gap.delta = -1e3;
  const SE23 X;
  try {
    resolve_jumps(initial_state(cfg, X), outputs(X, L), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kJumpCycle);
  }
}

TEST(DiscreteUpdate, ZeroInnovation) {
  const LandmarkSet L = scattered_set();
  const ObserverConfig cfg = config(ObserverKind::kHinoCre2, L);
  gen::Rng r(49);
  const SE23 X = r.se23();
  const ObserverState s = initial_state(cfg, X);
  const ObserverState n = discrete_update(s, outputs(X, L), cfg);
  EXPECT_LT((n.X.matrix() - X.matrix()).norm(), 1e-9);
  EXPECT_LT(n.bw.norm() + n.ba.norm(), 1e-9);
  EXPECT_LT(n.P.trace(), s.P.trace());
  EXPECT_LT((n.P - n.P.transpose()).norm(), 1e-15);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<MatX>(n.P).eigenvalues()(0), 0.0);
}

TEST(DiscreteUpdate, PositionOffsetMovesTowardTruth) {
  const LandmarkSet L = scattered_set();
  ObserverConfig cfg = config(ObserverKind::kHino, L);
  cfg.gains.k_p = 0.05;
  cfg.gains.k_v = 0.05;
  gen::Rng r(50);
  const SE23 X = r.se23();
  const Vec3 d(0.3, -0.2, 0.1);
  SE23 Xh = X;
  Xh.pos = X.pos - d;
  const ObserverState n = discrete_correct(initial_state(cfg, Xh), outputs(X, L), cfg);
  // first order: phat <- phat + k_p Delta_p with Delta_p = k_c d
  EXPECT_LT((n.X.pos - (Xh.pos + cfg.gains.k_p * L.k_c * d)).norm(), 1e-12);
  EXPECT_LT((X.pos - n.X.pos).norm(), d.norm());
  EXPECT_LT((n.X.rot - Xh.rot).norm(), 1e-12);
}

TEST(Gains, VariableGainsFromRiccati) {
  const LandmarkSet L = scattered_set();
  const ObserverConfig cfg = config(ObserverKind::kHinoCre, L);
  gen::Rng r(51);
  ObserverState s = initial_state(cfg, r.se23());
  EXPECT_EQ(s.P.rows(), 6);
  const GainSet g = current_gains(s, cfg);
  const VariableGains v = extract_gains(s.P, cfg.cre.Q, s.X.rot, L.k_c);
  EXPECT_LT((g.K_p - v.K_p).norm(), 1e-15);
  EXPECT_LT((g.K_v - v.K_v).norm(), 1e-15);
  const ObserverConfig fixed = config(ObserverKind::kHino, L);
  const GainSet gf = current_gains(initial_state(fixed, SE23{}), fixed);
  EXPECT_LT((gf.K_p - 3.0 * Mat3::Identity()).norm(), 1e-15);
  EXPECT_LT((gf.K_v - 3.0 * Mat3::Identity()).norm(), 1e-15);
}

TEST(Config, Validation) {
  const LandmarkSet L = scattered_set();
  FixedGains g;
  g.k_p = -1.0;
  EXPECT_THROW(make_observer_config(ObserverKind::kHino, false, g, L, HybridDesign{}, CreSettings{}, kG), Error);
  CreSettings bad;
  bad.P0 = MatX::Identity(9, 9);
  bad.V = MatX::Identity(9, 9);
  EXPECT_THROW(make_observer_config(ObserverKind::kHinoCre, false, FixedGains{}, L, HybridDesign{}, bad, kG), Error);
  EXPECT_EQ(observer_kind_from_string(to_string(ObserverKind::kHinoCre2)), ObserverKind::kHinoCre2);
  EXPECT_TRUE(config(ObserverKind::kHinoCre2, L).estimates_gyro_bias());
}
