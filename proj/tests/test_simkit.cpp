#include "hino/simkit/multirate.hpp"

#include "gen.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace hino;

namespace {

// Checks the hybrid time domain: t and j non-decreasing, j advances only across a
// jump row, and a jump row is followed by a row at the same t with j + 1.
void expect_well_formed(const RunLog& log) {
  ASSERT_FALSE(log.records.empty());
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    const LogRecord& a = log.records[i - 1];
    const LogRecord& b = log.records[i];
    ASSERT_LE(a.t, b.t) << i;
    if (a.jump) {
      ASSERT_EQ(b.t, a.t) << i;
      ASSERT_EQ(b.j, a.j + 1) << i;
    } else {
      ASSERT_EQ(b.j, a.j) << i;
    }
  }
  EXPECT_FALSE(log.records.back().jump);
  EXPECT_EQ(static_cast<std::size_t>(log.records.back().j), log.jumps.size());
}

Scenario short_fig3(double duration) {
  Scenario sc = paper_fig3_scenario();
  sc.run.duration = duration;
  return sc;
}

ObserverState truth_initialized(const Scenario& sc) {
  const ObserverConfig cfg = build_observer_config(sc);
  const TruthState x0 = synthesize_truth(sc, 0.0);
  return initial_state(cfg, x0.X, x0.bw, cfg.estimates_accel_bias() ? x0.ba : Vec3::Zero());
}

double max_state_diff(const LogRecord& a, const LogRecord& b) {
  return std::max({(a.X.rot - b.X.rot).norm(), (a.X.pos - b.X.pos).norm(), (a.X.vel - b.X.vel).norm(),
                   (a.bw - b.bw).norm(), (a.ba - b.ba).norm()});
}

}  // namespace

TEST(Truth, CircleInitialState) {
  const TruthState x = synthesize_truth(paper_fig3_scenario(), 0.0);
  EXPECT_LT((x.X.pos - Vec3(10, 0, 10)).norm(), 1e-12);
  EXPECT_LT((x.X.vel - Vec3(0, 8, 0)).norm(), 1e-12);
  EXPECT_LT((x.X.rot - Mat3::Identity()).norm(), 1e-12);
}

TEST(Truth, HoverStatics) {
  Scenario sc = paper_fig3_scenario();
  sc.trajectory.kind = TrajectorySpec::Kind::kHover;
  sc.trajectory.hover_position = Vec3(1, 2, 3);
  TruthInputs in;
  const TruthState x = synthesize_truth(sc, 2.0, &in);
  EXPECT_LT(x.X.vel.norm(), 1e-15);
  EXPECT_LT((x.X.pos - Vec3(1, 2, 3)).norm(), 1e-15);
  EXPECT_LT((in.accel + x.X.rot.transpose() * sc.run.gravity).norm(), 1e-12);
}

TEST(Truth, FiniteDifferenceConsistency) {
  Scenario sc = paper_fig3_scenario();
  const double h = 1e-3;
  for (double t : {0.5, 3.0, 7.25}) {
    TruthInputs in;
    const TruthState x = synthesize_truth(sc, t, &in);
    const TruthState xm = synthesize_truth(sc, t - h), xp = synthesize_truth(sc, t + h);
    const Vec3 pdot = (xp.X.pos - xm.X.pos) / (2 * h);
    const Vec3 vdot = (xp.X.vel - xm.X.vel) / (2 * h);
    const Mat3 Rdot = (xp.X.rot - xm.X.rot) / (2 * h);
    EXPECT_LT((pdot - x.X.vel).norm(), 1e-5);
    EXPECT_LT((vdot - (sc.run.gravity + x.X.rot * in.accel)).norm(), 1e-5);
    EXPECT_LT((Rdot - x.X.rot * hat(in.omega)).norm(), 1e-5);
    EXPECT_TRUE(is_rotation(x.X.rot));
  }
}

TEST(Truth, SinusoidalOmegaFlag) {
  Scenario sc = paper_fig3_scenario();
  sc.trajectory.omega.profile = OmegaSpec::Profile::kSinusoidal;
  TruthInputs in;
  synthesize_truth(sc, 0.7, &in);
  EXPECT_NEAR(in.omega(0), std::sin(0.3 * M_PI * 0.7), 1e-15);
  EXPECT_NEAR(in.omega(2), 0.1, 1e-15);
}

TEST(Measurements, NoiseFreeAndBias) {
  Scenario sc = paper_fig3_scenario();
  const LandmarkSet L = scenario_landmarks(sc);
  TruthInputs in;
  TruthState x = synthesize_truth(sc, 1.3, &in);
  const MeasurementSample m0 = synthesize_measurements(x, in, L, NoiseDraw{}, true);
  EXPECT_LT((m0.gyro - (in.omega + sc.imu.gyro_bias)).norm(), 1e-15);
  EXPECT_LT((m0.gyro - in.omega - Vec3(-0.1, 0.02, 0.02)).norm(), 1e-15);
  for (std::size_t i = 0; i < L.size(); ++i)
    EXPECT_LT((x.X.rot * m0.landmarks[i] + x.X.pos - L.points[i]).norm(), 1e-12);

  x.bw.setZero();
  const MeasurementSample m1 = synthesize_measurements(x, in, L, NoiseDraw{}, false);
  EXPECT_EQ(m1.gyro, in.omega);
  EXPECT_TRUE(m1.landmarks.empty());
}

TEST(Measurements, NoiseStatisticsAndSeeding) {
  NoiseSource a(7), b(7), c(8);
  const Vec3 var(0.4, 0.4, 0.1);
  EXPECT_EQ(a.sample(var), b.sample(var));
  EXPECT_NE(a.sample(var), c.sample(var));
  Vec3 sum = Vec3::Zero(), sq = Vec3::Zero();
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Vec3 s = a.sample(var);
    sum += s;
    sq += s.cwiseProduct(s);
  }
  const Vec3 mean = sum / n, v = sq / n - mean.cwiseProduct(mean);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(mean(i), 0.0, 5e-3);
    EXPECT_NEAR(v(i) / var(i), 1.0, 0.02);
  }
  EXPECT_EQ(a.sample(Vec3::Zero()), Vec3::Zero());
}

TEST(RunContinuous, ZeroInitialErrorStaysExact) {
  Scenario sc = short_fig3(10.0);
  sc.imu.gyro_bias.setZero();
  for (ObserverKind k : {ObserverKind::kCino, ObserverKind::kHino, ObserverKind::kHinoCre}) {
    sc.observer.kind = k;
    sc.observer.estimate_gyro_bias = false;
    RunOptions ro;
    ro.initial_state = truth_initialized(sc);
    const RunLog log = run_continuous(sc, ro);
    EXPECT_TRUE(log.jumps.empty()) << to_string(k);
    double worst = 0.0, frob = 0.0;
    for (const LogRecord& r : log.records) {
      worst = std::max(worst, r.err.max());
      frob = std::max(frob, (r.X.matrix() - r.truth->X.matrix()).norm());
    }
    EXPECT_LT(worst, 1e-6) << to_string(k);
    EXPECT_LT(frob, 1e-6) << to_string(k);
  }
}

TEST(RunContinuous, PaperScenarioConvergesBy20s) {
  const RunLog log = run_continuous(short_fig3(20.0));
  expect_well_formed(log);
  const ErrorNorms e = log.last().err;
  EXPECT_LT(e.rot, 0.05);
  EXPECT_LT(e.pos, 0.05);
  EXPECT_LT(e.vel, 0.05);
  EXPECT_LT(e.bw, 0.05);
  ASSERT_EQ(log.jumps.size(), 1u);
  EXPECT_EQ(log.jumps[0].t, 0.0);
  EXPECT_LE(static_cast<int>(log.jumps.size()),
            jump_bound(build_observer_config(short_fig3(1)).landmarks.M, build_observer_config(short_fig3(1)).gap.delta));
}

TEST(RunContinuous, DeterministicPerSeed) {
  Scenario sc = short_fig3(3.0);
  sc.imu.gyro_variance = Vec3::Constant(0.4);
  sc.imu.accel_variance = Vec3::Constant(0.4);
  sc.landmarks.noise_variance = Vec3::Constant(0.1);
  const RunLog a = run_continuous(sc), b = run_continuous(sc);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    ASSERT_EQ(a.records[i].X.matrix(), b.records[i].X.matrix());
    ASSERT_EQ(a.records[i].bw, b.records[i].bw);
    ASSERT_EQ(a.records[i].mu_q, b.records[i].mu_q);
  }
  sc.run.seed = 2;
  const RunLog c = run_continuous(sc);
  EXPECT_NE(a.last().X.pos, c.last().X.pos);
  expect_well_formed(a);
}

TEST(RunContinuous, DivergenceAborts) {
  Scenario sc = short_fig3(5.0);
  sc.observer.gains.k_p = 1e4;
  sc.observer.gains.k_v = 1e-4;
  sc.run.dt = 1e-2;
  try {
    run_continuous(sc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivergence);
  }
}

TEST(RunContinuous, RiccatiBoundsRecorded) {
  Scenario sc = paper_fig4_scenario();
  sc.run.duration = 10.0;
  const RunLog log = run_continuous(sc);
  EXPECT_GT(log.p_min, 0.0);
  EXPECT_GE(log.p_max, log.p_min);
  EXPECT_TRUE(std::isfinite(log.p_max));
}

TEST(Dropout, DeterministicPattern) {
  int dropped = 0;
  for (long f = 0; f < 1000; ++f) dropped += frame_dropped(f, 0.5);
  EXPECT_EQ(dropped, 500);
  for (long f = 0; f < 10; ++f) EXPECT_EQ(frame_dropped(f, 0.5), f % 2 == 1) << f;
  dropped = 0;
  for (long f = 0; f < 1000; ++f) dropped += frame_dropped(f, 0.25);
  EXPECT_EQ(dropped, 250);
  for (long f = 0; f < 100; ++f) EXPECT_FALSE(frame_dropped(f, 0.0));
}

TEST(Streams, RatesAndTruth) {
  Scenario sc = paper_fig4_scenario();
  sc.run.duration = 2.0;
  sc.run.mode = RunMode::kAlgorithm1;
  const MultirateInput in = simulate_streams(sc);
  EXPECT_EQ(in.imu.size(), 401u);
  EXPECT_EQ(in.frames.size(), 41u);
  EXPECT_EQ(in.truth.size(), in.imu.size());
  EXPECT_NEAR(in.frames[1].t, 0.05, 1e-12);
  EXPECT_EQ(in.frames[0].obs.size(), 6u);
  sc.landmarks.dropout_fraction = 0.5;
  EXPECT_EQ(simulate_streams(sc).frames.size(), 21u);
}

TEST(Algorithm1, CrossCheckAgainstContinuous) {
  // Frames at every IMU sample with gains scaled by the step give a first-order
  // discretization of the continuous observer.
  auto max_diff = [](double h) {
    Scenario sc = paper_fig3_scenario();
    sc.run.duration = 5.0;
    sc.run.dt = h;
    sc.imu.rate = 1.0 / h;
    sc.landmarks.rate = 1.0 / h;
    sc.run.log_every = 1;
    const RunLog a = run_continuous(sc);
    const ObserverConfig cfg = build_observer_config(sc);
    ObserverConfig scaled = cfg;
    scaled.gains.k_R *= h;
    scaled.gains.k_p *= h;
    scaled.gains.k_v *= h;
    scaled.gains.k_w *= h;
    scaled.cre.Q *= h;
    MultirateOptions mo;
    mo.max_step = h;
    const RunLog b = run_multirate(simulate_streams(sc), scaled, scenario_initial_state(sc, cfg), mo);
    expect_well_formed(b);
    std::map<double, const LogRecord*> by_t;
    for (const auto& r : b.records)
      if (!r.jump) by_t[r.t] = &r;
    double d = 0.0;
    for (const auto& r : a.records) {
      if (r.jump) continue;
      const auto it = by_t.find(r.t);
      if (it != by_t.end()) d = std::max(d, max_state_diff(r, *it->second));
    }
    return d;
  };
  const double d2 = max_diff(2e-3), d1 = max_diff(1e-3);
  EXPECT_LT(d1, 0.05);
  EXPECT_GT(d2 / d1, 1.7);
  EXPECT_LT(d2 / d1, 2.3);
}

TEST(Algorithm1, PaperRatesConverge) {
  Scenario sc = paper_fig4_scenario();
  sc.run.mode = RunMode::kAlgorithm1;
  sc.run.duration = 30.0;
  sc.run.log_every = 20;
  const RunLog log = run_algorithm1(sc);
  expect_well_formed(log);
  EXPECT_LT(log.last().err.max(), 0.05);
  EXPECT_LT(log.last().err.ba, 0.05);
  EXPECT_LT(log.last().err.bw, 0.01);
}

TEST(Algorithm1, HalfDropoutStillConverges) {
  Scenario sc = paper_fig4_scenario();
  sc.run.mode = RunMode::kAlgorithm1;
  sc.run.duration = 30.0;
  sc.run.log_every = 20;
  const RunLog full = run_algorithm1(sc);
  sc.landmarks.dropout_fraction = 0.5;
  const RunLog half = run_algorithm1(sc);
  expect_well_formed(half);
  EXPECT_LT(half.last().err.max(), 0.1);
  auto err_at = [](const RunLog& log, double t) {
    for (const auto& r : log.records)
      if (r.t >= t) return r.err.max();
    return log.last().err.max();
  };
  EXPECT_GT(err_at(half, 5.0), err_at(full, 5.0));
}

TEST(Multirate, FrameRules) {
  Scenario sc = paper_fig4_scenario();
  sc.run.duration = 1.0;
  MultirateInput in = simulate_streams(sc);
  const ObserverConfig cfg = build_observer_config(sc);
  const ObserverState init = scenario_initial_state(sc, cfg);

  MultirateInput two = in;
  two.frames[3].obs.resize(2);
  RunLog log = run_multirate(two, cfg, init);
  EXPECT_EQ(log.skipped_frames, 1);
  ASSERT_FALSE(log.warnings.empty());

  MultirateInput subset = in;
  for (auto& f : subset.frames) f.obs.resize(4);
  log = run_multirate(subset, cfg, init);
  EXPECT_EQ(log.skipped_frames, 0);
  expect_well_formed(log);

  MultirateInput unknown = in;
  unknown.frames[2].obs.push_back({99, Vec3::Zero()});
  log = run_multirate(unknown, cfg, init);
  EXPECT_EQ(log.skipped_frames, 0);
  EXPECT_EQ(log.warnings.size(), 1u);

  MultirateInput none = in;
  none.frames.clear();
  log = run_multirate(none, cfg, init);
  ASSERT_EQ(log.warnings.size(), 1u);
  EXPECT_NE(log.warnings[0].find("dead-reckoning"), std::string::npos);
  EXPECT_TRUE(log.jumps.empty());
}

TEST(Multirate, SubsetConfigurationMatchesDirectBuild) {
  const Scenario sc = paper_fig4_scenario();
  const ObserverConfig cfg = build_observer_config(sc);
  const LandmarkSet& L = cfg.landmarks;
  const LandmarkSet sub = build_landmark_set({L.points.begin(), L.points.begin() + 4},
                                             {L.weights.begin(), L.weights.begin() + 4});
  const ObserverConfig c = with_landmarks(cfg, sub);
  EXPECT_EQ(c.landmarks.size(), 4u);
  EXPECT_EQ(c.transforms.size(), 3u);
  EXPECT_NEAR(c.gap.delta, 0.3 * (1 - std::cos(0.8 * M_PI)) * c.gap.delta_m_star, 1e-12);
}

TEST(Scenario, Validation) {
  Scenario sc = paper_fig3_scenario();
  sc.run.dt = -1.0;
  EXPECT_THROW(validate(sc), Error);
  sc = paper_fig3_scenario();
  sc.imu.rate = 10.0;
  sc.landmarks.rate = 20.0;
  EXPECT_THROW(validate(sc), Error);
  sc = paper_fig3_scenario();
  sc.run.mode = RunMode::kAlgorithm1;
  sc.imu.rate = 200.0;
  sc.landmarks.rate = 30.0;
  EXPECT_THROW(validate(sc), Error);
  EXPECT_NO_THROW(validate(paper_fig4_scenario()));
}

TEST(Scenario, DefaultLandmarks) {
  const LandmarkSet L = scenario_landmarks(paper_fig3_scenario());
  EXPECT_EQ(L.size(), 6u);
  EXPECT_NEAR(L.k_c, 1.0, 1e-15);
  // recorded eigenvalues of M for the bundled set
  EXPECT_NEAR(L.eigenvalues(0), 1.080030, 1e-6);
  EXPECT_NEAR(L.eigenvalues(1), 0.746208, 1e-6);
  EXPECT_NEAR(L.eigenvalues(2), 0.419054, 1e-6);
  EXPECT_TRUE(eigenbasis_condition(L.eigenvalues));
}
