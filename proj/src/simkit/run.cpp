#include "hino/simkit/run.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hino {

double ErrorNorms::max() const { return std::max({rot, pos, vel, bw, ba}); }

ErrorNorms error_norms(const TruthState& truth, const ObserverState& est) {
  ErrorNorms e;
  e.rot = rot_distance(truth.X.rot * est.X.rot.transpose());
  e.pos = (truth.X.pos - est.X.pos).norm();
  e.vel = (truth.X.vel - est.X.vel).norm();
  e.bw = (truth.bw - est.bw).norm();
  e.ba = (truth.ba - est.ba).norm();
  return e;
}

ObserverState scenario_initial_state(const Scenario& sc, const ObserverConfig& cfg) {
  return initial_state(cfg, initial_estimate(sc, cfg), sc.observer.initial.gyro_bias,
                       sc.observer.initial.accel_bias);
}

LogRecord make_record(const ObserverState& s, const ObserverConfig& cfg, const std::vector<Vec3>& y,
                      const TruthState* truth, bool record_covariance) {
  LogRecord r;
  r.t = s.t;
  r.j = s.j;
  r.X = s.X;
  r.bw = s.bw;
  r.ba = s.ba;
  if (cfg.hybrid() && !y.empty()) r.mu_q = jump_value(s, y, cfg);
  if (truth) {
    r.truth = *truth;
    r.err = error_norms(*truth, s);
    r.cost_R = ((Mat3::Identity() - truth->X.rot * s.X.rot.transpose()) * cfg.landmarks.M).trace();
  }
  if (s.P.size() > 0) {
    const Eigen::SelfAdjointEigenSolver<MatX> es(s.P, Eigen::EigenvaluesOnly);
    r.p_eig_min = es.eigenvalues().minCoeff();
    r.p_eig_max = es.eigenvalues().maxCoeff();
    if (record_covariance) r.P = s.P;
  }
  return r;
}

void check_divergence(const LogRecord& r) {
  const bool finite = r.X.matrix().allFinite() && r.bw.allFinite() && r.ba.allFinite();
  const double lim = Tolerances::kDivergence;
  if (!finite || r.err.max() > lim || !std::isfinite(r.err.max()) || r.X.vel.norm() > lim || r.X.pos.norm() > lim) {
    std::ostringstream os;
    os << "estimate diverged at t = " << r.t << " (errors: rot " << r.err.rot << ", pos " << r.err.pos << ", vel "
       << r.err.vel << ", bw " << r.err.bw << ", ba " << r.err.ba << ")";
    throw Error(ErrorCode::kDivergence, os.str());
  }
}

namespace {

void track_p(RunLog& log, const LogRecord& r, bool first) {
  if (r.p_eig_max <= 0.0) return;
  log.p_min = first ? r.p_eig_min : std::min(log.p_min, r.p_eig_min);
  log.p_max = first ? r.p_eig_max : std::max(log.p_max, r.p_eig_max);
}

}  // namespace

RunLog run_continuous(const Scenario& sc, const RunOptions& opt) {
  validate(sc);
  const ObserverConfig cfg = opt.config ? *opt.config : build_observer_config(sc);
  const auto traj = make_trajectory(sc.trajectory);
  const double dt = sc.run.dt;
  const int log_every = opt.log_every > 0 ? opt.log_every : sc.run.log_every;
  const long n_steps = std::lround(sc.run.duration / dt);
  const LandmarkSet& L = cfg.landmarks;

  TruthPropagator truth(*traj, sc.trajectory.initial_rotation, sc.run.gravity, sc.imu.gyro_bias, sc.imu.accel_bias,
                        dt / sc.run.truth_substeps);
  NoiseSource noise(sc.run.seed);
  ObserverState s = opt.initial_state ? *opt.initial_state : scenario_initial_state(sc, cfg);
  s.t = 0.0;

  RunLog log;
  log.has_truth = true;
  bool first_p = true;
  auto push = [&](const ObserverState& st, const std::vector<Vec3>& y, bool jump) {
    LogRecord r = make_record(st, cfg, y, &truth.state(), opt.record_covariance);
    r.jump = jump;
    check_divergence(r);
    track_p(log, r, first_p);
    first_p = false;
    log.records.push_back(std::move(r));
  };
  auto resolve = [&](const ObserverState& st, const std::vector<Vec3>& y) {
    return resolve_jumps(st, y, cfg, &log.jumps,
                         [&](const ObserverState& before, const ObserverState&, const JumpRecord&) {
                           push(before, y, true);
                         });
  };

  NoiseDraw nd = draw_noise(noise, sc, L.size(), true);
  MeasurementSample m0 = synthesize_measurements(truth.state(), truth.inputs(), L, nd, true);
  s = resolve(s, m0.landmarks);
  push(s, m0.landmarks, false);

  for (long k = 0; k < n_steps; ++k) {
    const double t0 = static_cast<double>(k) * dt;
    const double t1 = static_cast<double>(k + 1) * dt;
    if (k > 0) {
      nd = draw_noise(noise, sc, L.size(), true);
      m0 = synthesize_measurements(truth.state(), truth.inputs(), L, nd, true);
    }
    StepInputs in;
    in.begin = m0;
    truth.advance_to(0.5 * (t0 + t1));
    in.mid = synthesize_measurements(truth.state(), truth.inputs(), L, nd, true);
    truth.advance_to(t1);
    in.end = synthesize_measurements(truth.state(), truth.inputs(), L, nd, true);

    s = flow_step(s, in, dt, cfg);
    s.t = t1;
    const std::size_t before = log.jumps.size();
    s = resolve(s, in.end.landmarks);
    const bool jumped = log.jumps.size() > before;

    if (jumped || (k + 1) % log_every == 0 || k + 1 == n_steps) {
      push(s, in.end.landmarks, false);
    } else {
      const ErrorNorms e = error_norms(truth.state(), s);
      if (!(e.max() <= Tolerances::kDivergence)) push(s, in.end.landmarks, false);
      if (s.P.size() > 0 && k % 100 == 0) track_p(log, make_record(s, cfg, {}, nullptr, false), first_p);
    }
  }
  return log;
}

}  // namespace hino
