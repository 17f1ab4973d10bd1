#include "hino/observers.hpp"

#include <sstream>

namespace hino {

const char* to_string(ObserverKind k) {
  switch (k) {
    case ObserverKind::kCino: return "cino";
    case ObserverKind::kHino: return "hino";
    case ObserverKind::kHinoCre: return "hino_cre";
    case ObserverKind::kHinoCre2: return "hino_cre2";
  }
  return "unknown";
}

ObserverKind observer_kind_from_string(const std::string& s) {
  if (s == "cino") return ObserverKind::kCino;
  if (s == "hino") return ObserverKind::kHino;
  if (s == "hino_cre") return ObserverKind::kHinoCre;
  if (s == "hino_cre2") return ObserverKind::kHinoCre2;
  throw Error(ErrorCode::kInvalidArgument, "unknown observer kind '" + s + "'");
}

RiccatiVariant ObserverConfig::riccati_variant() const {
  if (kind == ObserverKind::kHinoCre2) return RiccatiVariant::kFullBias9;
  return estimate_gyro_bias ? RiccatiVariant::kGyroBias6 : RiccatiVariant::kNoBias6;
}

void ObserverConfig::validate() const {
  if (!(gains.k_R > 0.0 && gains.k_p > 0.0 && gains.k_v > 0.0 && gains.k_w > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "observer gains must be positive");
  if (hybrid() && (transforms.size() == 0 || !(gap.delta > 0.0)))
    throw Error(ErrorCode::kInvalidArgument, "hybrid observer needs a transformation set and delta > 0");
  if (variable_gain()) {
    const int n = state_dim(riccati_variant());
    if (cre.P0.rows() != n || cre.P0.cols() != n || cre.V.rows() != n || cre.V.cols() != n)
      throw Error(ErrorCode::kInvalidArgument,
                  "Riccati matrices must be " + std::to_string(n) + "x" + std::to_string(n) + " for this observer");
    check_positive_definite(cre.P0, 0.0);
    if (Eigen::LLT<Mat3>(cre.Q).info() != Eigen::Success)
      throw Error(ErrorCode::kInvalidArgument, "Riccati output weight Q must be positive definite");
  }
}

ObserverConfig make_observer_config(ObserverKind kind, bool estimate_gyro_bias, const FixedGains& gains,
                                    const LandmarkSet& L, const HybridDesign& design, const CreSettings& cre,
                                    const Vec3& gravity) {
  ObserverConfig cfg;
  cfg.kind = kind;
  cfg.estimate_gyro_bias = estimate_gyro_bias || kind == ObserverKind::kHinoCre2;
  cfg.gains = gains;
  cfg.landmarks = L;
  cfg.design = design;
  cfg.cre = cre;
  cfg.gravity = gravity;
  if (cfg.hybrid()) {
    cfg.transforms = build_transformation_set(L, design.theta, design.policy);
    cfg.gap = design.delta > 0.0 ? make_hybrid_gap_explicit(L, cfg.transforms, design.delta)
                                 : make_hybrid_gap(L, cfg.transforms, design.delta_fraction);
  }
  cfg.validate();
  return cfg;
}

ObserverConfig with_landmarks(const ObserverConfig& cfg, const LandmarkSet& L) {
  return make_observer_config(cfg.kind, cfg.estimate_gyro_bias, cfg.gains, L, cfg.design, cfg.cre, cfg.gravity);
}

ObserverState initial_state(const ObserverConfig& cfg, const SE23& X0, const Vec3& bw0, const Vec3& ba0) {
  ObserverState s;
  s.X = X0;
  s.bw = cfg.estimates_gyro_bias() ? bw0 : Vec3::Zero();
  s.ba = cfg.estimates_accel_bias() ? ba0 : Vec3::Zero();
  if (cfg.variable_gain()) s.P = cfg.cre.P0;
  return s;
}

GainSet current_gains(const ObserverState& s, const ObserverConfig& cfg) {
  GainSet g;
  g.k_R = cfg.gains.k_R;
  if (cfg.variable_gain()) {
    const VariableGains vg = extract_gains(s.P, cfg.cre.Q, s.X.rot, cfg.landmarks.k_c);
    g.K_p = vg.K_p;
    g.K_v = vg.K_v;
    g.K_a = vg.K_a;
  } else {
    g.K_p = cfg.gains.k_p * Mat3::Identity();
    g.K_v = cfg.gains.k_v * Mat3::Identity();
  }
  return g;
}

namespace {

StateRates rates(const ObserverState& s, const MeasurementSample& m, const ObserverConfig& cfg, bool closed_loop) {
  StateRates r;
  const Vec3 w = m.gyro - s.bw;
  const Vec3 a = m.accel - s.ba;
  const Mat3& R = s.X.rot;

  Mat5 f = Mat5::Zero();
  f.topLeftCorner<3, 3>() = R * hat(w);
  f.block<3, 1>(0, 3) = cfg.gravity + R * a;
  f.block<3, 1>(0, 4) = s.X.vel;
  r.dX = f;

  if (cfg.variable_gain()) {
    const MatX A = system_matrix(cfg.riccati_variant(), w);
    const MatX C = output_matrix(cfg.riccati_variant());
    r.dP = closed_loop && !m.landmarks.empty() ? cre_rhs(s.P, A, C, cfg.cre.Q, cfg.cre.V)
                                               : open_loop_rhs(s.P, A, cfg.cre.V);
  }
  if (!closed_loop || m.landmarks.empty()) return r;

  const GainSet g = current_gains(s, cfg);
  const Innovation inn = compute_innovation(s.X, cfg.landmarks, m.landmarks, g);
  r.dX -= inn.Delta.matrix() * s.X.matrix();
  if (cfg.estimates_gyro_bias()) r.dbw = -cfg.gains.k_w * R.transpose() * psi(inn.Delta_R);
  if (cfg.estimates_accel_bias()) r.dba = -R.transpose() * g.K_a * inn.Delta_p;
  return r;
}

ObserverState advance(const ObserverState& s, const StateRates& r, double h) {
  ObserverState out = s;
  out.X.rot += h * r.dX.topLeftCorner<3, 3>();
  out.X.vel += h * r.dX.block<3, 1>(0, 3);
  out.X.pos += h * r.dX.block<3, 1>(0, 4);
  out.bw += h * r.dbw;
  out.ba += h * r.dba;
  if (r.dP.size() > 0) out.P += h * r.dP;
  return out;
}

ObserverState rk4(const ObserverState& s, const MeasurementSample& m0, const MeasurementSample& mh,
                  const MeasurementSample& m1, double dt, const ObserverConfig& cfg, bool closed_loop) {
  const StateRates k1 = rates(s, m0, cfg, closed_loop);
  const StateRates k2 = rates(advance(s, k1, 0.5 * dt), mh, cfg, closed_loop);
  const StateRates k3 = rates(advance(s, k2, 0.5 * dt), mh, cfg, closed_loop);
  const StateRates k4 = rates(advance(s, k3, dt), m1, cfg, closed_loop);

  ObserverState out = s;
  out.X.rot += dt / 6.0 * (k1.dX + 2.0 * k2.dX + 2.0 * k3.dX + k4.dX).topLeftCorner<3, 3>();
  out.X.vel += dt / 6.0 * (k1.dX + 2.0 * k2.dX + 2.0 * k3.dX + k4.dX).block<3, 1>(0, 3);
  out.X.pos += dt / 6.0 * (k1.dX + 2.0 * k2.dX + 2.0 * k3.dX + k4.dX).block<3, 1>(0, 4);
  out.bw += dt / 6.0 * (k1.dbw + 2.0 * k2.dbw + 2.0 * k3.dbw + k4.dbw);
  out.ba += dt / 6.0 * (k1.dba + 2.0 * k2.dba + 2.0 * k3.dba + k4.dba);
  out.X.rot = orthonormalize(out.X.rot);
  out.t = s.t + dt;
  if (cfg.variable_gain()) {
    out.P = symmetrize(s.P + dt / 6.0 * (k1.dP + 2.0 * k2.dP + 2.0 * k3.dP + k4.dP));
    check_positive_definite(out.P, out.t);
  }
  return out;
}

}  // namespace

StateRates flow_rates(const ObserverState& s, const MeasurementSample& m, const ObserverConfig& cfg) {
  return rates(s, m, cfg, true);
}

ObserverState flow_step(const ObserverState& s, const StepInputs& in, double dt, const ObserverConfig& cfg) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "flow_step: dt must be positive");
  return rk4(s, in.begin, in.mid, in.end, dt, cfg, true);
}

ObserverState flow_step(const ObserverState& s, const MeasurementSample& m, double dt, const ObserverConfig& cfg) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "flow_step: dt must be positive");
  return rk4(s, m, m, m, dt, cfg, true);
}

ObserverState predict_step(const ObserverState& s, const Vec3& gyro, const Vec3& accel, double dt,
                           const ObserverConfig& cfg) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "predict_step: dt must be positive");
  MeasurementSample m;
  m.gyro = gyro;
  m.accel = accel;
  return rk4(s, m, m, m, dt, cfg, false);
}

double jump_value(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg) {
  return mu_q(s.X, cfg.landmarks, y, cfg.transforms);
}

bool should_jump(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg) {
  if (!cfg.hybrid() || y.empty()) return false;
  return jump_value(s, y, cfg) >= cfg.gap.delta;
}

ObserverState jump_step(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg,
                        JumpRecord* record) {
  const JumpEvaluation ev = evaluate_jump(s.X, cfg.landmarks, y, cfg.transforms);
  ObserverState out = s;
  out.X = inverse(cfg.transforms.elements[ev.argmin]) * s.X;
  out.jump_count += 1;
  out.j += 1;
  if (record) *record = {s.t, s.j, ev.argmin, ev.mu};
  return out;
}

ObserverState resolve_jumps(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg,
                            std::vector<JumpRecord>* records, const JumpCallback& on_jump) {
  ObserverState cur = s;
  if (!cfg.hybrid() || y.empty()) return cur;
  const std::size_t limit = cfg.transforms.size();
  for (std::size_t n = 0;; ++n) {
    const JumpEvaluation ev = evaluate_jump(cur.X, cfg.landmarks, y, cfg.transforms);
    if (ev.mu < cfg.gap.delta) return cur;
    if (n == limit) {
      std::ostringstream os;
      os << "jump cycle at t = " << cur.t << ": mu_Q = " << ev.mu << " still >= delta = " << cfg.gap.delta
         << " after " << limit << " consecutive jumps";
      throw Error(ErrorCode::kJumpCycle, os.str());
    }
    JumpRecord rec;
    const ObserverState next = jump_step(cur, y, cfg, &rec);
    if (records) records->push_back(rec);
    if (on_jump) on_jump(cur, next, rec);
    cur = next;
  }
}

ObserverState discrete_correct(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg) {
  if (y.empty()) return s;
  ObserverState out = s;
  GainSet g = current_gains(s, cfg);
  MatX L;
  if (cfg.variable_gain()) {
    const DiscreteCorrection dc = discrete_correction(s.P, cfg.cre.Q, s.t);
    const VariableGains vg = gains_from_l(dc.L, s.X.rot, cfg.landmarks.k_c);
    g.K_p = vg.K_p;
    g.K_v = vg.K_v;
    g.K_a = vg.K_a;
    out.P = dc.P;
  }
  const Innovation inn = compute_innovation(s.X, cfg.landmarks, y, g);
  out.X = exp_se23(-inn.Delta) * s.X;
  const Mat3 Rt = s.X.rot.transpose();
  if (cfg.estimates_gyro_bias()) out.bw = s.bw - cfg.gains.k_w * Rt * psi(inn.Delta_R);
  if (cfg.estimates_accel_bias()) out.ba = s.ba - Rt * g.K_a * inn.Delta_p;
  return out;
}

ObserverState discrete_update(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg,
                              std::vector<JumpRecord>* records, const JumpCallback& on_jump) {
  return resolve_jumps(discrete_correct(s, y, cfg), y, cfg, records, on_jump);
}

}  // namespace hino
