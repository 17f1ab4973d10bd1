#pragma once

#include "hino/landmarks.hpp"
#include "hino/riccati.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hino {

// kCino: fixed gains, never jumps.
// kHino: fixed gains with jumps (gyro bias optional).
// kHinoCre: Riccati gains, 6-state (gyro bias optional).
// kHinoCre2: Riccati gains, 9-state, gyro and accelerometer bias.
enum class ObserverKind { kCino, kHino, kHinoCre, kHinoCre2 };

const char* to_string(ObserverKind k);
ObserverKind observer_kind_from_string(const std::string& s);

struct FixedGains {
  double k_R = 1.0;
  double k_p = 3.0;
  double k_v = 3.0;
  double k_w = 1.0;
};

struct CreSettings {
  MatX P0;
  MatX V;
  Mat3 Q = Mat3::Identity();
};

/// How the transformation set and delta are derived from a landmark set.
struct HybridDesign {
  double theta = 0.8 * M_PI;
  AxisPolicy policy = AxisPolicy::kEigenbasis;
  double delta_fraction = 0.3;  // delta = fraction (1 - cos theta) Delta*_M
  double delta = 0.0;           // used instead of the fraction when > 0
};

struct ObserverConfig {
  ObserverKind kind = ObserverKind::kHino;
  bool estimate_gyro_bias = false;  // implied by kHinoCre2
  FixedGains gains;
  LandmarkSet landmarks;
  TransformationSet transforms;
  HybridGap gap;
  HybridDesign design;
  CreSettings cre;
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);

  bool hybrid() const { return kind != ObserverKind::kCino; }
  bool variable_gain() const { return kind == ObserverKind::kHinoCre || kind == ObserverKind::kHinoCre2; }
  bool estimates_gyro_bias() const { return estimate_gyro_bias || kind == ObserverKind::kHinoCre2; }
  bool estimates_accel_bias() const { return kind == ObserverKind::kHinoCre2; }
  RiccatiVariant riccati_variant() const;
  /// Throws kInvalidArgument on non-positive gains or badly sized CRE matrices.
  void validate() const;
};

ObserverConfig make_observer_config(ObserverKind kind, bool estimate_gyro_bias, const FixedGains& gains,
                                    const LandmarkSet& L, const HybridDesign& design, const CreSettings& cre,
                                    const Vec3& gravity);
/// Same configuration rebuilt around another landmark set (Q and delta recomputed).
ObserverConfig with_landmarks(const ObserverConfig& cfg, const LandmarkSet& L);

struct ObserverState {
  SE23 X;
  Vec3 bw = Vec3::Zero();
  Vec3 ba = Vec3::Zero();
  MatX P;  // empty for fixed-gain variants
  int jump_count = 0;
  double t = 0.0;
  int j = 0;
};

ObserverState initial_state(const ObserverConfig& cfg, const SE23& X0, const Vec3& bw0 = Vec3::Zero(),
                            const Vec3& ba0 = Vec3::Zero());

/// Gains in the shared form used by the innovation: k_R and 3x3 K_p, K_v, K_a.
struct GainSet {
  double k_R = 1.0;
  Mat3 K_p = Mat3::Identity();
  Mat3 K_v = Mat3::Identity();
  Mat3 K_a = Mat3::Zero();
};

/// Fixed variants: K_p = k_p I, K_v = k_v I. Riccati variants: from L = P C^T Q.
GainSet current_gains(const ObserverState& s, const ObserverConfig& cfg);

struct Innovation {
  TangentSE23 Delta;
  Mat3 Delta_R = Mat3::Zero();  // sum k_i ytilde_i (p_i - p_c)^T
  Vec3 Delta_p = Vec3::Zero();  // sum k_i ytilde_i
};

/// Delta = -Ad_{X_c}(P_K(X_c^{-1} (r - Xhat b) K_n r^T X_c^{-T} K0)), evaluated
/// with 5x5 arithmetic. K0 copies the position column into the velocity column
/// so that P_K sees the residual sum in both translation slots.
Innovation compute_innovation(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y, const GainSet& g);
/// Same quantity from the 3x3 block expressions.
Innovation innovation_block_form(const SE23& Xhat, const LandmarkSet& L, const std::vector<Vec3>& y,
                                 const GainSet& g);

struct MeasurementSample {
  Vec3 gyro = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
  std::vector<Vec3> landmarks;  // y_i in landmark-set order; empty = no landmark data
};

/// Samples at the start, midpoint and end of an integration step.
struct StepInputs {
  MeasurementSample begin, mid, end;
};

struct StateRates {
  Mat5 dX = Mat5::Zero();  // f(Xhat, w, a) - Delta Xhat, top three rows used
  Vec3 dbw = Vec3::Zero();
  Vec3 dba = Vec3::Zero();
  MatX dP;
};

StateRates flow_rates(const ObserverState& s, const MeasurementSample& m, const ObserverConfig& cfg);

/// RK4 step of the closed-loop flow followed by re-projection of Rhat.
ObserverState flow_step(const ObserverState& s, const StepInputs& in, double dt, const ObserverConfig& cfg);
/// Zero-order-hold variant: the same sample feeds all RK4 stages.
ObserverState flow_step(const ObserverState& s, const MeasurementSample& m, double dt, const ObserverConfig& cfg);

/// Prediction between discrete updates: Xhat integrates f(Xhat, w - bw, a - ba),
/// biases held, P follows the open-loop flow.
ObserverState predict_step(const ObserverState& s, const Vec3& gyro, const Vec3& accel, double dt,
                           const ObserverConfig& cfg);

struct JumpRecord {
  double t = 0.0;
  int j = 0;              // jump index before the jump
  std::size_t axis = 0;   // index into the transformation set
  double mu = 0.0;
};

double jump_value(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg);
/// mu_Q >= delta; always false for kCino.
bool should_jump(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg);
/// Xhat <- X_q^{-1} Xhat with X_q from gamma.
ObserverState jump_step(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg,
                        JumpRecord* record = nullptr);
/// Applies jumps while mu_Q >= delta, at most |Q| times; one more is a kJumpCycle error.
using JumpCallback = std::function<void(const ObserverState& before, const ObserverState& after, const JumpRecord&)>;
ObserverState resolve_jumps(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg,
                            std::vector<JumpRecord>* records = nullptr, const JumpCallback& on_jump = {});

/// Measurement correction of the continuous-discrete algorithm (no jump check).
ObserverState discrete_correct(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg);
/// discrete_correct followed by resolve_jumps.
ObserverState discrete_update(const ObserverState& s, const std::vector<Vec3>& y, const ObserverConfig& cfg,
                              std::vector<JumpRecord>* records = nullptr, const JumpCallback& on_jump = {});

}  // namespace hino
