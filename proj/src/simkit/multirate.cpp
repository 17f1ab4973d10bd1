#include "hino/simkit/multirate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hino {

namespace {

struct FrameConfigs {
  const ObserverConfig& base;
  const LandmarkCatalog& catalog;
  std::map<std::vector<std::size_t>, std::optional<ObserverConfig>> cache;

  // nullptr when the subset cannot support the observer
  const ObserverConfig* get(const std::vector<std::size_t>& idx, std::string* why) {
    if (idx.size() == catalog.size()) return &base;
    auto it = cache.find(idx);
    if (it == cache.end()) {
      std::optional<ObserverConfig> c;
      try {
        std::vector<Vec3> pts;
        std::vector<double> w;
        for (std::size_t i : idx) {
          pts.push_back(catalog.points[i]);
          w.push_back(catalog.weights[i]);
        }
        c = with_landmarks(base, build_landmark_set(pts, w));
      } catch (const Error& e) {
        if (why) *why = e.what();
      }
      it = cache.emplace(idx, std::move(c)).first;
    }
    return it->second ? &*it->second : nullptr;
  }
};

const TruthState* truth_at(const MultirateInput& in, double t) {
  const auto it = in.truth.find(t);
  return it == in.truth.end() ? nullptr : &it->second;
}

}  // namespace

RunLog run_multirate(const MultirateInput& in, const ObserverConfig& cfg, const ObserverState& init,
                     const MultirateOptions& opt) {
  if (in.imu.empty()) throw Error(ErrorCode::kInvalidArgument, "multirate run needs at least one IMU sample");
  if (!(opt.max_step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "max_step must be positive");
  const int log_every = std::max(1, opt.log_every);

  std::map<int, std::size_t> index_of;
  for (std::size_t i = 0; i < in.catalog.size(); ++i) index_of[in.catalog.ids[i]] = i;
  FrameConfigs configs{cfg, in.catalog, {}};

  RunLog log;
  log.has_truth = !in.truth.empty();
  bool first_p = true;
  double last_mu = 0.0;
  std::vector<Vec3> no_y;
  auto push = [&](const ObserverState& st, bool jump) {
    if (!jump && !log.records.empty()) {
      const LogRecord& last = log.records.back();
      if (!last.jump && last.t == st.t && last.j == st.j) return;
    }
    LogRecord r = make_record(st, cfg, no_y, truth_at(in, st.t), opt.record_covariance);
    r.mu_q = last_mu;
    r.jump = jump;
    check_divergence(r);
    if (r.p_eig_max > 0.0) {
      log.p_min = first_p ? r.p_eig_min : std::min(log.p_min, r.p_eig_min);
      log.p_max = first_p ? r.p_eig_max : std::max(log.p_max, r.p_eig_max);
      first_p = false;
    }
    log.records.push_back(std::move(r));
  };

  auto integrate = [&](ObserverState s, const ImuSample& u, double t_to) {
    const double span = t_to - s.t;
    if (span <= 0.0) return s;
    const int n = static_cast<int>(std::ceil(span / opt.max_step - 1e-9));
    const double h = span / n;
    const double t0 = s.t;
    for (int i = 0; i < n; ++i) {
      s = predict_step(s, u.gyro, u.accel, h, cfg);
      s.t = i + 1 == n ? t_to : t0 + (i + 1) * h;
    }
    return s;
  };

  auto apply_frame = [&](ObserverState s, const LandmarkFrame& f) {
    std::vector<std::size_t> idx;
    std::map<std::size_t, Vec3> by_index;
    for (const auto& o : f.obs) {
      const auto it = index_of.find(o.id);
      if (it == index_of.end()) {
        std::ostringstream os;
        os << "t = " << f.t << ": landmark id " << o.id << " not in the landmark map, observation ignored";
        log.warnings.push_back(os.str());
        continue;
      }
      by_index.emplace(it->second, o.y);  // first observation of an id wins
    }
    for (const auto& [i, y] : by_index) idx.push_back(i);
    auto skip = [&](const std::string& why) {
      std::ostringstream os;
      os << "t = " << f.t << ": frame skipped (" << why << ")";
      log.warnings.push_back(os.str());
      ++log.skipped_frames;
      return s;
    };
    if (static_cast<int>(idx.size()) < opt.n_min) {
      std::ostringstream os;
      os << idx.size() << " distinct landmarks, need " << opt.n_min;
      return skip(os.str());
    }
    std::string why;
    const ObserverConfig* c = configs.get(idx, &why);
    if (!c) return skip(why);
    std::vector<Vec3> y;
    for (const auto& [i, yi] : by_index) y.push_back(yi);
    const ObserverState corrected = discrete_correct(s, y, *c);
    ObserverState out = resolve_jumps(corrected, y, *c, &log.jumps,
                                      [&](const ObserverState& before, const ObserverState&, const JumpRecord&) {
                                        push(before, true);
                                      });
    if (c->hybrid()) last_mu = jump_value(out, y, *c);
    if (out.j != s.j) push(out, false);
    return out;
  };

  ObserverState s = init;
  s.t = in.imu.front().t;
  std::size_t fi = 0;
  while (fi < in.frames.size() && in.frames[fi].t < s.t) {
    std::ostringstream os;
    os << "t = " << in.frames[fi].t << ": frame precedes the first IMU sample, skipped";
    log.warnings.push_back(os.str());
    ++log.skipped_frames;
    ++fi;
  }
  if (in.frames.empty()) log.warnings.push_back("no landmark frames: dead-reckoning only");

  while (fi < in.frames.size() && in.frames[fi].t == s.t) s = apply_frame(s, in.frames[fi++]);
  push(s, false);

  const std::size_t N = in.imu.size();
  for (std::size_t k = 0; k + 1 < N; ++k) {
    const double t_end = in.imu[k + 1].t;
    while (fi < in.frames.size() && in.frames[fi].t <= t_end) {
      s = integrate(s, in.imu[k], in.frames[fi].t);
      s = apply_frame(s, in.frames[fi++]);
    }
    s = integrate(s, in.imu[k], t_end);
    s.t = t_end;
    if ((k + 1) % log_every == 0 || k + 2 == N) push(s, false);
  }
  if (fi < in.frames.size()) {
    std::ostringstream os;
    os << in.frames.size() - fi << " frame(s) after the last IMU sample ignored";
    log.warnings.push_back(os.str());
  }
  return log;
}

bool frame_dropped(long frame_index, double fraction) {
  if (fraction <= 0.0) return false;
  return std::floor((frame_index + 1) * fraction) > std::floor(frame_index * fraction);
}

LandmarkCatalog scenario_catalog(const Scenario& sc) {
  const LandmarkSet L = scenario_landmarks(sc);
  LandmarkCatalog c;
  for (std::size_t i = 0; i < L.size(); ++i) {
    c.ids.push_back(static_cast<int>(i));
    c.points.push_back(L.points[i]);
    c.weights.push_back(L.weights[i]);
  }
  return c;
}

MultirateInput simulate_streams(const Scenario& sc) {
  validate(sc);
  MultirateInput in;
  in.catalog = scenario_catalog(sc);
  const LandmarkSet L = scenario_landmarks(sc);
  const auto traj = make_trajectory(sc.trajectory);
  TruthPropagator truth(*traj, sc.trajectory.initial_rotation, sc.run.gravity, sc.imu.gyro_bias, sc.imu.accel_bias,
                        sc.run.dt / sc.run.truth_substeps);
  NoiseSource noise(sc.run.seed);

  const double period = 1.0 / sc.imu.rate;
  const long ratio = std::lround(sc.imu.rate / sc.landmarks.rate);
  const long n = std::lround(sc.run.duration * sc.imu.rate);
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * period;
    truth.advance_to(t);
    const bool frame = k % ratio == 0;
    const NoiseDraw nd = draw_noise(noise, sc, L.size(), frame);
    const MeasurementSample m = synthesize_measurements(truth.state(), truth.inputs(), L, nd, frame);
    in.imu.push_back({t, m.gyro, m.accel});
    in.truth.emplace(t, truth.state());
    if (frame && !frame_dropped(k / ratio, sc.landmarks.dropout_fraction)) {
      LandmarkFrame f;
      f.t = t;
      for (std::size_t i = 0; i < m.landmarks.size(); ++i) f.obs.push_back({in.catalog.ids[i], m.landmarks[i]});
      in.frames.push_back(std::move(f));
    }
  }
  return in;
}

RunLog run_algorithm1(const Scenario& sc, const RunOptions& opt) {
  const ObserverConfig cfg = opt.config ? *opt.config : build_observer_config(sc);
  const MultirateInput in = simulate_streams(sc);
  ObserverState init = opt.initial_state ? *opt.initial_state : scenario_initial_state(sc, cfg);
  MultirateOptions mo;
  mo.log_every = opt.log_every > 0 ? opt.log_every : sc.run.log_every;
  mo.max_step = sc.run.dt;
  mo.record_covariance = opt.record_covariance;
  return run_multirate(in, cfg, init, mo);
}

}  // namespace hino
