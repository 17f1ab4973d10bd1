#include "hino/cli/commands.hpp"

#include "hino/simkit/lyapunov.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace hino {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema:
    case ErrorCode::kInvalidArgument:
      return kExitSchema;
    case ErrorCode::kDivergence:
    case ErrorCode::kRiccatiDivergence:
    case ErrorCode::kJumpCycle:
      return kExitDivergence;
    case ErrorCode::kInsufficientLandmarks:
    case ErrorCode::kCollinearLandmarks:
    case ErrorCode::kConfigurationUnsupported:
      return kExitUnsupported;
    case ErrorCode::kIo:
      return kExitInternal;
  }
  return kExitInternal;
}

namespace {

json vec_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

// Wraps a command body: maps library errors to exit codes and reports them.
template <class F>
int guarded(const char* command, std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "hino " << command << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "hino " << command << ": internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, dir + ": " + ec.message());
}

void log_warnings(const RunLog& log) {
  for (const auto& w : log.warnings) spdlog::warn("{}", w);
}

}  // namespace

std::string run_summary_json(const Scenario& sc, const RunLog& log, const ObserverConfig& cfg,
                             const std::string& command) {
  json j;
  j["command"] = command;
  j["scenario"] = sc.name;
  j["config_hash"] = config_hash(sc);
  j["mode"] = to_string(sc.run.mode);
  j["observer"] = to_string(cfg.kind);
  j["seed"] = sc.run.seed;
  j["records"] = log.records.size();
  j["jump_count"] = log.jumps.size();
  j["jump_bound"] = cfg.hybrid() ? jump_bound(cfg.landmarks.M, cfg.gap.delta) : 0;
  json jumps = json::array();
  for (const auto& r : log.jumps) jumps.push_back({{"t", r.t}, {"j", r.j}, {"axis", r.axis}, {"mu_q", r.mu}});
  j["jumps"] = jumps;
  if (cfg.hybrid()) {
    j["delta"] = cfg.gap.delta;
    j["delta_m_star"] = cfg.gap.delta_m_star;
  }

  if (!log.records.empty()) {
    const LogRecord& last = log.last();
    json fin;
    fin["t"] = last.t;
    fin["j"] = last.j;
    fin["position"] = vec_json(last.X.pos);
    fin["velocity"] = vec_json(last.X.vel);
    fin["gyro_bias"] = vec_json(last.bw);
    fin["accel_bias"] = vec_json(last.ba);
    j["final_estimate"] = fin;
    if (last.truth) {
      j["final_errors"] = {{"rot", last.err.rot}, {"pos", last.err.pos}, {"vel", last.err.vel},
                           {"bw", last.err.bw},   {"ba", last.err.ba}};
      std::vector<double> t, c;
      for (const auto& r : log.records)
        if (r.truth) {
          t.push_back(r.t);
          c.push_back(r.cost_R);
        }
      const double t_last = log.jumps.empty() ? 0.0 : log.jumps.back().t;
      const LogLinearFit f = fit_log_linear(t, c, t_last, 1e-14);
      if (f.n >= 2) j["decay"] = {{"quantity", "attitude_cost"}, {"rate", -f.slope}, {"r2", f.r2}, {"samples", f.n}};
      else j["decay"] = nullptr;
    } else {
      j["final_errors"] = nullptr;
      j["decay"] = nullptr;
    }
  }
  if (cfg.variable_gain()) j["P_eigen_bounds"] = {{"min", log.p_min}, {"max", log.p_max}};
  else j["P_eigen_bounds"] = nullptr;
  j["skipped_frames"] = log.skipped_frames;
  j["warnings"] = log.warnings;
  return j.dump(2) + "\n";
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("simulate", err, [&] {
    Scenario sc = load_scenario(opt.scenario);
    if (opt.mode) sc.run.mode = *opt.mode;
    if (opt.seed) sc.run.seed = *opt.seed;
    validate(sc);
    const ObserverConfig cfg = build_observer_config(sc);
    spdlog::info("simulate {}: {} observer, {} mode, seed {}", sc.name, to_string(cfg.kind), to_string(sc.run.mode),
                 sc.run.seed);
    RunOptions ro;
    ro.config = cfg;
    const RunLog log = sc.run.mode == RunMode::kContinuous ? run_continuous(sc, ro) : run_algorithm1(sc, ro);
    log_warnings(log);

    const std::string csv = emit_estimate_csv(estimate_rows(log));
    const std::string summary = run_summary_json(sc, log, cfg, "simulate");
    ensure_dir(opt.out_dir);
    write_file((fs::path(opt.out_dir) / "estimate.csv").string(), csv);
    write_file((fs::path(opt.out_dir) / "summary.json").string(), summary);
    if (!opt.export_bundle.empty()) export_bundle(opt.export_bundle, simulate_streams(sc), true);
    out << sc.name << ": " << log.jumps.size() << " jump(s)";
    if (!log.records.empty() && log.last().truth)
      out << ", final err_rot " << log.last().err.rot << ", err_pos " << log.last().err.pos;
    out << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_simulate_batch(const std::vector<std::string>& scenarios, const SimulateOptions& common, int jobs,
                       std::ostream& out, std::ostream& err) {
  const std::size_t n = scenarios.size();
  std::vector<int> codes(n, kExitOk);
  std::vector<std::string> outs(n), errs(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      SimulateOptions o = common;
      o.scenario = scenarios[i];
      o.out_dir = (fs::path(common.out_dir) / fs::path(scenarios[i]).stem()).string();
      if (!common.export_bundle.empty())
        o.export_bundle = (fs::path(common.export_bundle) / fs::path(scenarios[i]).stem()).string();
      std::ostringstream so, se;
      codes[i] = cmd_simulate(o, so, se);
      outs[i] = so.str();
      errs[i] = se.str();
    }
  };
  const int w = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int k = 0; k < w; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int worst = kExitOk;
  for (std::size_t i = 0; i < n; ++i) {
    out << outs[i];
    err << errs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int cmd_replay(const ReplayOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("replay", err, [&] {
    const Scenario sc = load_scenario(opt.config);
    MultirateInput in = import_bundle(opt.bundle);
    if (!opt.truth.empty()) in.truth = read_truth_csv(opt.truth);

    std::vector<std::string> pre_warnings;
    LandmarkSet L;
    try {
      L = build_landmark_set(in.catalog.points, in.catalog.weights);
    } catch (const Error& e) {
      if (!in.frames.empty()) throw;
      pre_warnings.push_back(std::string("landmark map unusable (") + e.what() +
                             "); configuration taken from the scenario file");
      L = scenario_landmarks(sc);
    }
    const ObserverConfig cfg = make_observer_config(sc.observer.kind, sc.observer.estimate_gyro_bias,
                                                    sc.observer.gains, L, sc.observer.design, scenario_cre(sc),
                                                    sc.run.gravity);
    const ObserverState init = scenario_initial_state(sc, cfg);
    MultirateOptions mo;
    mo.log_every = sc.run.log_every;
    mo.max_step = sc.run.dt;
    RunLog log = run_multirate(in, cfg, init, mo);
    log.warnings.insert(log.warnings.begin(), pre_warnings.begin(), pre_warnings.end());
    log_warnings(log);

    Scenario described = sc;
    described.run.mode = RunMode::kAlgorithm1;
    const std::string csv = emit_estimate_csv(estimate_rows(log));
    const std::string summary = run_summary_json(described, log, cfg, "replay");
    ensure_dir(opt.out_dir);
    write_file((fs::path(opt.out_dir) / "estimate.csv").string(), csv);
    write_file((fs::path(opt.out_dir) / "summary.json").string(), summary);
    out << "replay: " << in.imu.size() << " IMU samples, " << in.frames.size() << " frames ("
        << log.skipped_frames << " skipped), " << log.jumps.size() << " jump(s)\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_diagnose(const std::string& scenario, std::ostream& out, std::ostream& err) {
  return guarded("diagnose", err, [&] {
    const Scenario sc = load_scenario(scenario);
    const LandmarkSet L = scenario_landmarks(sc);
    out << std::setprecision(10);
    out << "landmarks: " << L.size() << ", k_c = " << L.k_c << ", p_c = [" << L.p_c.transpose() << "]\n";
    out << "M eigenvalues: " << L.eigenvalues.transpose() << "\n";

    const HybridDesign& d = sc.observer.design;
    const TransformationSet Q = build_transformation_set(L, d.theta, d.policy);
    const DeltaMStar ds = delta_m_star(L.M, Q.axes);
    const double delta_max = (1.0 - std::cos(d.theta)) * ds.value;
    out << "axis policy: " << (d.policy == AxisPolicy::kEigenbasis ? "eigenbasis" : "orthogonal") << ", theta = "
        << d.theta << "\n";
    out << "bound branch: " << (ds.branch == GapBoundBranch::kEigenbasis ? "eigenbasis" : "orthogonal triple")
        << ", lower bound = " << ds.lower_bound << "\n";
    out << "Delta*_M = " << ds.value << "\n";
    out << "delta range: (0, " << delta_max << ")\n";
    const HybridGap gap = d.delta > 0.0 ? make_hybrid_gap_explicit(L, Q, d.delta)
                                        : make_hybrid_gap(L, Q, d.delta_fraction);
    out << "configured delta = " << gap.delta << ", jump bound J = " << jump_bound(L.M, gap.delta) << "\n";

    const auto traj = make_trajectory(sc.trajectory);
    const OmegaFn w = [&](double t) { return traj->omega(t); };
    const double window = std::min(1.0, sc.run.duration);
    for (RiccatiVariant v : {RiccatiVariant::kNoBias6, RiccatiVariant::kGyroBias6, RiccatiVariant::kFullBias9}) {
      double lam = std::numeric_limits<double>::infinity();
      for (double t0 : {0.0, 0.5 * sc.run.duration})
        lam = std::min(lam, observability_gramian(v, w, t0, window, 64).lambda_min);
      out << "Gramian lambda_min (" << to_string(v) << ", window " << window << " s): " << lam << "\n";
    }
    for (double t : {0.0, 0.25 * sc.run.duration, 0.5 * sc.run.duration})
      out << "det(O) at t = " << t << ": "
          << observability_matrix_check(traj->omega(t), traj->omega_dot(t), Vec3::Zero(), Vec3::Zero()) << "\n";
    return static_cast<int>(kExitOk);
  });
}

}  // namespace hino
