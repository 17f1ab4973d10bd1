#include "hino/cli/scenario_file.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hino {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Mark& m, const std::string& path, const std::string& what) const {
    std::ostringstream os;
    os << source_;
    if (!m.is_null()) os << ":" << m.line + 1 << ":" << m.column + 1;
    os << ": " << (path.empty() ? "<document>" : path) << ": " << what;
    throw Error(ErrorCode::kSchema, os.str());
  }

  void require_map(const YAML::Node& n, const std::string& path) const {
    if (!n.IsMap()) fail(n.Mark(), path, "expected a mapping");
  }

  void check_keys(const YAML::Node& n, const std::string& path, const std::set<std::string>& allowed) const {
    require_map(n, path);
    for (auto it = n.begin(); it != n.end(); ++it) {
      const std::string key = it->first.Scalar();
      if (!allowed.count(key)) fail(it->first.Mark(), join(path, key), "unknown key");
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  // Accepts plain numbers and multiples of pi ("pi", "0.8pi", "0.8*pi").
  double number(const YAML::Node& n, const std::string& path) const {
    if (!n.IsScalar()) fail(n.Mark(), path, "expected a number");
    std::string s = n.Scalar();
    double scale = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
      scale = M_PI;
      s.erase(s.size() - 2);
      if (!s.empty() && s.back() == '*') s.pop_back();
      if (s.empty()) return M_PI;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      fail(n.Mark(), path, "expected a number, got '" + n.Scalar() + "'");
    }
    if (used != s.size()) fail(n.Mark(), path, "expected a number, got '" + n.Scalar() + "'");
    if (!std::isfinite(v)) fail(n.Mark(), path, "value must be finite");
    return v * scale;
  }

  long integer(const YAML::Node& n, const std::string& path) const {
    const double v = number(n, path);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) fail(n.Mark(), path, "expected an integer");
    return static_cast<long>(v);
  }

  std::uint64_t unsigned_integer(const YAML::Node& n, const std::string& path) const {
    if (!n.IsScalar()) fail(n.Mark(), path, "expected a non-negative integer");
    const std::string& s = n.Scalar();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      fail(n.Mark(), path, "expected a non-negative integer, got '" + s + "'");
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      fail(n.Mark(), path, "integer out of range");
    }
  }

  bool boolean(const YAML::Node& n, const std::string& path) const {
    if (!n.IsScalar()) fail(n.Mark(), path, "expected true or false");
    const std::string& s = n.Scalar();
    if (s == "true") return true;
    if (s == "false") return false;
    fail(n.Mark(), path, "expected true or false, got '" + s + "'");
  }

  std::string string(const YAML::Node& n, const std::string& path) const {
    if (!n.IsScalar()) fail(n.Mark(), path, "expected a string");
    return n.Scalar();
  }

  Vec3 vec3(const YAML::Node& n, const std::string& path) const {
    if (!n.IsSequence() || n.size() != 3) fail(n.Mark(), path, "expected a list of 3 numbers");
    return Vec3(number(n[0], path + "[0]"), number(n[1], path + "[1]"), number(n[2], path + "[2]"));
  }

  // scalar broadcast to all three axes, or a list of three
  Vec3 vec3_or_scalar(const YAML::Node& n, const std::string& path) const {
    if (n.IsScalar()) return Vec3::Constant(number(n, path));
    return vec3(n, path);
  }

  // scalar times identity, or a list of rows
  MatX matrix(const YAML::Node& n, const std::string& path, int dim) const {
    if (n.IsScalar()) return number(n, path) * MatX::Identity(dim, dim);
    if (!n.IsSequence() || n.size() == 0) fail(n.Mark(), path, "expected a number or a list of rows");
    const int rows = static_cast<int>(n.size());
    MatX A(rows, rows);
    for (int i = 0; i < rows; ++i) {
      const YAML::Node row = n[i];
      const std::string rp = path + "[" + std::to_string(i) + "]";
      if (!row.IsSequence() || static_cast<int>(row.size()) != rows)
        fail(row.Mark(), rp, "expected a row of " + std::to_string(rows) + " numbers");
      for (int j = 0; j < rows; ++j) A(i, j) = number(row[j], rp + "[" + std::to_string(j) + "]");
    }
    return A;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

template <class F>
void if_present(const YAML::Node& parent, const char* key, F&& f) {
  const YAML::Node n = parent[key];
  if (n) f(n);
}

void parse_trajectory(const Reader& rd, const YAML::Node& n, TrajectorySpec& tr) {
  const std::string p = "trajectory";
  rd.check_keys(n, p, {"kind", "radius", "rate", "height", "hover_position", "waypoints", "omega", "initial_rotation"});
  if_present(n, "kind", [&](const YAML::Node& v) {
    const std::string k = rd.string(v, p + ".kind");
    if (k == "circle") tr.kind = TrajectorySpec::Kind::kCircle;
    else if (k == "hover") tr.kind = TrajectorySpec::Kind::kHover;
    else if (k == "waypoints") tr.kind = TrajectorySpec::Kind::kWaypoints;
    else rd.fail(v.Mark(), p + ".kind", "expected circle, hover or waypoints, got '" + k + "'");
  });
  if_present(n, "radius", [&](const YAML::Node& v) { tr.radius = rd.number(v, p + ".radius"); });
  if_present(n, "rate", [&](const YAML::Node& v) { tr.rate = rd.number(v, p + ".rate"); });
  if_present(n, "height", [&](const YAML::Node& v) { tr.height = rd.number(v, p + ".height"); });
  if_present(n, "hover_position", [&](const YAML::Node& v) { tr.hover_position = rd.vec3(v, p + ".hover_position"); });
  if_present(n, "waypoints", [&](const YAML::Node& v) {
    if (!v.IsSequence()) rd.fail(v.Mark(), p + ".waypoints", "expected a list of {t, p} entries");
    tr.waypoint_times.clear();
    tr.waypoint_points.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string wp = p + ".waypoints[" + std::to_string(i) + "]";
      rd.check_keys(v[i], wp, {"t", "p"});
      if (!v[i]["t"] || !v[i]["p"]) rd.fail(v[i].Mark(), wp, "needs both t and p");
      tr.waypoint_times.push_back(rd.number(v[i]["t"], wp + ".t"));
      tr.waypoint_points.push_back(rd.vec3(v[i]["p"], wp + ".p"));
    }
  });
  if_present(n, "omega", [&](const YAML::Node& v) {
    const std::string op = p + ".omega";
    rd.check_keys(v, op, {"profile", "value", "frequency"});
    if_present(v, "profile", [&](const YAML::Node& x) {
      const std::string s = rd.string(x, op + ".profile");
      if (s == "constant") tr.omega.profile = OmegaSpec::Profile::kConstant;
      else if (s == "sinusoidal") tr.omega.profile = OmegaSpec::Profile::kSinusoidal;
      else rd.fail(x.Mark(), op + ".profile", "expected constant or sinusoidal, got '" + s + "'");
    });
    if_present(v, "value", [&](const YAML::Node& x) { tr.omega.value = rd.vec3(x, op + ".value"); });
    if_present(v, "frequency", [&](const YAML::Node& x) { tr.omega.frequency = rd.number(x, op + ".frequency"); });
  });
  if_present(n, "initial_rotation", [&](const YAML::Node& v) {
    const MatX R = rd.matrix(v, p + ".initial_rotation", 3);
    if (R.rows() != 3) rd.fail(v.Mark(), p + ".initial_rotation", "expected 3 rows of 3 numbers");
    if (!is_rotation(R, 1e-9)) rd.fail(v.Mark(), p + ".initial_rotation", "not a rotation matrix");
    tr.initial_rotation = R;
  });
}

void parse_imu(const Reader& rd, const YAML::Node& n, ImuSpec& imu) {
  const std::string p = "imu";
  rd.check_keys(n, p, {"rate", "gyro_variance", "accel_variance", "gyro_bias", "accel_bias"});
  if_present(n, "rate", [&](const YAML::Node& v) { imu.rate = rd.number(v, p + ".rate"); });
  if_present(n, "gyro_variance", [&](const YAML::Node& v) { imu.gyro_variance = rd.vec3_or_scalar(v, p + ".gyro_variance"); });
  if_present(n, "accel_variance", [&](const YAML::Node& v) { imu.accel_variance = rd.vec3_or_scalar(v, p + ".accel_variance"); });
  if_present(n, "gyro_bias", [&](const YAML::Node& v) { imu.gyro_bias = rd.vec3(v, p + ".gyro_bias"); });
  if_present(n, "accel_bias", [&](const YAML::Node& v) { imu.accel_bias = rd.vec3(v, p + ".accel_bias"); });
}

void parse_landmarks(const Reader& rd, const YAML::Node& n, LandmarkSpec& lm) {
  const std::string p = "landmarks";
  rd.check_keys(n, p, {"points", "weights", "rate", "noise_variance", "dropout_fraction"});
  if_present(n, "points", [&](const YAML::Node& v) {
    if (!v.IsSequence()) rd.fail(v.Mark(), p + ".points", "expected a list of [x, y, z]");
    lm.points.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      lm.points.push_back(rd.vec3(v[i], p + ".points[" + std::to_string(i) + "]"));
    lm.weights.clear();
  });
  if_present(n, "weights", [&](const YAML::Node& v) {
    if (!v.IsSequence()) rd.fail(v.Mark(), p + ".weights", "expected a list of numbers");
    lm.weights.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double w = rd.number(v[i], p + ".weights[" + std::to_string(i) + "]");
      if (!(w > 0.0)) rd.fail(v[i].Mark(), p + ".weights[" + std::to_string(i) + "]", "weights must be > 0");
      lm.weights.push_back(w);
    }
  });
  if (lm.weights.size() && lm.weights.size() != lm.points.size())
    rd.fail(n["weights"] ? n["weights"].Mark() : n.Mark(), p + ".weights", "must have one entry per point");
  if_present(n, "rate", [&](const YAML::Node& v) { lm.rate = rd.number(v, p + ".rate"); });
  if_present(n, "noise_variance", [&](const YAML::Node& v) { lm.noise_variance = rd.vec3_or_scalar(v, p + ".noise_variance"); });
  if_present(n, "dropout_fraction", [&](const YAML::Node& v) { lm.dropout_fraction = rd.number(v, p + ".dropout_fraction"); });
}

void parse_observer(const Reader& rd, const YAML::Node& n, ObserverSpec& ob) {
  const std::string p = "observer";
  rd.check_keys(n, p, {"kind", "estimate_gyro_bias", "gains", "theta", "axis_policy", "delta_fraction", "delta", "initial"});
  if_present(n, "kind", [&](const YAML::Node& v) {
    const std::string k = rd.string(v, p + ".kind");
    try {
      ob.kind = observer_kind_from_string(k);
    } catch (const Error&) {
      rd.fail(v.Mark(), p + ".kind", "expected cino, hino, hino_cre or hino_cre2, got '" + k + "'");
    }
  });
  if_present(n, "estimate_gyro_bias", [&](const YAML::Node& v) { ob.estimate_gyro_bias = rd.boolean(v, p + ".estimate_gyro_bias"); });
  if_present(n, "gains", [&](const YAML::Node& v) {
    const std::string gp = p + ".gains";
    rd.check_keys(v, gp, {"k_R", "k_p", "k_v", "k_w"});
    if_present(v, "k_R", [&](const YAML::Node& x) { ob.gains.k_R = rd.number(x, gp + ".k_R"); });
    if_present(v, "k_p", [&](const YAML::Node& x) { ob.gains.k_p = rd.number(x, gp + ".k_p"); });
    if_present(v, "k_v", [&](const YAML::Node& x) { ob.gains.k_v = rd.number(x, gp + ".k_v"); });
    if_present(v, "k_w", [&](const YAML::Node& x) { ob.gains.k_w = rd.number(x, gp + ".k_w"); });
  });
  if_present(n, "theta", [&](const YAML::Node& v) { ob.design.theta = rd.number(v, p + ".theta"); });
  if_present(n, "axis_policy", [&](const YAML::Node& v) {
    const std::string s = rd.string(v, p + ".axis_policy");
    if (s == "eigenbasis") ob.design.policy = AxisPolicy::kEigenbasis;
    else if (s == "orthogonal") ob.design.policy = AxisPolicy::kOrthogonalTriple;
    else rd.fail(v.Mark(), p + ".axis_policy", "expected eigenbasis or orthogonal, got '" + s + "'");
  });
  if_present(n, "delta_fraction", [&](const YAML::Node& v) {
    ob.design.delta_fraction = rd.number(v, p + ".delta_fraction");
    if (!(ob.design.delta_fraction > 0.0 && ob.design.delta_fraction < 1.0))
      rd.fail(v.Mark(), p + ".delta_fraction", "must be in (0, 1)");
  });
  if_present(n, "delta", [&](const YAML::Node& v) {
    ob.design.delta = rd.number(v, p + ".delta");
    if (ob.design.delta < 0.0) rd.fail(v.Mark(), p + ".delta", "must be >= 0 (0 = use delta_fraction)");
  });
  if_present(n, "initial", [&](const YAML::Node& v) {
    const std::string ip = p + ".initial";
    auto& ie = ob.initial;
    rd.check_keys(v, ip, {"attitude_angle", "attitude_eigen_axis", "attitude_axis", "position", "velocity", "gyro_bias", "accel_bias"});
    if_present(v, "attitude_angle", [&](const YAML::Node& x) { ie.attitude_angle = rd.number(x, ip + ".attitude_angle"); });
    if_present(v, "attitude_eigen_axis", [&](const YAML::Node& x) {
      ie.attitude_eigen_axis = static_cast<int>(rd.integer(x, ip + ".attitude_eigen_axis"));
      if (ie.attitude_eigen_axis < -1 || ie.attitude_eigen_axis > 2)
        rd.fail(x.Mark(), ip + ".attitude_eigen_axis", "must be -1, 0, 1 or 2");
    });
    if_present(v, "attitude_axis", [&](const YAML::Node& x) {
      ie.attitude_axis = rd.vec3(x, ip + ".attitude_axis");
      if (!(ie.attitude_axis.norm() > 0.0)) rd.fail(x.Mark(), ip + ".attitude_axis", "must be non-zero");
      if (!v["attitude_eigen_axis"]) ie.attitude_eigen_axis = -1;
    });
    if_present(v, "position", [&](const YAML::Node& x) { ie.position = rd.vec3(x, ip + ".position"); });
    if_present(v, "velocity", [&](const YAML::Node& x) { ie.velocity = rd.vec3(x, ip + ".velocity"); });
    if_present(v, "gyro_bias", [&](const YAML::Node& x) { ie.gyro_bias = rd.vec3(x, ip + ".gyro_bias"); });
    if_present(v, "accel_bias", [&](const YAML::Node& x) { ie.accel_bias = rd.vec3(x, ip + ".accel_bias"); });
  });
}

void parse_riccati(const Reader& rd, const YAML::Node& n, RiccatiSpec& rs, ObserverKind kind) {
  const std::string p = "riccati";
  rd.check_keys(n, p, {"P0", "V", "Q"});
  const int dim = kind == ObserverKind::kHinoCre2 ? 9 : 6;
  if_present(n, "P0", [&](const YAML::Node& v) { rs.P0 = rd.matrix(v, p + ".P0", dim); });
  if_present(n, "V", [&](const YAML::Node& v) { rs.V = rd.matrix(v, p + ".V", dim); });
  if_present(n, "Q", [&](const YAML::Node& v) {
    const MatX Q = rd.matrix(v, p + ".Q", 3);
    if (Q.rows() != 3) rd.fail(v.Mark(), p + ".Q", "expected a number or 3 rows of 3 numbers");
    rs.Q = Q;
  });
  for (const char* key : {"P0", "V"}) {
    const MatX& A = std::string(key) == "P0" ? rs.P0 : rs.V;
    if (A.size() && A.rows() != dim)
      rd.fail(n[key].Mark(), p + "." + key,
              "observer kind " + std::string(to_string(kind)) + " needs " + std::to_string(dim) + "x" +
                  std::to_string(dim));
  }
}

void parse_run(const Reader& rd, const YAML::Node& n, RunSpec& run) {
  const std::string p = "run";
  rd.check_keys(n, p, {"mode", "duration", "dt", "truth_substeps", "seed", "log_every", "gravity"});
  if_present(n, "mode", [&](const YAML::Node& v) {
    const std::string s = rd.string(v, p + ".mode");
    if (s == "continuous") run.mode = RunMode::kContinuous;
    else if (s == "algorithm1") run.mode = RunMode::kAlgorithm1;
    else rd.fail(v.Mark(), p + ".mode", "expected continuous or algorithm1, got '" + s + "'");
  });
  if_present(n, "duration", [&](const YAML::Node& v) { run.duration = rd.number(v, p + ".duration"); });
  if_present(n, "dt", [&](const YAML::Node& v) { run.dt = rd.number(v, p + ".dt"); });
  if_present(n, "truth_substeps", [&](const YAML::Node& v) { run.truth_substeps = static_cast<int>(rd.integer(v, p + ".truth_substeps")); });
  if_present(n, "seed", [&](const YAML::Node& v) { run.seed = rd.unsigned_integer(v, p + ".seed"); });
  if_present(n, "log_every", [&](const YAML::Node& v) { run.log_every = static_cast<int>(rd.integer(v, p + ".log_every")); });
  if_present(n, "gravity", [&](const YAML::Node& v) { run.gravity = rd.vec3(v, p + ".gravity"); });
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  const Reader rd(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    rd.fail(e.mark, "", e.msg);
  }
  Scenario sc;
  sc.landmarks = default_landmarks();
  if (root.IsNull()) return sc;
  rd.check_keys(root, "", {"name", "trajectory", "imu", "landmarks", "observer", "riccati", "run"});
  if_present(root, "name", [&](const YAML::Node& v) { sc.name = rd.string(v, "name"); });
  if_present(root, "trajectory", [&](const YAML::Node& v) { parse_trajectory(rd, v, sc.trajectory); });
  if_present(root, "imu", [&](const YAML::Node& v) { parse_imu(rd, v, sc.imu); });
  if_present(root, "landmarks", [&](const YAML::Node& v) { parse_landmarks(rd, v, sc.landmarks); });
  if_present(root, "observer", [&](const YAML::Node& v) { parse_observer(rd, v, sc.observer); });
  if_present(root, "riccati", [&](const YAML::Node& v) { parse_riccati(rd, v, sc.riccati, sc.observer.kind); });
  if_present(root, "run", [&](const YAML::Node& v) { parse_run(rd, v, sc.run); });
  try {
    validate(sc);
  } catch (const Error& e) {
    rd.fail(YAML::Mark::null_mark(), "", e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kSchema, path + ": cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

namespace {

void emit_vec(YAML::Emitter& e, const Vec3& v) {
  e << YAML::Flow << YAML::BeginSeq << v(0) << v(1) << v(2) << YAML::EndSeq;
}

void emit_mat(YAML::Emitter& e, const MatX& A) {
  e << YAML::BeginSeq;
  for (int i = 0; i < A.rows(); ++i) {
    e << YAML::Flow << YAML::BeginSeq;
    for (int j = 0; j < A.cols(); ++j) e << A(i, j);
    e << YAML::EndSeq;
  }
  e << YAML::EndSeq;
}

const char* kind_name(TrajectorySpec::Kind k) {
  switch (k) {
    case TrajectorySpec::Kind::kCircle: return "circle";
    case TrajectorySpec::Kind::kHover: return "hover";
    case TrajectorySpec::Kind::kWaypoints: return "waypoints";
  }
  return "circle";
}

}  // namespace

std::string emit_scenario(const Scenario& sc) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << sc.name;

  const auto& tr = sc.trajectory;
  e << YAML::Key << "trajectory" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << kind_name(tr.kind);
  e << YAML::Key << "radius" << YAML::Value << tr.radius;
  e << YAML::Key << "rate" << YAML::Value << tr.rate;
  e << YAML::Key << "height" << YAML::Value << tr.height;
  e << YAML::Key << "hover_position" << YAML::Value;
  emit_vec(e, tr.hover_position);
  if (!tr.waypoint_times.empty()) {
    e << YAML::Key << "waypoints" << YAML::Value << YAML::BeginSeq;
    for (std::size_t i = 0; i < tr.waypoint_times.size(); ++i) {
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "t" << YAML::Value << tr.waypoint_times[i];
      e << YAML::Key << "p" << YAML::Value;
      emit_vec(e, tr.waypoint_points[i]);
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  e << YAML::Key << "omega" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "profile" << YAML::Value
    << (tr.omega.profile == OmegaSpec::Profile::kConstant ? "constant" : "sinusoidal");
  e << YAML::Key << "value" << YAML::Value;
  emit_vec(e, tr.omega.value);
  e << YAML::Key << "frequency" << YAML::Value << tr.omega.frequency;
  e << YAML::EndMap;
  e << YAML::Key << "initial_rotation" << YAML::Value;
  emit_mat(e, tr.initial_rotation);
  e << YAML::EndMap;

  e << YAML::Key << "imu" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "rate" << YAML::Value << sc.imu.rate;
  e << YAML::Key << "gyro_variance" << YAML::Value;
  emit_vec(e, sc.imu.gyro_variance);
  e << YAML::Key << "accel_variance" << YAML::Value;
  emit_vec(e, sc.imu.accel_variance);
  e << YAML::Key << "gyro_bias" << YAML::Value;
  emit_vec(e, sc.imu.gyro_bias);
  e << YAML::Key << "accel_bias" << YAML::Value;
  emit_vec(e, sc.imu.accel_bias);
  e << YAML::EndMap;

  e << YAML::Key << "landmarks" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
  for (const Vec3& p : sc.landmarks.points) emit_vec(e, p);
  e << YAML::EndSeq;
  if (!sc.landmarks.weights.empty()) {
    e << YAML::Key << "weights" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double w : sc.landmarks.weights) e << w;
    e << YAML::EndSeq;
  }
  e << YAML::Key << "rate" << YAML::Value << sc.landmarks.rate;
  e << YAML::Key << "noise_variance" << YAML::Value;
  emit_vec(e, sc.landmarks.noise_variance);
  e << YAML::Key << "dropout_fraction" << YAML::Value << sc.landmarks.dropout_fraction;
  e << YAML::EndMap;

  const auto& ob = sc.observer;
  e << YAML::Key << "observer" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << to_string(ob.kind);
  e << YAML::Key << "estimate_gyro_bias" << YAML::Value << ob.estimate_gyro_bias;
  e << YAML::Key << "gains" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "k_R" << YAML::Value << ob.gains.k_R << YAML::Key << "k_p" << YAML::Value << ob.gains.k_p;
  e << YAML::Key << "k_v" << YAML::Value << ob.gains.k_v << YAML::Key << "k_w" << YAML::Value << ob.gains.k_w;
  e << YAML::EndMap;
  e << YAML::Key << "theta" << YAML::Value << ob.design.theta;
  e << YAML::Key << "axis_policy" << YAML::Value
    << (ob.design.policy == AxisPolicy::kEigenbasis ? "eigenbasis" : "orthogonal");
  e << YAML::Key << "delta_fraction" << YAML::Value << ob.design.delta_fraction;
  e << YAML::Key << "delta" << YAML::Value << ob.design.delta;
  e << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "attitude_angle" << YAML::Value << ob.initial.attitude_angle;
  e << YAML::Key << "attitude_eigen_axis" << YAML::Value << ob.initial.attitude_eigen_axis;
  e << YAML::Key << "attitude_axis" << YAML::Value;
  emit_vec(e, ob.initial.attitude_axis);
  e << YAML::Key << "position" << YAML::Value;
  emit_vec(e, ob.initial.position);
  e << YAML::Key << "velocity" << YAML::Value;
  emit_vec(e, ob.initial.velocity);
  e << YAML::Key << "gyro_bias" << YAML::Value;
  emit_vec(e, ob.initial.gyro_bias);
  e << YAML::Key << "accel_bias" << YAML::Value;
  emit_vec(e, ob.initial.accel_bias);
  e << YAML::EndMap;
  e << YAML::EndMap;

  e << YAML::Key << "riccati" << YAML::Value << YAML::BeginMap;
  if (sc.riccati.P0.size()) {
    e << YAML::Key << "P0" << YAML::Value;
    emit_mat(e, sc.riccati.P0);
  }
  if (sc.riccati.V.size()) {
    e << YAML::Key << "V" << YAML::Value;
    emit_mat(e, sc.riccati.V);
  }
  e << YAML::Key << "Q" << YAML::Value;
  emit_mat(e, sc.riccati.Q);
  e << YAML::EndMap;

  e << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "mode" << YAML::Value << to_string(sc.run.mode);
  e << YAML::Key << "duration" << YAML::Value << sc.run.duration;
  e << YAML::Key << "dt" << YAML::Value << sc.run.dt;
  e << YAML::Key << "truth_substeps" << YAML::Value << sc.run.truth_substeps;
  e << YAML::Key << "seed" << YAML::Value << sc.run.seed;
  e << YAML::Key << "log_every" << YAML::Value << sc.run.log_every;
  e << YAML::Key << "gravity" << YAML::Value;
  emit_vec(e, sc.run.gravity);
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const Scenario& sc) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(emit_scenario(sc))));
  return buf;
}

}  // namespace hino
