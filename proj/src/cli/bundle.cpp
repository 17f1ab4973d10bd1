#include "hino/cli/bundle.hpp"

#include "hino/cli/csv.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace hino {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kSchema, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, tmp + ": cannot open for writing");
    out << content;
    if (!out) throw Error(ErrorCode::kIo, tmp + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, path + ": " + ec.message());
}

namespace {

struct Table {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  double num(std::size_t r, std::size_t c) const {
    try {
      return parse_field(rows[r][c], lines[r], header[c]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchema, path + ": " + e.what());
    }
  }
  [[noreturn]] void fail(std::size_t r, const std::string& what) const {
    std::ostringstream os;
    os << path << ": line " << lines[r] << ": " << what;
    throw Error(ErrorCode::kSchema, os.str());
  }
};

Table read_table(const std::string& path, const std::string& header, bool allow_empty_file) {
  if (!fs::exists(path)) throw Error(ErrorCode::kSchema, path + ": missing file");
  Table t;
  t.path = path;
  t.header = split_csv_line(header);
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) {
    if (allow_empty_file) return t;
    throw Error(ErrorCode::kSchema, path + ": empty file, expected header '" + header + "'");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw Error(ErrorCode::kSchema, path + ": line 1: expected header '" + header + "'");
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != t.header.size()) {
      std::ostringstream os;
      os << path << ": line " << n << ": expected " << t.header.size() << " fields, got " << f.size();
      throw Error(ErrorCode::kSchema, os.str());
    }
    t.rows.push_back(std::move(f));
    t.lines.push_back(n);
  }
  return t;
}

int as_id(const Table& t, std::size_t r, std::size_t c) {
  const double v = t.num(r, c);
  if (!(std::abs(v) < 2147483647.0) || v != std::floor(v)) t.fail(r, "id must be an integer");
  return static_cast<int>(v);
}

const char* kImuHeader = "t,wx,wy,wz,ax,ay,az";
const char* kWorldHeader = "id,px,py,pz,weight";
const char* kObsHeader = "t,id,yx,yy,yz";
const char* kTruthHeader = "t,qw,qx,qy,qz,px,py,pz,vx,vy,vz,bwx,bwy,bwz,bax,bay,baz";

std::string vec_fields(const Vec3& v) {
  return format_double(v(0)) + "," + format_double(v(1)) + "," + format_double(v(2));
}

}  // namespace

std::map<double, TruthState> read_truth_csv(const std::string& path) {
  const Table t = read_table(path, kTruthHeader, false);
  std::map<double, TruthState> out;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    TruthState s;
    s.t = t.num(r, 0);
    if (s.t < prev) t.fail(r, "timestamps must be non-decreasing");
    prev = s.t;
    s.X.rot = quat_to_rot({t.num(r, 1), t.num(r, 2), t.num(r, 3), t.num(r, 4)});
    for (int i = 0; i < 3; ++i) {
      s.X.pos(i) = t.num(r, 5 + i);
      s.X.vel(i) = t.num(r, 8 + i);
      s.bw(i) = t.num(r, 11 + i);
      s.ba(i) = t.num(r, 14 + i);
    }
    out[s.t] = s;
  }
  return out;
}

void write_truth_csv(const std::string& path, const std::map<double, TruthState>& truth) {
  std::string s = std::string(kTruthHeader) + "\n";
  for (const auto& [t, x] : truth) {
    const auto q = rot_to_quat(x.X.rot);
    s += format_double(t);
    for (double c : q) s += "," + format_double(c);
    s += "," + vec_fields(x.X.pos) + "," + vec_fields(x.X.vel) + "," + vec_fields(x.bw) + "," + vec_fields(x.ba) + "\n";
  }
  write_file(path, s);
}

void export_bundle(const std::string& dir, const MultirateInput& in, bool with_truth) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, dir + ": " + ec.message());

  std::string imu = std::string(kImuHeader) + "\n";
  for (const auto& u : in.imu) imu += format_double(u.t) + "," + vec_fields(u.gyro) + "," + vec_fields(u.accel) + "\n";
  write_file((fs::path(dir) / "imu.csv").string(), imu);

  std::string world = std::string(kWorldHeader) + "\n";
  for (std::size_t i = 0; i < in.catalog.size(); ++i)
    world += std::to_string(in.catalog.ids[i]) + "," + vec_fields(in.catalog.points[i]) + "," +
             format_double(in.catalog.weights[i]) + "\n";
  write_file((fs::path(dir) / "landmarks_world.csv").string(), world);

  std::string obs = std::string(kObsHeader) + "\n";
  for (const auto& f : in.frames)
    for (const auto& o : f.obs) obs += format_double(f.t) + "," + std::to_string(o.id) + "," + vec_fields(o.y) + "\n";
  write_file((fs::path(dir) / "landmark_obs.csv").string(), obs);

  if (with_truth && !in.truth.empty()) write_truth_csv((fs::path(dir) / "truth.csv").string(), in.truth);
}

MultirateInput import_bundle(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kSchema, dir + ": not a directory");
  MultirateInput in;

  const Table imu = read_table((fs::path(dir) / "imu.csv").string(), kImuHeader, false);
  if (imu.rows.size() < 2) throw Error(ErrorCode::kSchema, imu.path + ": needs at least two samples");
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < imu.rows.size(); ++r) {
    ImuSample u;
    u.t = imu.num(r, 0);
    if (u.t < prev) imu.fail(r, "timestamps must be non-decreasing");
    prev = u.t;
    u.gyro = Vec3(imu.num(r, 1), imu.num(r, 2), imu.num(r, 3));
    u.accel = Vec3(imu.num(r, 4), imu.num(r, 5), imu.num(r, 6));
    in.imu.push_back(u);
  }

  const Table world = read_table((fs::path(dir) / "landmarks_world.csv").string(), kWorldHeader, true);
  std::set<int> ids;
  for (std::size_t r = 0; r < world.rows.size(); ++r) {
    const int id = as_id(world, r, 0);
    if (!ids.insert(id).second) world.fail(r, "duplicate landmark id " + std::to_string(id));
    const double w = world.num(r, 4);
    if (!(w > 0.0)) world.fail(r, "weight must be > 0");
    in.catalog.ids.push_back(id);
    in.catalog.points.push_back(Vec3(world.num(r, 1), world.num(r, 2), world.num(r, 3)));
    in.catalog.weights.push_back(w);
  }

  const Table obs = read_table((fs::path(dir) / "landmark_obs.csv").string(), kObsHeader, true);
  prev = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < obs.rows.size(); ++r) {
    const double t = obs.num(r, 0);
    if (t < prev) obs.fail(r, "timestamps must be non-decreasing");
    const int id = as_id(obs, r, 1);
    if (!ids.count(id)) obs.fail(r, "landmark id " + std::to_string(id) + " not in landmarks_world.csv");
    if (in.frames.empty() || t != prev) in.frames.push_back({t, {}});
    prev = t;
    in.frames.back().obs.push_back({id, Vec3(obs.num(r, 2), obs.num(r, 3), obs.num(r, 4))});
  }
  return in;
}

}  // namespace hino
