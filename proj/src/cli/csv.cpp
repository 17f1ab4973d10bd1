#include "hino/cli/csv.hpp"

#include <Eigen/Geometry>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace hino {

bool EstimateRow::operator==(const EstimateRow& o) const {
  return t == o.t && j == o.j && q == o.q && p == o.p && v == o.v && bw == o.bw && ba == o.ba && mu_q == o.mu_q &&
         jump_flag == o.jump_flag && err == o.err;
}

std::array<double, 4> rot_to_quat(const Rot3& R) {
  Eigen::Quaterniond q(R);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return {q.w(), q.x(), q.y(), q.z()};
}

Rot3 quat_to_rot(const std::array<double, 4>& q) {
  return Eigen::Quaterniond(q[0], q[1], q[2], q[3]).normalized().toRotationMatrix();
}

std::vector<EstimateRow> estimate_rows(const RunLog& log) {
  std::vector<EstimateRow> rows;
  rows.reserve(log.records.size());
  for (const LogRecord& r : log.records) {
    EstimateRow row;
    row.t = r.t;
    row.j = r.j;
    row.q = rot_to_quat(r.X.rot);
    row.p = r.X.pos;
    row.v = r.X.vel;
    row.bw = r.bw;
    row.ba = r.ba;
    row.mu_q = r.mu_q;
    row.jump_flag = r.jump ? 1 : 0;
    if (r.truth) row.err = std::array<double, 5>{r.err.rot, r.err.pos, r.err.vel, r.err.bw, r.err.ba};
    rows.push_back(row);
  }
  return rows;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

const char* kBaseHeader = "t,j,qw,qx,qy,qz,px,py,pz,vx,vy,vz,bwx,bwy,bwz,bax,bay,baz,mu_q,jump_flag";
const char* kErrHeader = ",err_rot,err_pos,err_vel,err_bw,err_ba";

}  // namespace

std::string emit_estimate_csv(const std::vector<EstimateRow>& rows) {
  bool with_err = !rows.empty();
  for (const auto& r : rows) with_err = with_err && r.err.has_value();
  std::string out = kBaseHeader;
  if (with_err) out += kErrHeader;
  out += "\n";
  for (const auto& r : rows) {
    out += format_double(r.t);
    out += "," + std::to_string(r.j);
    for (double x : r.q) out += "," + format_double(x);
    for (const Vec3* v : {&r.p, &r.v, &r.bw, &r.ba})
      for (int i = 0; i < 3; ++i) out += "," + format_double((*v)(i));
    out += "," + format_double(r.mu_q);
    out += "," + std::to_string(r.jump_flag);
    if (with_err)
      for (double e : *r.err) out += "," + format_double(e);
    out += "\n";
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_field(const std::string& s, std::size_t line, const std::string& column) {
  const char* b = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(b, &end);
  if (s.empty() || end != b + s.size() || errno == ERANGE) {
    std::ostringstream os;
    os << "line " << line << ", column " << column << ": expected a number, got '" << s << "'";
    throw Error(ErrorCode::kSchema, os.str());
  }
  return v;
}

std::vector<EstimateRow> parse_estimate_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kSchema, "estimate log: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string base = kBaseHeader;
  bool with_err = false;
  if (line == base + kErrHeader) with_err = true;
  else if (line != base) throw Error(ErrorCode::kSchema, "estimate log: unexpected header '" + line + "'");
  const std::vector<std::string> names = split_csv_line(with_err ? base + kErrHeader : base);

  std::vector<EstimateRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != names.size()) {
      std::ostringstream os;
      os << "estimate log: line " << lineno << ": expected " << names.size() << " fields, got " << f.size();
      throw Error(ErrorCode::kSchema, os.str());
    }
    auto num = [&](std::size_t i) { return parse_field(f[i], lineno, names[i]); };
    auto integer = [&](std::size_t i) {
      const double v = num(i);
      if (!(std::abs(v) < 2147483647.0) || v != std::floor(v)) {
        std::ostringstream os;
        os << "estimate log: line " << lineno << ", column " << names[i] << ": expected an integer";
        throw Error(ErrorCode::kSchema, os.str());
      }
      return static_cast<int>(v);
    };
    EstimateRow r;
    r.t = num(0);
    r.j = integer(1);
    for (int i = 0; i < 4; ++i) r.q[i] = num(2 + i);
    for (int i = 0; i < 3; ++i) {
      r.p(i) = num(6 + i);
      r.v(i) = num(9 + i);
      r.bw(i) = num(12 + i);
      r.ba(i) = num(15 + i);
    }
    r.mu_q = num(18);
    r.jump_flag = integer(19);
    if (with_err) {
      std::array<double, 5> e{};
      for (int i = 0; i < 5; ++i) e[i] = num(20 + i);
      r.err = e;
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace hino
