#pragma once

#include "hino/simkit/run.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hino {

/// One EstimateLog row. Attitude is a unit quaternion with qw >= 0.
struct EstimateRow {
  double t = 0.0;
  int j = 0;
  std::array<double, 4> q{1.0, 0.0, 0.0, 0.0};  // qw, qx, qy, qz
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 bw = Vec3::Zero();
  Vec3 ba = Vec3::Zero();
  double mu_q = 0.0;
  int jump_flag = 0;
  std::optional<std::array<double, 5>> err;  // rot, pos, vel, bw, ba

  bool operator==(const EstimateRow& o) const;
};

std::array<double, 4> rot_to_quat(const Rot3& R);
Rot3 quat_to_rot(const std::array<double, 4>& q);

std::vector<EstimateRow> estimate_rows(const RunLog& log);

/// Header plus one row per record, numbers as %.17g. err_* columns are written
/// when every row carries them.
std::string emit_estimate_csv(const std::vector<EstimateRow>& rows);
/// Inverse of emit_estimate_csv; throws kSchema with the line number on malformed input.
std::vector<EstimateRow> parse_estimate_csv(const std::string& text);

/// Splits a CSV line on commas; no quoting.
std::vector<std::string> split_csv_line(const std::string& line);
/// strtod on the whole field; throws kSchema naming the line and column.
double parse_field(const std::string& s, std::size_t line, const std::string& column);

std::string format_double(double x);

}  // namespace hino
