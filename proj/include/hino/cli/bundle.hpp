#pragma once

#include "hino/simkit/multirate.hpp"

#include <string>

namespace hino {

/// Directory layout: imu.csv (t, wx, wy, wz, ax, ay, az), landmarks_world.csv
/// (id, px, py, pz, weight), landmark_obs.csv (t, id, yx, yy, yz) and, when
/// truth is present, truth.csv (t, qw..qz, px..pz, vx..vz, bwx..bwz, bax..baz).
void export_bundle(const std::string& dir, const MultirateInput& in, bool with_truth);

/// Throws kSchema for missing or malformed files, non-monotone timestamps and
/// observations of unknown ids. Frames are groups of observations sharing a timestamp.
MultirateInput import_bundle(const std::string& dir);

std::map<double, TruthState> read_truth_csv(const std::string& path);
void write_truth_csv(const std::string& path, const std::map<double, TruthState>& truth);

std::string read_file(const std::string& path);
/// Writes via a temporary file and rename, so readers never see partial output.
void write_file(const std::string& path, const std::string& content);

}  // namespace hino
