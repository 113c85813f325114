#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "platoonsim/simulate.hpp"

namespace platoonsim {

/// CSV layout: header "t,x_1,...,x_n[,u_1,...,u_n],V", one row per sample,
/// 9 significant digits. Control columns are present iff the trajectory
/// recorded controls.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);
std::string trajectory_csv(const Trajectory& trajectory);
void save_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path);

/// Parses the layout above; control columns optional. Throws ParseError with
/// the offending line on malformed input.
Trajectory read_trajectory_csv(std::istream& is);
Trajectory load_trajectory_csv(const std::filesystem::path& path);

}  // namespace platoonsim
