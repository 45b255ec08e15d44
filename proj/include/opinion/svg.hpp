#pragma once

#include "opinion/dynamics.hpp"

#include <filesystem>
#include <string>

namespace opinion {

/// Self-contained trajectory plot: one polyline per agent, axes with ticks,
/// legend, no external assets. Axes are auto-scaled to the trajectory
/// extrema with a 5% margin.
std::string trajectory_svg(const Trajectory& traj);
void write_trajectory_svg(const Trajectory& traj, const std::filesystem::path& path);

} // namespace opinion
