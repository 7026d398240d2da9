#ifndef HEXAKINE_SVG_PLOT_HPP
#define HEXAKINE_SVG_PLOT_HPP

#include <string>

#include "hexakine/planner.hpp"

namespace hexakine {

/// Renders the XY tool path and the six joint position curves as a static
/// SVG document. Output is deterministic: fixed precision, no timestamps.
std::string render_svg(const JointTrajectory& traj);

}  // namespace hexakine

#endif  // HEXAKINE_SVG_PLOT_HPP
