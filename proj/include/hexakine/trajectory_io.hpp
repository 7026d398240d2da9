#ifndef HEXAKINE_TRAJECTORY_IO_HPP
#define HEXAKINE_TRAJECTORY_IO_HPP

#include <string>

#include "hexakine/planner.hpp"

namespace hexakine {

/// Writes the trajectory as CSV (header
/// t,px,py,pz,alpha,beta,gamma,q1..q6,qd1..qd6,line; SI units, 9 significant
/// digits) plus a JSON sidecar at `path + ".json"` carrying the planner
/// config and geometry fingerprint.
void write_trajectory(const JointTrajectory& traj, const PlannerConfig& cfg,
                      const std::string& path);

/// Loads a trajectory CSV and its sidecar. Throws IoError on malformed
/// content or a missing sidecar.
JointTrajectory read_trajectory(const std::string& path);

/// Sidecar path convention for a trajectory file.
std::string sidecar_path(const std::string& trajectory_path);

}  // namespace hexakine

#endif  // HEXAKINE_TRAJECTORY_IO_HPP
