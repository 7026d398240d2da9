#ifndef HEXAKINE_PLANNER_HPP
#define HEXAKINE_PLANNER_HPP

#include <string>
#include <vector>

#include "hexakine/gcode.hpp"
#include "hexakine/geometry.hpp"
#include "hexakine/types.hpp"

namespace hexakine {

struct PlannerConfig {
    double max_cartesian_step = 1e-4;     // m, spacing of interpolated poses
    double arc_chord_tolerance = 1e-5;    // m, max chord-to-arc deviation
    double rapid_feed = 0.05;             // m/s, used for G0 moves
    double workspace_margin = 1e-6;       // m, boundary and rail-limit margin
    double sample_rate = 1000.0;          // Hz, output grid
    double characteristic_radius = 0.1;   // m, feed scaling for angular-only moves

    void validate() const;  // throws ConfigError
};

struct TrajectorySample {
    double t = 0.0;  // seconds, strictly increasing
    PlatformPose pose;
    JointVector joints = JointVector::Zero();
    Vec6 joint_velocity = Vec6::Zero();  // m/s
    int source_line = 0;                 // 0 for the initial home sample
};

struct JointTrajectory {
    std::vector<TrajectorySample> samples;
    std::string geometry_fingerprint;
    double sample_rate_hz = 0.0;
};

struct InterpolationResult {
    std::vector<PlatformPose> poses;  // endpoints included
    bool degenerate = false;          // start == target within 1e-12
};

/// Subdivides one motion command into poses starting at `start`.
/// Linear/Rapid: uniform spacing <= max_cartesian_step, positions and angles
/// linear. Arc: equal angular steps sized so the chord deviation stays
/// within arc_chord_tolerance; z and angles linear over the arc parameter.
InterpolationResult interpolate(const gcode::MotionCommand& command, const PlatformPose& start,
                                const PlannerConfig& cfg);

/// Compiles a command stream into a uniformly sampled joint trajectory.
/// Timestamps make the Cartesian tool speed equal the commanded feed
/// (cfg.rapid_feed for rapids); every emitted sample is solved through
/// inverse kinematics; joint velocities come from central differences on
/// the sample grid, one-sided where a command's span begins or ends.
/// Rejects the whole program on the first workspace or rail-limit
/// violation. The first sample is always the home pose at t = 0.
JointTrajectory plan(const std::vector<gcode::MotionCommand>& commands,
                     const MachineGeometry& geom, const PlannerConfig& cfg);

struct VerifyReport {
    std::size_t sample_count = 0;
    double duration = 0.0;              // s
    double max_pose_error = 0.0;        // max |FK(q) - pose| over all 6 components
    double max_closure_residual = 0.0;  // m
    double max_joint_speed = 0.0;       // m/s
    long worst_sample = -1;             // index of max_pose_error
    double max_path_deviation = -1.0;   // m; -1 when no command list was supplied

    std::string to_string() const;
};

/// Replays every sample through forward kinematics (warm-started from the
/// previous reconstructed pose) and reports the maximum pose reconstruction
/// error, closure residual, and joint speed. NoConvergence is rethrown with
/// the failing sample index.
VerifyReport verify(const JointTrajectory& traj, const MachineGeometry& geom);

/// As verify(), additionally measuring each sample's geometric deviation
/// from the ideal path of the command it belongs to (point-to-segment
/// distance for linear moves, XY radial error for arcs).
VerifyReport verify(const JointTrajectory& traj, const MachineGeometry& geom,
                    const std::vector<gcode::MotionCommand>& commands,
                    const PlatformPose& program_start);

}  // namespace hexakine

#endif  // HEXAKINE_PLANNER_HPP
