#include "hexakine/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "hexakine/errors.hpp"
#include "hexakine/kinematics.hpp"

namespace hexakine {

namespace {

constexpr double kDegenerateTol = 1e-12;
// Guards ceil() against values like 10.000000000000002 produced by exact
// ratios under floating-point division.
constexpr double kCeilSlack = 1e-9;

long safe_ceil(double x) {
    return static_cast<long>(std::ceil(x - kCeilSlack));
}

PlatformPose pose_lerp(const PlatformPose& a, const PlatformPose& b, double u) {
    return {a.position + u * (b.position - a.position), a.angles + u * (b.angles - a.angles)};
}

struct ArcGeometry {
    Vec3 center;      // z carries the start z
    double r_start = 0.0;
    double r_end = 0.0;
    double sweep = 0.0;  // signed, CCW positive; (0, 2pi] magnitude
    double start_angle = 0.0;
};

// Start/end coincident in XY means a full circle (the frontend rejects the
// ambiguous R form for that case).
ArcGeometry resolve_arc(const gcode::MotionCommand& cmd, const PlatformPose& start) {
    ArcGeometry arc;
    arc.center = *cmd.arc_center;
    const double dx0 = start.position.x() - arc.center.x();
    const double dy0 = start.position.y() - arc.center.y();
    const double dx1 = cmd.target.position.x() - arc.center.x();
    const double dy1 = cmd.target.position.y() - arc.center.y();
    arc.r_start = std::hypot(dx0, dy0);
    arc.r_end = std::hypot(dx1, dy1);
    arc.start_angle = std::atan2(dy0, dx0);

    const bool ccw = cmd.arc_sense == gcode::ArcSense::CCW;
    double sweep = std::atan2(dy1, dx1) - arc.start_angle;
    if (ccw) {
        if (sweep <= 0.0) sweep += 2.0 * kPi;
    } else {
        if (sweep >= 0.0) sweep -= 2.0 * kPi;
    }
    arc.sweep = sweep;
    return arc;
}

double arc_path_length(const ArcGeometry& arc, const PlatformPose& start,
                       const gcode::MotionCommand& cmd) {
    const double r_mean = 0.5 * (arc.r_start + arc.r_end);
    const double dz = cmd.target.position.z() - start.position.z();
    return std::hypot(std::abs(arc.sweep) * r_mean, dz);
}

}  // namespace

void PlannerConfig::validate() const {
    if (!(max_cartesian_step > 0.0)) throw ConfigError("planner: max_cartesian_step must be > 0");
    if (!(arc_chord_tolerance > 0.0)) throw ConfigError("planner: arc_chord_tolerance must be > 0");
    if (!(rapid_feed > 0.0)) throw ConfigError("planner: rapid_feed must be > 0");
    if (!(workspace_margin > 0.0)) throw ConfigError("planner: workspace_margin must be > 0");
    if (!(sample_rate > 0.0)) throw ConfigError("planner: sample_rate must be > 0");
    if (!(characteristic_radius > 0.0)) throw ConfigError("planner: characteristic_radius must be > 0");
    if (max_cartesian_step < arc_chord_tolerance) {
        throw ConfigError("planner: max_cartesian_step must be >= arc_chord_tolerance");
    }
}

InterpolationResult interpolate(const gcode::MotionCommand& command, const PlatformPose& start,
                                const PlannerConfig& cfg) {
    InterpolationResult result;

    if (command.kind == gcode::CommandKind::Arc) {
        const ArcGeometry arc = resolve_arc(command, start);
        if (arc.r_start < kDegenerateTol && arc.r_end < kDegenerateTol) {
            result.poses.push_back(start);
            result.degenerate = true;
            return result;
        }
        const double r = std::max(arc.r_start, arc.r_end);
        const double ratio = std::clamp(1.0 - cfg.arc_chord_tolerance / r, -1.0, 1.0);
        const double max_step_angle = 2.0 * std::acos(ratio);
        const long n = std::max(1L, safe_ceil(std::abs(arc.sweep) / max_step_angle));

        result.poses.reserve(n + 1);
        result.poses.push_back(start);
        for (long k = 1; k < n; ++k) {
            const double u = static_cast<double>(k) / static_cast<double>(n);
            const double phi = arc.start_angle + arc.sweep * u;
            const double rho = arc.r_start + (arc.r_end - arc.r_start) * u;
            PlatformPose pose = pose_lerp(start, command.target, u);
            pose.position.x() = arc.center.x() + rho * std::cos(phi);
            pose.position.y() = arc.center.y() + rho * std::sin(phi);
            result.poses.push_back(pose);
        }
        result.poses.push_back(command.target);
        return result;
    }

    const Vec3 dp = command.target.position - start.position;
    const Vec3 da = command.target.angles - start.angles;
    if (dp.norm() < kDegenerateTol && da.norm() < kDegenerateTol) {
        result.poses.push_back(start);
        result.degenerate = true;
        return result;
    }
    const double length = std::max(dp.norm(), cfg.characteristic_radius * da.norm());
    const long n = std::max(1L, safe_ceil(length / cfg.max_cartesian_step));
    result.poses.reserve(n + 1);
    result.poses.push_back(start);
    for (long k = 1; k < n; ++k) {
        result.poses.push_back(
            pose_lerp(start, command.target, static_cast<double>(k) / static_cast<double>(n)));
    }
    result.poses.push_back(command.target);
    return result;
}

namespace {

struct Segment {
    std::vector<PlatformPose> poses;  // uniform in parameter, endpoints included
    double t_start = 0.0;
    double t_end = 0.0;
    int source_line = 0;

    PlatformPose at(double t) const {
        if (poses.size() == 1) return poses.front();
        const double span = t_end - t_start;
        double u = span > 0.0 ? (t - t_start) / span : 1.0;
        u = std::clamp(u, 0.0, 1.0);
        const double s = u * static_cast<double>(poses.size() - 1);
        const std::size_t k = std::min(static_cast<std::size_t>(s), poses.size() - 2);
        return pose_lerp(poses[k], poses[k + 1], s - static_cast<double>(k));
    }
};

// Margin-aware reachability: throws WorkspaceViolationError naming the limb
// and G-Code line.
JointVector checked_ik(const MachineGeometry& geom, const PlatformPose& pose, int line,
                       double margin) {
    for (int limb = 1; limb <= kNumLimbs; ++limb) {
        if (limb_discriminant(geom, pose, limb) < margin * margin) {
            throw WorkspaceViolationError(line, pose, limb,
                                          WorkspaceViolationError::Reason::discriminant);
        }
    }
    JointVector q;
    try {
        q = inverse_kinematics(geom, pose);
    } catch (const UnreachableError& e) {
        throw WorkspaceViolationError(line, pose, e.limb,
                                      WorkspaceViolationError::Reason::discriminant);
    }
    for (int i = 0; i < kNumLimbs; ++i) {
        if (q[i] < geom.rail_travel[i].first + margin ||
            q[i] > geom.rail_travel[i].second - margin) {
            throw WorkspaceViolationError(line, pose, i + 1,
                                          WorkspaceViolationError::Reason::rail_limit);
        }
    }
    return q;
}

}  // namespace

JointTrajectory plan(const std::vector<gcode::MotionCommand>& commands,
                     const MachineGeometry& geom, const PlannerConfig& cfg) {
    cfg.validate();
    geom.validate();

    // Build time-parameterized segments, one per non-degenerate command.
    std::vector<Segment> segments;
    PlatformPose cursor = geom.home_pose;
    double t_total = 0.0;
    for (const gcode::MotionCommand& cmd : commands) {
        InterpolationResult interp = interpolate(cmd, cursor, cfg);
        if (interp.degenerate) continue;

        double length;
        if (cmd.kind == gcode::CommandKind::Arc) {
            length = arc_path_length(resolve_arc(cmd, cursor), cursor, cmd);
        } else {
            const double dp = (cmd.target.position - cursor.position).norm();
            const double dang = (cmd.target.angles - cursor.angles).norm();
            length = dp > kDegenerateTol ? dp : cfg.characteristic_radius * dang;
        }
        const double feed = cmd.kind == gcode::CommandKind::Rapid ? cfg.rapid_feed : cmd.feed;
        if (!(feed > 0.0)) throw MissingFeedError(cmd.source_line);

        Segment seg;
        seg.poses = std::move(interp.poses);
        seg.t_start = t_total;
        t_total += length / feed;
        seg.t_end = t_total;
        seg.source_line = cmd.source_line;
        segments.push_back(std::move(seg));
        cursor = cmd.target;
    }

    JointTrajectory traj;
    traj.geometry_fingerprint = geom.fingerprint();
    traj.sample_rate_hz = cfg.sample_rate;

    const double dt = 1.0 / cfg.sample_rate;
    const long grid_count = segments.empty() ? 0 : safe_ceil(t_total * cfg.sample_rate);

    std::vector<int> segment_of;  // per sample; -1 for a bare home sample
    segment_of.reserve(grid_count + 1);
    traj.samples.reserve(grid_count + 1);

    // Violations are reported in time (= program) order: grid samples as they
    // are emitted, and each command's exact target when the grid passes its
    // end time (the target itself may fall between grid points).
    std::size_t seg_idx = 0;
    for (long j = 0; j <= grid_count; ++j) {
        const double t = static_cast<double>(j) * dt;
        while (seg_idx + 1 < segments.size() && t > segments[seg_idx].t_end) {
            const Segment& done = segments[seg_idx];
            checked_ik(geom, done.poses.back(), done.source_line, cfg.workspace_margin);
            ++seg_idx;
        }

        TrajectorySample sample;
        sample.t = t;
        if (segments.empty()) {
            sample.pose = geom.home_pose;
            sample.source_line = 0;
            segment_of.push_back(-1);
        } else {
            const Segment& seg = segments[seg_idx];
            sample.pose = seg.at(t);
            sample.source_line = seg.source_line;
            segment_of.push_back(static_cast<int>(seg_idx));
        }
        sample.joints = checked_ik(geom, sample.pose, sample.source_line, cfg.workspace_margin);
        traj.samples.push_back(std::move(sample));
    }

    // Joint velocities: central differences inside a command's span,
    // one-sided at its first and last samples.
    const long n = static_cast<long>(traj.samples.size());
    for (long j = 0; j < n; ++j) {
        auto& s = traj.samples[j];
        const bool fwd = j + 1 < n && segment_of[j + 1] == segment_of[j];
        const bool bwd = j > 0 && segment_of[j - 1] == segment_of[j];
        if (fwd && bwd) {
            s.joint_velocity = (traj.samples[j + 1].joints - traj.samples[j - 1].joints) / (2.0 * dt);
        } else if (fwd) {
            s.joint_velocity = (traj.samples[j + 1].joints - s.joints) / dt;
        } else if (bwd) {
            s.joint_velocity = (s.joints - traj.samples[j - 1].joints) / dt;
        } else if (j + 1 < n && j > 0) {
            s.joint_velocity = (traj.samples[j + 1].joints - traj.samples[j - 1].joints) / (2.0 * dt);
        } else if (j + 1 < n) {
            s.joint_velocity = (traj.samples[j + 1].joints - s.joints) / dt;
        } else if (j > 0) {
            s.joint_velocity = (s.joints - traj.samples[j - 1].joints) / dt;
        }
    }
    return traj;
}

namespace {

double pose_component_error(const PlatformPose& a, const PlatformPose& b) {
    double err = (a.position - b.position).lpNorm<Eigen::Infinity>();
    for (int i = 0; i < 3; ++i) {
        err = std::max(err, std::abs(normalize_angle(a.angles[i] - b.angles[i])));
    }
    return err;
}

double closure_residual(const MachineGeometry& geom, const PlatformPose& pose,
                        const JointVector& q) {
    const Mat3 r = rotation_matrix(pose);
    double worst = 0.0;
    for (int i = 0; i < kNumLimbs; ++i) {
        Vec3 closure = pose.position + r * geom.platform_joint[i] - geom.rail_anchor[i];
        closure.x() -= q[i];
        worst = std::max(worst, std::abs(closure.norm() - geom.arm_length[i]));
    }
    return worst;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double u = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + u * ab)).norm();
}

struct IdealPath {
    gcode::CommandKind kind = gcode::CommandKind::Linear;
    Vec3 start{Vec3::Zero()};
    Vec3 end{Vec3::Zero()};
    Vec3 center{Vec3::Zero()};  // arcs
    double radius = 0.0;        // arcs, start radius

    double deviation(const Vec3& p) const {
        if (kind == gcode::CommandKind::Arc) {
            return std::abs(std::hypot(p.x() - center.x(), p.y() - center.y()) - radius);
        }
        return point_segment_distance(p, start, end);
    }
};

VerifyReport verify_impl(const JointTrajectory& traj, const MachineGeometry& geom,
                         const std::map<int, IdealPath>* paths) {
    VerifyReport report;
    report.sample_count = traj.samples.size();
    if (traj.samples.empty()) return report;
    report.duration = traj.samples.back().t;
    if (paths) report.max_path_deviation = 0.0;

    PlatformPose guess = geom.home_pose;
    for (std::size_t j = 0; j < traj.samples.size(); ++j) {
        const TrajectorySample& sample = traj.samples[j];
        FkResult fk;
        try {
            fk = forward_kinematics(geom, sample.joints, guess);
        } catch (const NoConvergenceError& e) {
            throw NoConvergenceError(e.iterations, e.residual, static_cast<long>(j));
        }
        guess = fk.pose;

        const double err = pose_component_error(fk.pose, sample.pose);
        if (err > report.max_pose_error) {
            report.max_pose_error = err;
            report.worst_sample = static_cast<long>(j);
        }
        report.max_closure_residual =
            std::max(report.max_closure_residual, closure_residual(geom, sample.pose, sample.joints));
        report.max_joint_speed = std::max(
            report.max_joint_speed, sample.joint_velocity.lpNorm<Eigen::Infinity>());

        if (paths && sample.source_line > 0) {
            const auto it = paths->find(sample.source_line);
            if (it != paths->end()) {
                report.max_path_deviation =
                    std::max(report.max_path_deviation, it->second.deviation(sample.pose.position));
            }
        }
    }
    return report;
}

}  // namespace

VerifyReport verify(const JointTrajectory& traj, const MachineGeometry& geom) {
    return verify_impl(traj, geom, nullptr);
}

VerifyReport verify(const JointTrajectory& traj, const MachineGeometry& geom,
                    const std::vector<gcode::MotionCommand>& commands,
                    const PlatformPose& program_start) {
    std::map<int, IdealPath> paths;
    PlatformPose cursor = program_start;
    for (const gcode::MotionCommand& cmd : commands) {
        IdealPath path;
        path.kind = cmd.kind;
        path.start = cursor.position;
        path.end = cmd.target.position;
        if (cmd.kind == gcode::CommandKind::Arc) {
            const ArcGeometry arc = resolve_arc(cmd, cursor);
            path.center = arc.center;
            path.radius = arc.r_start;
        }
        paths[cmd.source_line] = path;
        cursor = cmd.target;
    }
    return verify_impl(traj, geom, &paths);
}

std::string VerifyReport::to_string() const {
    std::ostringstream out;
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        return std::string(buf);
    };
    out << "samples: " << sample_count << "\n";
    out << "duration_s: " << num(duration) << "\n";
    out << "max_pose_error: " << num(max_pose_error) << "\n";
    out << "max_closure_residual_m: " << num(max_closure_residual) << "\n";
    out << "max_joint_speed_mps: " << num(max_joint_speed) << "\n";
    if (max_path_deviation >= 0.0) {
        out << "max_path_deviation_m: " << num(max_path_deviation) << "\n";
    }
    return out.str();
}

}  // namespace hexakine
