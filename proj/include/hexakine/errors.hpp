#ifndef HEXAKINE_ERRORS_HPP
#define HEXAKINE_ERRORS_HPP

#include <stdexcept>
#include <string>

#include "hexakine/types.hpp"

namespace hexakine {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Pose outside the workspace: a limb's discriminant went negative.
class UnreachableError : public Error {
public:
    int limb;             // 1-based limb index
    double discriminant;  // l^2 - b_y^2 - b_z^2, negative

    UnreachableError(int limb_, double disc_)
        : Error("limb " + std::to_string(limb_) +
                " unreachable, discriminant " + std::to_string(disc_)),
          limb(limb_),
          discriminant(disc_) {}
};

/// Jacobian condition number exceeded the singularity guard.
class SingularPoseError : public Error {
public:
    double condition;

    explicit SingularPoseError(double cond)
        : Error("pose is numerically singular, jacobian condition " + std::to_string(cond)),
          condition(cond) {}
};

/// Newton-Raphson forward kinematics failed to converge.
class NoConvergenceError : public Error {
public:
    int iterations;
    double residual;
    long sample_index;  // -1 unless raised while replaying a trajectory

    NoConvergenceError(int iters, double res, long sample = -1)
        : Error("forward kinematics did not converge after " + std::to_string(iters) +
                " iterations, residual " + std::to_string(res) +
                (sample >= 0 ? " at sample " + std::to_string(sample) : "")),
          iterations(iters),
          residual(res),
          sample_index(sample) {}
};

/// Geometry or drive configuration file rejected.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Base class for G-Code frontend errors; always carries the source line.
class GCodeError : public Error {
public:
    int line;

    GCodeError(int line_, const std::string& msg)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

class LexError : public GCodeError {
public:
    int column;
    std::string fragment;

    LexError(int line_, int column_, const std::string& fragment_)
        : GCodeError(line_, "malformed input at column " + std::to_string(column_) +
                                ": '" + fragment_ + "'"),
          column(column_),
          fragment(fragment_) {}
};

class UnsupportedCodeError : public GCodeError {
public:
    std::string word;

    UnsupportedCodeError(int line_, const std::string& word_, const std::string& detail = "unsupported")
        : GCodeError(line_, word_ + " " + detail), word(word_) {}
};

class MissingFeedError : public GCodeError {
public:
    explicit MissingFeedError(int line_)
        : GCodeError(line_, "feed motion before any F word") {}
};

class BadArcError : public GCodeError {
public:
    double radius_mismatch;  // mm

    BadArcError(int line_, double mismatch_mm, const std::string& detail)
        : GCodeError(line_, "bad arc: " + detail), radius_mismatch(mismatch_mm) {}
};

/// Planned path leaves the reachable workspace or violates rail limits.
class WorkspaceViolationError : public Error {
public:
    enum class Reason { discriminant, rail_limit };

    int line;
    PlatformPose pose;
    int limb;
    Reason reason;

    WorkspaceViolationError(int line_, const PlatformPose& pose_, int limb_, Reason reason_)
        : Error("line " + std::to_string(line_) + ": workspace violation at limb " +
                std::to_string(limb_) +
                (reason_ == Reason::discriminant ? " (unreachable pose)" : " (rail limit)")),
          line(line_),
          pose(pose_),
          limb(limb_),
          reason(reason_) {}
};

/// Replay integration left the rail travel interval.
class RailOverrunError : public Error {
public:
    long frame_index;
    int joint;

    RailOverrunError(long frame_, int joint_)
        : Error("rail overrun at frame " + std::to_string(frame_) + ", joint " +
                std::to_string(joint_)),
          frame_index(frame_),
          joint(joint_) {}
};

/// File could not be read, written, or parsed as the expected format.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace hexakine

#endif  // HEXAKINE_ERRORS_HPP
