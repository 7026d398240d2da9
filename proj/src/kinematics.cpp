#include "hexakine/kinematics.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "hexakine/errors.hpp"

namespace hexakine {

namespace {

// Floating-point guard for "discriminant exactly zero": squaring b_y, b_z
// can push an analytically-zero discriminant a few ulp negative.
constexpr double kDiscriminantSlack = 1e-12;  // m^2

}  // namespace

int mobility(const MobilitySpec& spec) {
    int sum_f = 0;
    for (int f : spec.joint_dof) sum_f += f;
    return spec.space_dof * (spec.link_count - spec.joint_count() - 1) + sum_f;
}

MobilitySpec hexaglide_mobility_spec() {
    MobilitySpec spec;
    spec.space_dof = 6;
    spec.link_count = 14;
    spec.joint_dof.reserve(18);
    for (int i = 0; i < 6; ++i) spec.joint_dof.push_back(3);  // spherical, on sliders
    for (int i = 0; i < 6; ++i) spec.joint_dof.push_back(2);  // universal, on platform
    for (int i = 0; i < 6; ++i) spec.joint_dof.push_back(1);  // prismatic, on rails
    return spec;
}

Mat3 rotation_matrix(double alpha, double beta, double gamma) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    const double cg = std::cos(gamma), sg = std::sin(gamma);

    Mat3 rx, ry, rz;
    rx << 1, 0, 0,
          0, ca, -sa,
          0, sa, ca;
    ry << cb, 0, sb,
          0, 1, 0,
          -sb, 0, cb;
    rz << cg, -sg, 0,
          sg, cg, 0,
          0, 0, 1;
    return rx * ry * rz;
}

Mat3 rotation_matrix(const PlatformPose& pose) {
    return rotation_matrix(pose.angles[0], pose.angles[1], pose.angles[2]);
}

int branch_sign(int limb) {
    return limb <= 3 ? -1 : +1;
}

Vec3 limb_vector(const MachineGeometry& geom, const PlatformPose& pose, int limb) {
    assert(limb >= 1 && limb <= kNumLimbs);
    const Mat3 r = rotation_matrix(pose);
    return pose.position + r * geom.platform_joint[limb - 1] - geom.rail_anchor[limb - 1];
}

double limb_discriminant(const MachineGeometry& geom, const PlatformPose& pose, int limb) {
    const Vec3 b = limb_vector(geom, pose, limb);
    const double l = geom.arm_length[limb - 1];
    return l * l - b.y() * b.y() - b.z() * b.z();
}

JointVector inverse_kinematics(const MachineGeometry& geom, const PlatformPose& pose) {
    const Mat3 r = rotation_matrix(pose);
    JointVector q;
    for (int i = 0; i < kNumLimbs; ++i) {
        const Vec3 b = pose.position + r * geom.platform_joint[i] - geom.rail_anchor[i];
        const double l = geom.arm_length[i];
        double disc = l * l - b.y() * b.y() - b.z() * b.z();
        if (disc < 0.0) {
            if (disc < -kDiscriminantSlack) throw UnreachableError(i + 1, disc);
            disc = 0.0;  // boundary pose
        }
        q[i] = b.x() + branch_sign(i + 1) * std::sqrt(disc);
    }
    return q;
}

Mat6 ik_jacobian(const MachineGeometry& geom, const PlatformPose& pose) {
    const double h = fk_limits::kJacobianStep;
    Mat6 jac;
    Vec6 chi = pose.to_vector();
    for (int k = 0; k < 6; ++k) {
        Vec6 hi = chi, lo = chi;
        hi[k] += h;
        lo[k] -= h;
        const JointVector q_hi = inverse_kinematics(geom, PlatformPose::from_vector(hi));
        const JointVector q_lo = inverse_kinematics(geom, PlatformPose::from_vector(lo));
        jac.col(k) = (q_hi - q_lo) / (2.0 * h);
    }

    const Eigen::JacobiSVD<Mat6> svd(jac);
    const double smin = svd.singularValues()(5);
    const double smax = svd.singularValues()(0);
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (cond > fk_limits::kMaxCondition) throw SingularPoseError(cond);
    return jac;
}

namespace {

FkResult newton_solve(const MachineGeometry& geom, const JointVector& q_desired,
                      const PlatformPose& guess) {
    Vec6 chi = guess.to_vector();
    JointVector q = inverse_kinematics(geom, PlatformPose::from_vector(chi));
    double residual = (q_desired - q).lpNorm<Eigen::Infinity>();

    for (int iter = 0; iter < fk_limits::kMaxIterations; ++iter) {
        if (residual < fk_limits::kTolerance) {
            return {PlatformPose::from_vector(chi).normalized(), iter, residual};
        }

        const Mat6 jac = ik_jacobian(geom, PlatformPose::from_vector(chi));
        Vec6 step = jac.partialPivLu().solve(q_desired - q);

        // Damped step: halve while the step raises the residual or leaves
        // the workspace. A step out of the workspace counts as a raised
        // residual; if even the smallest damped step lands outside, hold
        // position and burn the iteration, so an infeasible target runs
        // into NoConvergence rather than a spurious Unreachable.
        for (int halving = 0; halving <= fk_limits::kMaxStepHalvings; ++halving) {
            const Vec6 trial = chi + step;
            try {
                const JointVector q_trial =
                    inverse_kinematics(geom, PlatformPose::from_vector(trial));
                const double trial_residual = (q_desired - q_trial).lpNorm<Eigen::Infinity>();
                if (trial_residual <= residual || halving == fk_limits::kMaxStepHalvings) {
                    chi = trial;
                    q = q_trial;
                    residual = trial_residual;
                    break;
                }
            } catch (const UnreachableError&) {
                if (halving == fk_limits::kMaxStepHalvings) break;
            }
            step *= 0.5;
        }
    }
    throw NoConvergenceError(fk_limits::kMaxIterations, residual);
}

}  // namespace

FkResult forward_kinematics(const MachineGeometry& geom, const JointVector& q_desired,
                            const PlatformPose& initial_guess) {
    if (!q_desired.allFinite()) throw Error("forward kinematics: non-finite joint vector");
    try {
        return newton_solve(geom, q_desired, initial_guess);
    } catch (const UnreachableError&) {
        // One retry from the configured home pose, then propagate.
        return newton_solve(geom, q_desired, geom.home_pose);
    }
}

}  // namespace hexakine
