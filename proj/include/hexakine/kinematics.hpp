#ifndef HEXAKINE_KINEMATICS_HPP
#define HEXAKINE_KINEMATICS_HPP

#include <vector>

#include "hexakine/geometry.hpp"
#include "hexakine/types.hpp"

namespace hexakine {

/// Input to the Gruebler mobility computation.
struct MobilitySpec {
    int space_dof = 6;           // lambda, 3 (planar) or 6 (spatial)
    int link_count = 0;          // L, including the fixed base
    std::vector<int> joint_dof;  // f_i per joint, each in {1,2,3}

    int joint_count() const { return static_cast<int>(joint_dof.size()); }

    bool is_well_formed() const {
        if (space_dof != 3 && space_dof != 6) return false;
        if (link_count < 2) return false;
        for (int f : joint_dof) {
            if (f < 1 || f > 3) return false;
        }
        return true;
    }
};

/// F = lambda * (L - j - 1) + sum(f_i).
int mobility(const MobilitySpec& spec);

/// The Hexaglide: base + platform + 6 sliders + 6 arms = 14 links;
/// 6 prismatic + 6 spherical + 6 universal joints.
MobilitySpec hexaglide_mobility_spec();

/// R = Rx(alpha) * Ry(beta) * Rz(gamma): the platform rotates first about Z
/// by gamma, then about Y by beta, then about X by alpha.
Mat3 rotation_matrix(double alpha, double beta, double gamma);
Mat3 rotation_matrix(const PlatformPose& pose);

/// Limb closure vector before the slider displacement is subtracted:
/// b_i = P + R*B_i - S_i. Limb index is 1-based.
Vec3 limb_vector(const MachineGeometry& geom, const PlatformPose& pose, int limb);

/// Branch sign h_i: -1 for limbs 1..3, +1 for limbs 4..6 (1-based).
/// Fixed per limb so the mechanism stays in its assembly mode.
int branch_sign(int limb);

/// Closed-form inverse kinematics: q_i = b_ix + h_i * sqrt(l_i^2 - b_iy^2 - b_iz^2).
/// A discriminant of exactly zero (slider on the workspace boundary) is
/// accepted. Throws UnreachableError on the first limb whose discriminant is
/// negative; no partial result is returned.
JointVector inverse_kinematics(const MachineGeometry& geom, const PlatformPose& pose);

/// Signed distance-squared style reachability margin for one limb:
/// l_i^2 - b_iy^2 - b_iz^2. Negative means unreachable.
double limb_discriminant(const MachineGeometry& geom, const PlatformPose& pose, int limb);

/// dq/dchi by central finite differences of inverse_kinematics with step
/// 1e-6 per pose component. Throws UnreachableError if a probe pose leaves
/// the workspace and SingularPoseError if the condition number exceeds 1e8.
Mat6 ik_jacobian(const MachineGeometry& geom, const PlatformPose& pose);

struct FkResult {
    PlatformPose pose;
    int iterations = 0;
    double residual = 0.0;  // final infinity-norm of q_desired - IK(pose)
};

/// Newton-Raphson forward kinematics: iterates chi by solving
/// ik_jacobian(chi) * dchi = q_desired - IK(chi) until the residual
/// infinity-norm drops below 1e-9 m. A step that raises the residual or
/// leaves the workspace is halved, at most five times per iteration. If the
/// iterate still exits the workspace the solve restarts once from the
/// configured home pose before the UnreachableError propagates. Throws
/// NoConvergenceError after 100 iterations.
FkResult forward_kinematics(const MachineGeometry& geom, const JointVector& q_desired,
                            const PlatformPose& initial_guess);

namespace fk_limits {
constexpr double kTolerance = 1e-9;  // meters, infinity-norm on joint residual
constexpr int kMaxIterations = 100;
constexpr int kMaxStepHalvings = 5;
constexpr double kMaxCondition = 1e8;
constexpr double kJacobianStep = 1e-6;  // meters / radians
}  // namespace fk_limits

}  // namespace hexakine

#endif  // HEXAKINE_KINEMATICS_HPP
