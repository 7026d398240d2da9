// Shared test fixtures and independent oracles. The oracles deliberately
// avoid the library's own code paths: the rotation oracle multiplies its own
// elemental matrices, and the IK oracle solves the closure equation by
// bisection instead of the closed form.
#ifndef HEXAKINE_TESTS_SUPPORT_HPP
#define HEXAKINE_TESTS_SUPPORT_HPP

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "hexakine/geometry.hpp"
#include "hexakine/types.hpp"

namespace hexatest {

using hexakine::MachineGeometry;
using hexakine::PlatformPose;
using hexakine::Vec3;
using hexakine::Vec6;

inline MachineGeometry reference_geometry() {
    return hexakine::load_geometry(std::string(HEXAKINE_TEST_DATA_DIR) + "/hexaglide.json");
}

// Reference workspace box around the home pose: positions +-(0.10, 0.06,
// 0.04) m, angles +-0.10 rad. Validated reachable with healthy margins.
struct WorkspaceBox {
    Vec3 pos_half{0.10, 0.06, 0.04};
    Vec3 ang_half{0.10, 0.10, 0.10};
};

inline PlatformPose random_pose_in_box(std::mt19937& rng, const PlatformPose& home,
                                       const WorkspaceBox& box = {}) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vec3 p, a;
    for (int i = 0; i < 3; ++i) {
        p[i] = home.position[i] + unit(rng) * box.pos_half[i];
        a[i] = home.angles[i] + unit(rng) * box.ang_half[i];
    }
    return {p, a};
}

// Independent rotation composition: multiplies the three elemental matrices
// entry by entry, no shared code with the library.
inline std::array<std::array<double, 3>, 3> rotation_oracle(double alpha, double beta,
                                                            double gamma) {
    const auto mat_mul = [](const std::array<std::array<double, 3>, 3>& m1,
                            const std::array<std::array<double, 3>, 3>& m2) {
        std::array<std::array<double, 3>, 3> out{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                for (int k = 0; k < 3; ++k) out[r][c] += m1[r][k] * m2[k][c];
        return out;
    };
    const std::array<std::array<double, 3>, 3> rx{{{1, 0, 0},
                                                   {0, std::cos(alpha), -std::sin(alpha)},
                                                   {0, std::sin(alpha), std::cos(alpha)}}};
    const std::array<std::array<double, 3>, 3> ry{{{std::cos(beta), 0, std::sin(beta)},
                                                   {0, 1, 0},
                                                   {-std::sin(beta), 0, std::cos(beta)}}};
    const std::array<std::array<double, 3>, 3> rz{{{std::cos(gamma), -std::sin(gamma), 0},
                                                   {std::sin(gamma), std::cos(gamma), 0},
                                                   {0, 0, 1}}};
    return mat_mul(rx, mat_mul(ry, rz));
}

// Solves ||P + R*B_i - q*xhat - S_i|| = l_i for q by bisection on the given
// branch. Returns nullopt when no root exists (pose unreachable for the limb).
inline std::optional<double> bisection_ik(const MachineGeometry& geom, const PlatformPose& pose,
                                          int limb, int branch) {
    const auto r = rotation_oracle(pose.angles[0], pose.angles[1], pose.angles[2]);
    const Vec3 bj = geom.platform_joint[limb - 1];
    Vec3 rot_b;
    for (int row = 0; row < 3; ++row) {
        rot_b[row] = r[row][0] * bj[0] + r[row][1] * bj[1] + r[row][2] * bj[2];
    }
    const Vec3 b = pose.position + rot_b - geom.rail_anchor[limb - 1];
    const double l = geom.arm_length[limb - 1];

    // f(q) = ||b - q*xhat|| - l, minimized at q = b_x where it equals
    // sqrt(b_y^2 + b_z^2) - l; a root on the requested side exists iff the
    // minimum is <= 0.
    const auto f = [&](double q) {
        return std::sqrt((b.x() - q) * (b.x() - q) + b.y() * b.y() + b.z() * b.z()) - l;
    };
    if (f(b.x()) > 0.0) return std::nullopt;

    double lo, hi;  // bracket with f(lo) and f(hi) of opposite sign
    if (branch < 0) {
        lo = b.x() - l - 1.0;  // f > 0
        hi = b.x();            // f <= 0
    } else {
        lo = b.x() + l + 1.0;
        hi = b.x();
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline std::optional<Vec6> bisection_ik_all(const MachineGeometry& geom,
                                            const PlatformPose& pose) {
    Vec6 q;
    for (int limb = 1; limb <= 6; ++limb) {
        const auto qi = bisection_ik(geom, pose, limb, limb <= 3 ? -1 : +1);
        if (!qi) return std::nullopt;
        q[limb - 1] = *qi;
    }
    return q;
}

// Minimal valid geometry with all frame offsets zero: every limb collapses
// onto the origin, which satisfies the frame constraints trivially.
inline MachineGeometry point_geometry(double arm_length = 0.5) {
    MachineGeometry geom;
    for (int i = 0; i < 6; ++i) {
        geom.rail_anchor[i] = Vec3::Zero();
        geom.platform_joint[i] = Vec3::Zero();
        geom.arm_length[i] = arm_length;
        geom.rail_travel[i] = {-10.0, 10.0};
    }
    geom.home_pose = PlatformPose(0, 0, arm_length * 0.8, 0, 0, 0);
    return geom;
}

}  // namespace hexatest

#endif  // HEXAKINE_TESTS_SUPPORT_HPP
