#include <doctest.h>

#include <cmath>
#include <random>

#include "hexakine/errors.hpp"
#include "hexakine/kinematics.hpp"
#include "support.hpp"

using namespace hexakine;
using hexatest::bisection_ik;
using hexatest::bisection_ik_all;
using hexatest::point_geometry;
using hexatest::random_pose_in_box;
using hexatest::reference_geometry;
using hexatest::rotation_oracle;

TEST_CASE("rotation_matrix: zero angles give the identity") {
    const Mat3 r = rotation_matrix(0.0, 0.0, 0.0);
    CHECK((r - Mat3::Identity()).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("rotation_matrix: pure X rotation by pi/2") {
    const Mat3 r = rotation_matrix(kPi / 2, 0.0, 0.0);
    const double expected[3][3] = {{1, 0, 0}, {0, 0, -1}, {0, 1, 0}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(r(i, j) - expected[i][j]) < 1e-12);
}

TEST_CASE("rotation_matrix: matches the independent product oracle") {
    const Mat3 r = rotation_matrix(0.1, 0.2, 0.3);
    const auto expected = rotation_oracle(0.1, 0.2, 0.3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(r(i, j) - expected[i][j]) < 1e-14);
}

TEST_CASE("rotation_matrix: orthonormal with unit determinant for random angles") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 200; ++trial) {
        const Mat3 r = rotation_matrix(angle(rng), angle(rng), angle(rng));
        CHECK((r.transpose() * r - Mat3::Identity()).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK(std::abs(r.determinant() - 1.0) < 1e-12);
    }
}

TEST_CASE("mobility: Hexaglide has six degrees of freedom") {
    const MobilitySpec spec = hexaglide_mobility_spec();
    CHECK(spec.is_well_formed());
    CHECK(spec.link_count == 14);
    CHECK(spec.joint_count() == 18);
    CHECK(mobility(spec) == 6);

    MobilitySpec bad = spec;
    bad.space_dof = 4;
    CHECK(!bad.is_well_formed());
    bad = spec;
    bad.joint_dof.push_back(4);
    CHECK(!bad.is_well_formed());
}

TEST_CASE("mobility: textbook cases") {
    MobilitySpec hinge{6, 2, {1}};
    CHECK(mobility(hinge) == 1);
    MobilitySpec four_bar{3, 4, {1, 1, 1, 1}};
    CHECK(mobility(four_bar) == 1);
}

TEST_CASE("limb_vector: all frame offsets zero") {
    const MachineGeometry geom = point_geometry();
    const PlatformPose pose(0.0, 0.3, 0.4, 0.0, 0.0, 0.0);
    for (int limb = 1; limb <= 6; ++limb) {
        const Vec3 b = limb_vector(geom, pose, limb);
        CHECK(b.isApprox(Vec3(0.0, 0.3, 0.4), 0.0));
    }
}

TEST_CASE("limb_vector: closure collapses when P sits on the rail anchor") {
    MachineGeometry geom = point_geometry();
    geom.rail_anchor[3] = Vec3(0.1, -0.2, 0.05);  // limb 4; frame constraints untouched
    const PlatformPose pose(0.1, -0.2, 0.05, 0.0, 0.0, 0.0);
    CHECK(limb_vector(geom, pose, 4).norm() == 0.0);
}

TEST_CASE("limb_vector: randomized poses match the hand-rolled assembly") {
    const MachineGeometry geom = reference_geometry();
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const PlatformPose pose = random_pose_in_box(rng, geom.home_pose);
        const auto r = rotation_oracle(pose.angles[0], pose.angles[1], pose.angles[2]);
        for (int limb = 1; limb <= 6; ++limb) {
            const Vec3& bj = geom.platform_joint[limb - 1];
            Vec3 expected;
            for (int row = 0; row < 3; ++row) {
                expected[row] = pose.position[row] + r[row][0] * bj[0] + r[row][1] * bj[1] +
                                r[row][2] * bj[2] - geom.rail_anchor[limb - 1][row];
            }
            CHECK((limb_vector(geom, pose, limb) - expected).norm() < 1e-14);
        }
    }
}

TEST_CASE("inverse_kinematics: 3-4-5 boundary pose lands exactly on q = 0") {
    const MachineGeometry geom = point_geometry(0.5);
    const PlatformPose pose(0.0, 0.3, 0.4, 0.0, 0.0, 0.0);  // discriminant exactly zero
    const JointVector q = inverse_kinematics(geom, pose);
    for (int i = 0; i < 6; ++i) CHECK(q[i] == 0.0);
}

TEST_CASE("inverse_kinematics: explicit branch sign on limb 2") {
    const MachineGeometry geom = point_geometry(0.5);
    const PlatformPose pose(0.1, 0.3, 0.0, 0.0, 0.0, 0.0);
    const JointVector q = inverse_kinematics(geom, pose);
    CHECK(q[1] == doctest::Approx(-0.3).epsilon(1e-12));  // 0.1 - sqrt(0.25 - 0.09)
    CHECK(q[4] == doctest::Approx(0.5).epsilon(1e-12));   // + branch mirror
}

TEST_CASE("inverse_kinematics: negative discriminant raises Unreachable") {
    const MachineGeometry geom = point_geometry(0.5);
    const PlatformPose pose(0.0, 0.6, 0.0, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS((void)inverse_kinematics(geom, pose), UnreachableError);
    try {
        (void)inverse_kinematics(geom, pose);
    } catch (const UnreachableError& e) {
        CHECK(e.limb == 1);
        CHECK(e.discriminant < 0.0);
    }
}

TEST_CASE("inverse_kinematics: home pose matches the bisection oracle") {
    const MachineGeometry geom = reference_geometry();
    const JointVector q = inverse_kinematics(geom, geom.home_pose);
    const auto oracle = bisection_ik_all(geom, geom.home_pose);
    REQUIRE(oracle.has_value());
    CHECK((q - *oracle).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("inverse_kinematics: closure residual, branch invariant, oracle agreement") {
    const MachineGeometry geom = reference_geometry();
    std::mt19937 rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const PlatformPose pose = random_pose_in_box(rng, geom.home_pose);
        const JointVector q = inverse_kinematics(geom, pose);
        const Mat3 r = rotation_matrix(pose);
        for (int i = 0; i < 6; ++i) {
            Vec3 closure = pose.position + r * geom.platform_joint[i] - geom.rail_anchor[i];
            const double bx = closure.x();
            closure.x() -= q[i];
            CHECK(std::abs(closure.norm() - geom.arm_length[i]) < 1e-9);
            if (i < 3) {
                CHECK(q[i] <= bx);
            } else {
                CHECK(q[i] >= bx);
            }
        }
        const auto oracle = bisection_ik_all(geom, pose);
        REQUIRE(oracle.has_value());
        CHECK((q - *oracle).lpNorm<Eigen::Infinity>() < 1e-9);
    }
}

TEST_CASE("inverse_kinematics: bit-identical across repeated evaluation") {
    const MachineGeometry geom = reference_geometry();
    std::mt19937 rng(29);
    const PlatformPose pose = random_pose_in_box(rng, geom.home_pose);
    const JointVector q1 = inverse_kinematics(geom, pose);
    const JointVector q2 = inverse_kinematics(geom, pose);
    for (int i = 0; i < 6; ++i) CHECK(q1[i] == q2[i]);
}

TEST_CASE("ik_jacobian: translation along the rails moves every slider equally") {
    const MachineGeometry geom = reference_geometry();
    const Mat6 jac = ik_jacobian(geom, geom.home_pose);
    for (int i = 0; i < 6; ++i) CHECK(jac(i, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ik_jacobian: step-halving consistency against a test-side recomputation") {
    const MachineGeometry geom = reference_geometry();
    std::mt19937 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const PlatformPose pose = random_pose_in_box(rng, geom.home_pose);
        const Mat6 jac = ik_jacobian(geom, pose);

        const double h = 1e-7;  // half the library's step
        Mat6 recomputed;
        const Vec6 chi = pose.to_vector();
        for (int k = 0; k < 6; ++k) {
            Vec6 hi = chi, lo = chi;
            hi[k] += h;
            lo[k] -= h;
            recomputed.col(k) =
                (inverse_kinematics(geom, PlatformPose::from_vector(hi)) -
                 inverse_kinematics(geom, PlatformPose::from_vector(lo))) /
                (2.0 * h);
        }
        const double scale = std::max(1.0, jac.lpNorm<Eigen::Infinity>());
        CHECK((jac - recomputed).lpNorm<Eigen::Infinity>() / scale < 1e-4);
    }
}

TEST_CASE("ik_jacobian: directional derivatives along 20 random unit directions") {
    const MachineGeometry geom = reference_geometry();
    std::mt19937 rng(37);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const PlatformPose pose = random_pose_in_box(rng, geom.home_pose);
    const Mat6 jac = ik_jacobian(geom, pose);
    const Vec6 chi = pose.to_vector();

    for (int trial = 0; trial < 20; ++trial) {
        Vec6 dir;
        for (int k = 0; k < 6; ++k) dir[k] = gauss(rng);
        dir.normalize();
        const double h = 1e-7;
        const Vec6 fd = (inverse_kinematics(geom, PlatformPose::from_vector(chi + h * dir)) -
                         inverse_kinematics(geom, PlatformPose::from_vector(chi - h * dir))) /
                        (2.0 * h);
        const Vec6 predicted = jac * dir;
        const double scale = std::max(1.0, fd.lpNorm<Eigen::Infinity>());
        CHECK((predicted - fd).lpNorm<Eigen::Infinity>() / scale < 1e-4);
    }
}

TEST_CASE("ik_jacobian: mirrored geometry flips the sign pattern") {
    const MachineGeometry geom = reference_geometry();
    MachineGeometry mirrored = geom;
    for (int i = 0; i < 6; ++i) {
        mirrored.rail_anchor[i].y() *= -1.0;
        mirrored.platform_joint[i].y() *= -1.0;
    }
    mirrored.validate();  // the constraints survive the reflection

    std::mt19937 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const PlatformPose pose = random_pose_in_box(rng, geom.home_pose);
        const PlatformPose flipped({pose.position.x(), -pose.position.y(), pose.position.z()},
                                   {-pose.angles[0], pose.angles[1], -pose.angles[2]});
        const Mat6 jac = ik_jacobian(geom, pose);
        const Mat6 jac_mirror = ik_jacobian(mirrored, flipped);
        const double sign[6] = {1, -1, 1, -1, 1, -1};
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 6; ++k)
                CHECK(jac_mirror(i, k) == doctest::Approx(sign[k] * jac(i, k)).epsilon(1e-6));
    }
}

TEST_CASE("ik_jacobian: degenerate geometry is flagged as singular") {
    // All limbs coincide, so the jacobian is rank deficient.
    const MachineGeometry geom = point_geometry();
    CHECK_THROWS_AS((void)ik_jacobian(geom, geom.home_pose), SingularPoseError);
}

TEST_CASE("forward_kinematics: the home pose is a fixed point") {
    const MachineGeometry geom = reference_geometry();
    const JointVector q = inverse_kinematics(geom, geom.home_pose);
    const FkResult fk = forward_kinematics(geom, q, geom.home_pose);
    CHECK(fk.iterations <= 1);
    CHECK((fk.pose.to_vector() - geom.home_pose.to_vector()).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("forward_kinematics: FK(IK(chi)) recovers chi over the workspace box") {
    const MachineGeometry geom = reference_geometry();
    std::mt19937 rng(43);
    for (int trial = 0; trial < 1000; ++trial) {
        const PlatformPose pose = random_pose_in_box(rng, geom.home_pose);
        const JointVector q = inverse_kinematics(geom, pose);
        const FkResult fk = forward_kinematics(geom, q, geom.home_pose);
        CHECK((fk.pose.to_vector() - pose.to_vector()).lpNorm<Eigen::Infinity>() < 1e-7);
    }
}

TEST_CASE("forward_kinematics: warm start from the previous pose converges fast") {
    const MachineGeometry geom = reference_geometry();
    const PlatformPose nearby(0.001, 0.0005, 0.2501, 0.001, 0.0, 0.0);
    const JointVector q = inverse_kinematics(geom, nearby);
    const FkResult fk = forward_kinematics(geom, q, geom.home_pose);
    CHECK(fk.iterations <= 3);
    CHECK((fk.pose.to_vector() - nearby.to_vector()).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("forward_kinematics: physically inconsistent joints fail to converge") {
    const MachineGeometry geom = reference_geometry();
    JointVector q = inverse_kinematics(geom, geom.home_pose);
    q[0] += 1.0;  // one slider displaced a meter beyond any reachable closure

    // Confirm with the bisection oracle that no pose in (or near) the box
    // reproduces the perturbed vector.
    std::mt19937 rng(47);
    hexatest::WorkspaceBox wide;
    wide.pos_half *= 2.0;
    wide.ang_half *= 2.0;
    double best = 1e9;
    for (int trial = 0; trial < 2000; ++trial) {
        const PlatformPose pose = random_pose_in_box(rng, geom.home_pose, wide);
        const auto oracle = bisection_ik_all(geom, pose);
        if (oracle) best = std::min(best, (*oracle - q).lpNorm<Eigen::Infinity>());
    }
    CHECK(best > 0.4);

    CHECK_THROWS_AS((void)forward_kinematics(geom, q, geom.home_pose), NoConvergenceError);
}

TEST_CASE("forward_kinematics: unreachable guess restarts from home") {
    const MachineGeometry geom = reference_geometry();
    const JointVector q = inverse_kinematics(geom, geom.home_pose);
    const PlatformPose bad_guess(0.0, 0.0, 2.0, 0.0, 0.0, 0.0);
    const FkResult fk = forward_kinematics(geom, q, bad_guess);
    CHECK((fk.pose.to_vector() - geom.home_pose.to_vector()).lpNorm<Eigen::Infinity>() < 1e-7);
}
