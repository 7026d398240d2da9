#ifndef HEXAKINE_TYPES_HPP
#define HEXAKINE_TYPES_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>

namespace hexakine {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Slider positions q1..q6 along the rails, meters, signed from each rail anchor.
using JointVector = Vec6;

constexpr int kNumLimbs = 6;
constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

/// Pose of the moving platform: position of the local frame origin plus the
/// three rotation angles (about base X, Y, Z). Angles in radians, (-pi, pi].
struct PlatformPose {
    Vec3 position{Vec3::Zero()};
    Vec3 angles{Vec3::Zero()};  // alpha, beta, gamma

    PlatformPose() = default;
    PlatformPose(const Vec3& p, const Vec3& a) : position(p), angles(a) {}
    PlatformPose(double px, double py, double pz, double alpha, double beta, double gamma)
        : position(px, py, pz), angles(alpha, beta, gamma) {}

    static PlatformPose from_vector(const Vec6& chi) {
        return {chi.head<3>(), chi.tail<3>()};
    }

    Vec6 to_vector() const {
        Vec6 chi;
        chi << position, angles;
        return chi;
    }

    PlatformPose normalized() const {
        PlatformPose p = *this;
        for (int i = 0; i < 3; ++i) p.angles[i] = normalize_angle(p.angles[i]);
        return p;
    }

    bool is_finite() const {
        return position.allFinite() && angles.allFinite();
    }
};

}  // namespace hexakine

#endif  // HEXAKINE_TYPES_HPP
