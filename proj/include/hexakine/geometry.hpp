#ifndef HEXAKINE_GEOMETRY_HPP
#define HEXAKINE_GEOMETRY_HPP

#include <array>
#include <string>
#include <utility>

#include "hexakine/types.hpp"

namespace hexakine {

/// The 42-parameter Hexaglide machine description: rail anchor points S_i,
/// platform joint points B_i (local frame), and arm lengths l_i, plus the
/// slider travel limits and the configured home pose.
///
/// The frame conventions pin seven of the 42 scalars to zero (S2 at the
/// origin, S3 in the base plane, B2x/B3z/B5z zero) and tie B2y to B5y,
/// leaving 35 free scalars. validate() enforces these within 1e-12.
struct MachineGeometry {
    std::array<Vec3, kNumLimbs> rail_anchor{};        // S_i, meters
    std::array<Vec3, kNumLimbs> platform_joint{};     // B_i, meters, local frame
    std::array<double, kNumLimbs> arm_length{};       // l_i, meters
    std::array<std::pair<double, double>, kNumLimbs> rail_travel{};  // [q_min, q_max]
    PlatformPose home_pose;

    /// Throws ConfigError naming the violated constraint if any invariant fails.
    void validate() const;

    /// Scalars not pinned to zero by the frame conventions: 42 - 7 = 35.
    /// (The B2y = B5y tie relates two of the remaining scalars but pins
    /// neither, so it does not reduce this count.)
    static constexpr int free_parameter_count() { return 35; }

    /// Content hash over all geometry scalars (FNV-1a over the exact byte
    /// patterns), as a 16-hex-digit string. Identical geometries hash equal.
    std::string fingerprint() const;

    bool within_rail_travel(const JointVector& q, double margin = 0.0) const;
};

/// Parses a geometry configuration JSON document. Expected shape:
///   { "rails":    [ {"S":[x,y,z], "travel":[min,max]} x6 ],
///     "platform": [ {"B":[x,y,z]} x6 ],
///     "arms":     [ l1..l6 ],
///     "home_pose": [px,py,pz,alpha,beta,gamma] }
/// All values SI (meters, radians). Throws ConfigError on schema or
/// constraint violations, naming the offending key or constraint.
MachineGeometry parse_geometry(const std::string& json_text);

/// Loads and validates a geometry file from disk.
MachineGeometry load_geometry(const std::string& path);

}  // namespace hexakine

#endif  // HEXAKINE_GEOMETRY_HPP
