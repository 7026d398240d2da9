#include "hexakine/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hexakine/errors.hpp"

namespace hexakine {

namespace {

constexpr double kConstraintTol = 1e-12;  // meters

void require(bool ok, const std::string& constraint, double value) {
    if (!ok) {
        std::ostringstream msg;
        msg << "geometry constraint violated: " << constraint << " (got " << value << ")";
        throw ConfigError(msg.str());
    }
}

// FNV-1a over the little-endian byte patterns of the doubles.
struct Fnv1a {
    std::uint64_t state = 1469598103934665603ULL;

    void feed(double v) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            state ^= (bits >> (8 * i)) & 0xffULL;
            state *= 1099511628211ULL;
        }
    }
};

}  // namespace

void MachineGeometry::validate() const {
    for (int i = 0; i < kNumLimbs; ++i) {
        if (!(arm_length[i] > 0.0)) {
            throw ConfigError("geometry constraint violated: arm_length[" +
                              std::to_string(i + 1) + "] must be positive");
        }
        if (!(rail_travel[i].first < rail_travel[i].second)) {
            throw ConfigError("geometry: rail_travel[" + std::to_string(i + 1) +
                              "] must satisfy min < max");
        }
        if (!rail_anchor[i].allFinite() || !platform_joint[i].allFinite()) {
            throw ConfigError("geometry: non-finite joint coordinates at limb " +
                              std::to_string(i + 1));
        }
    }
    if (!home_pose.is_finite()) throw ConfigError("geometry: non-finite home pose");

    // Frame conventions of the 42 -> 35 parameter reduction (1-based limbs).
    const auto& s2 = rail_anchor[1];
    const auto& s3 = rail_anchor[2];
    const auto& b2 = platform_joint[1];
    const auto& b3 = platform_joint[2];
    const auto& b5 = platform_joint[4];
    require(std::abs(s2.x()) <= kConstraintTol, "S2x = 0", s2.x());
    require(std::abs(s2.y()) <= kConstraintTol, "S2y = 0", s2.y());
    require(std::abs(s2.z()) <= kConstraintTol, "S2z = 0", s2.z());
    require(std::abs(s3.z()) <= kConstraintTol, "S3z = 0", s3.z());
    require(std::abs(b2.x()) <= kConstraintTol, "B2x = 0", b2.x());
    require(std::abs(b3.z()) <= kConstraintTol, "B3z = 0", b3.z());
    require(std::abs(b5.z()) <= kConstraintTol, "B5z = 0", b5.z());
    require(std::abs(b2.y() - b5.y()) <= kConstraintTol, "B2y = B5y", b2.y() - b5.y());
}

std::string MachineGeometry::fingerprint() const {
    Fnv1a hash;
    for (int i = 0; i < kNumLimbs; ++i) {
        for (int k = 0; k < 3; ++k) hash.feed(rail_anchor[i][k]);
        for (int k = 0; k < 3; ++k) hash.feed(platform_joint[i][k]);
        hash.feed(arm_length[i]);
        hash.feed(rail_travel[i].first);
        hash.feed(rail_travel[i].second);
    }
    for (int k = 0; k < 3; ++k) hash.feed(home_pose.position[k]);
    for (int k = 0; k < 3; ++k) hash.feed(home_pose.angles[k]);

    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash.state));
    return buf;
}

bool MachineGeometry::within_rail_travel(const JointVector& q, double margin) const {
    for (int i = 0; i < kNumLimbs; ++i) {
        if (q[i] < rail_travel[i].first + margin || q[i] > rail_travel[i].second - margin) {
            return false;
        }
    }
    return true;
}

namespace {

using nlohmann::json;

Vec3 read_vec3(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError("geometry: " + what + " must be an array of 3 numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

MachineGeometry parse_geometry(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("geometry: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("geometry: top level must be an object");

    for (const auto& [key, _] : doc.items()) {
        if (key != "rails" && key != "platform" && key != "arms" && key != "home_pose") {
            throw ConfigError("geometry: unknown key '" + key + "'");
        }
    }
    for (const char* key : {"rails", "platform", "arms", "home_pose"}) {
        if (!doc.contains(key)) throw ConfigError(std::string("geometry: missing key '") + key + "'");
    }

    const auto& rails = doc["rails"];
    const auto& platform = doc["platform"];
    const auto& arms = doc["arms"];
    const auto& home = doc["home_pose"];
    if (!rails.is_array() || rails.size() != kNumLimbs)
        throw ConfigError("geometry: 'rails' must be an array of 6 objects");
    if (!platform.is_array() || platform.size() != kNumLimbs)
        throw ConfigError("geometry: 'platform' must be an array of 6 objects");
    if (!arms.is_array() || arms.size() != kNumLimbs)
        throw ConfigError("geometry: 'arms' must be an array of 6 lengths");
    if (!home.is_array() || home.size() != 6)
        throw ConfigError("geometry: 'home_pose' must be an array of 6 numbers");

    MachineGeometry geom;
    try {
        for (int i = 0; i < kNumLimbs; ++i) {
            const auto& rail = rails[i];
            geom.rail_anchor[i] = read_vec3(rail.at("S"), "rails[" + std::to_string(i) + "].S");
            const auto& travel = rail.at("travel");
            if (!travel.is_array() || travel.size() != 2)
                throw ConfigError("geometry: rails[" + std::to_string(i) +
                                  "].travel must be [min,max]");
            geom.rail_travel[i] = {travel[0].get<double>(), travel[1].get<double>()};

            geom.platform_joint[i] =
                read_vec3(platform[i].at("B"), "platform[" + std::to_string(i) + "].B");
            geom.arm_length[i] = arms[i].get<double>();
        }
        geom.home_pose = PlatformPose(home[0].get<double>(), home[1].get<double>(),
                                      home[2].get<double>(), home[3].get<double>(),
                                      home[4].get<double>(), home[5].get<double>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("geometry: ") + e.what());
    }

    geom.validate();
    return geom;
}

MachineGeometry load_geometry(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open geometry file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_geometry(buf.str());
}

}  // namespace hexakine
