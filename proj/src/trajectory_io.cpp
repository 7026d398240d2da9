#include "hexakine/trajectory_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hexakine/errors.hpp"

namespace hexakine {

namespace {

constexpr const char* kHeader =
    "t,px,py,pz,alpha,beta,gamma,q1,q2,q3,q4,q5,q6,qd1,qd2,qd3,qd4,qd5,qd6,line";

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string sidecar_path(const std::string& trajectory_path) {
    return trajectory_path + ".json";
}

void write_trajectory(const JointTrajectory& traj, const PlannerConfig& cfg,
                      const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write trajectory file: " + path);

    out << kHeader << "\n";
    for (const TrajectorySample& s : traj.samples) {
        out << format_number(s.t);
        for (int k = 0; k < 3; ++k) out << ',' << format_number(s.pose.position[k]);
        for (int k = 0; k < 3; ++k) out << ',' << format_number(s.pose.angles[k]);
        for (int k = 0; k < 6; ++k) out << ',' << format_number(s.joints[k]);
        for (int k = 0; k < 6; ++k) out << ',' << format_number(s.joint_velocity[k]);
        out << ',' << s.source_line << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
    out.close();

    nlohmann::json sidecar;
    sidecar["format"] = "hexakine-trajectory";
    sidecar["version"] = 1;
    sidecar["geometry_fingerprint"] = traj.geometry_fingerprint;
    sidecar["sample_rate_hz"] = traj.sample_rate_hz;
    sidecar["sample_count"] = traj.samples.size();
    sidecar["duration_s"] = traj.samples.empty() ? 0.0 : traj.samples.back().t;
    sidecar["planner_config"] = {
        {"max_cartesian_step", cfg.max_cartesian_step},
        {"arc_chord_tolerance", cfg.arc_chord_tolerance},
        {"rapid_feed", cfg.rapid_feed},
        {"workspace_margin", cfg.workspace_margin},
        {"sample_rate", cfg.sample_rate},
        {"characteristic_radius", cfg.characteristic_radius},
    };

    std::ofstream meta(sidecar_path(path), std::ios::binary);
    if (!meta) throw IoError("cannot write trajectory sidecar: " + sidecar_path(path));
    meta << sidecar.dump(2) << "\n";
}

JointTrajectory read_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trajectory file: " + path);

    JointTrajectory traj;
    std::string line;
    if (!std::getline(in, line) || (line != kHeader && line != std::string(kHeader) + "\r")) {
        throw IoError("trajectory file has unexpected header: " + path);
    }

    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::array<double, 19> values{};
        int source_line = 0;
        std::size_t pos = 0;
        for (int field = 0; field < 20; ++field) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell = line.substr(pos, comma == std::string::npos
                                                          ? std::string::npos
                                                          : comma - pos);
            if (cell.empty()) {
                throw IoError(path + ":" + std::to_string(line_no) + ": empty field");
            }
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0' || !std::isfinite(v)) {
                throw IoError(path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
            if (field < 19) {
                values[field] = v;
            } else {
                source_line = static_cast<int>(v);
            }
            if (comma == std::string::npos) {
                if (field != 19) {
                    throw IoError(path + ":" + std::to_string(line_no) + ": expected 20 fields");
                }
                pos = line.size();
            } else {
                if (field == 19) {
                    throw IoError(path + ":" + std::to_string(line_no) + ": too many fields");
                }
                pos = comma + 1;
            }
        }

        TrajectorySample s;
        s.t = values[0];
        s.pose.position = {values[1], values[2], values[3]};
        s.pose.angles = {values[4], values[5], values[6]};
        for (int k = 0; k < 6; ++k) s.joints[k] = values[7 + k];
        for (int k = 0; k < 6; ++k) s.joint_velocity[k] = values[13 + k];
        s.source_line = source_line;
        if (!traj.samples.empty() && !(s.t > traj.samples.back().t)) {
            throw IoError(path + ":" + std::to_string(line_no) + ": time not increasing");
        }
        traj.samples.push_back(s);
    }

    std::ifstream meta(sidecar_path(path), std::ios::binary);
    if (!meta) throw IoError("missing trajectory sidecar: " + sidecar_path(path));
    nlohmann::json sidecar;
    try {
        meta >> sidecar;
        traj.geometry_fingerprint = sidecar.at("geometry_fingerprint").get<std::string>();
        traj.sample_rate_hz = sidecar.at("sample_rate_hz").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad trajectory sidecar " + sidecar_path(path) + ": " + e.what());
    }
    return traj;
}

}  // namespace hexakine
