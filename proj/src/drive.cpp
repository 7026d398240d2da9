#include "hexakine/drive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hexakine/errors.hpp"
#include "hexakine/kinematics.hpp"

namespace hexakine::drive {

void DriveConfig::validate() const {
    if (dac_bits < 8 || dac_bits > 16) {
        throw ConfigError("drive: dac_bits must be within [8, 16]");
    }
    if (!(dac_fullscale > 0.0) || !(driver_fullscale > 0.0) || !(opamp_gain > 0.0)) {
        throw ConfigError("drive: voltages and gain must be positive");
    }
    if (!(velocity_fullscale > 0.0)) {
        throw ConfigError("drive: velocity_fullscale must be positive");
    }
    if (std::abs(dac_fullscale * opamp_gain - driver_fullscale) > 1e-9) {
        throw ConfigError("drive: dac_fullscale * opamp_gain must equal driver_fullscale");
    }
}

std::uint16_t quantize_voltage(double volts, const DriveConfig& cfg) {
    const double norm = std::clamp(volts / cfg.driver_fullscale, -1.0, 1.0);
    // Codes dequantize to (2c - max)/max * fullscale, so the nearest-code
    // grid sits at norm*max/2 + max/2. Halves round away from zero volts,
    // which puts 0 V on the upper mid-scale code.
    const double half = cfg.max_code() / 2.0;
    const double level = norm * half + half;
    const double rounded = norm >= 0.0 ? std::floor(level + 0.5) : std::ceil(level - 0.5);
    const long code = static_cast<long>(rounded);
    return static_cast<std::uint16_t>(std::clamp(code, 0L, static_cast<long>(cfg.max_code())));
}

double dequantize_code(std::uint16_t code, const DriveConfig& cfg) {
    return (static_cast<double>(code) / cfg.max_code() * 2.0 - 1.0) * cfg.driver_fullscale;
}

EmitResult emit(const JointTrajectory& traj, const DriveConfig& cfg) {
    cfg.validate();
    EmitResult result;
    result.frames.reserve(traj.samples.size());

    for (const TrajectorySample& sample : traj.samples) {
        DriveFrame frame;
        frame.t = sample.t;
        for (int k = 0; k < 6; ++k) {
            const double norm = sample.joint_velocity[k] / cfg.velocity_fullscale;
            if (norm < -1.0 || norm > 1.0) ++result.clamp_events;
            const double volts = std::clamp(norm, -1.0, 1.0) * cfg.driver_fullscale;
            frame.dac_code[k] = quantize_voltage(volts, cfg);
            frame.driver_voltage[k] = dequantize_code(frame.dac_code[k], cfg);
        }
        result.frames.push_back(frame);
    }
    return result;
}

JointTrajectory replay(const std::vector<DriveFrame>& frames, const MachineGeometry& geom,
                       const DriveConfig& cfg, const JointVector& initial,
                       double sample_rate_hz) {
    cfg.validate();
    if (!(sample_rate_hz > 0.0)) throw ConfigError("replay: sample rate must be positive");
    const double dt = 1.0 / sample_rate_hz;

    JointTrajectory traj;
    traj.geometry_fingerprint = geom.fingerprint();
    traj.sample_rate_hz = sample_rate_hz;
    traj.samples.reserve(frames.size());

    JointVector q = initial;
    PlatformPose guess = geom.home_pose;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const DriveFrame& frame = frames[i];
        Vec6 velocity;
        for (int k = 0; k < 6; ++k) {
            velocity[k] = dequantize_code(frame.dac_code[k], cfg) / cfg.driver_fullscale *
                          cfg.velocity_fullscale;
        }

        for (int k = 0; k < 6; ++k) {
            if (q[k] < geom.rail_travel[k].first || q[k] > geom.rail_travel[k].second) {
                throw RailOverrunError(static_cast<long>(i), k + 1);
            }
        }

        TrajectorySample sample;
        sample.t = frame.t;
        sample.joints = q;
        sample.joint_velocity = velocity;
        const FkResult fk = forward_kinematics(geom, q, guess);
        sample.pose = fk.pose;
        guess = fk.pose;
        traj.samples.push_back(std::move(sample));

        q += velocity * dt;  // explicit Euler to the next frame time
    }
    return traj;
}

namespace {

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u16le(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_f64le(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint16_t get_u16le(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

double get_f64le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

}  // namespace

void write_frames(const std::vector<DriveFrame>& frames, const DriveConfig& cfg,
                  double sample_rate_hz, const std::string& path) {
    std::string buf;
    buf.reserve(16 + 20 * frames.size());
    buf += "HXG1";
    put_u8(buf, static_cast<std::uint8_t>(cfg.dac_bits));
    put_u8(buf, 0);
    put_u8(buf, 0);
    put_u8(buf, 0);
    put_f64le(buf, sample_rate_hz);
    for (const DriveFrame& frame : frames) {
        put_f64le(buf, frame.t);
        for (int k = 0; k < 6; ++k) put_u16le(buf, frame.dac_code[k]);
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write frame file: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed: " + path);
}

FrameFile read_frames(const std::string& path, const DriveConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open frame file: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (data.size() < 16 || data.compare(0, 4, "HXG1") != 0) {
        throw IoError("frame file has bad header: " + path);
    }
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    FrameFile file;
    file.dac_bits = bytes[4];
    file.sample_rate_hz = get_f64le(bytes + 8);
    if ((data.size() - 16) % 20 != 0) {
        throw IoError("frame file is truncated: " + path);
    }
    if (file.dac_bits != cfg.dac_bits) {
        throw IoError("frame file uses " + std::to_string(file.dac_bits) +
                      "-bit codes, configuration expects " + std::to_string(cfg.dac_bits) +
                      ": " + path);
    }

    const std::size_t count = (data.size() - 16) / 20;
    file.frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const unsigned char* p = bytes + 16 + 20 * i;
        DriveFrame frame;
        frame.t = get_f64le(p);
        for (int k = 0; k < 6; ++k) {
            frame.dac_code[k] = get_u16le(p + 8 + 2 * k);
            if (frame.dac_code[k] > cfg.max_code()) {
                throw IoError("frame " + std::to_string(i) + " carries an out-of-range DAC code: " +
                              path);
            }
            frame.driver_voltage[k] = dequantize_code(frame.dac_code[k], cfg);
        }
        file.frames.push_back(frame);
    }
    return file;
}

void write_frames_csv(const std::vector<DriveFrame>& frames, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write frame CSV: " + path);
    out << "t,dac1,dac2,dac3,dac4,dac5,dac6,v1,v2,v3,v4,v5,v6\n";
    char buf[40];
    for (const DriveFrame& frame : frames) {
        std::snprintf(buf, sizeof(buf), "%.9g", frame.t);
        out << buf;
        for (int k = 0; k < 6; ++k) out << ',' << frame.dac_code[k];
        for (int k = 0; k < 6; ++k) {
            std::snprintf(buf, sizeof(buf), "%.9g", frame.driver_voltage[k]);
            out << ',' << buf;
        }
        out << "\n";
    }
}

}  // namespace hexakine::drive
