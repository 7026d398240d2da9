#ifndef HEXAKINE_DRIVE_HPP
#define HEXAKINE_DRIVE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hexakine/geometry.hpp"
#include "hexakine/planner.hpp"

namespace hexakine::drive {

/// Models the electrical chain: a bipolar DAC (mid-scale = 0 V) amplified by
/// an op-amp stage to the driver's command voltage, commanding joint
/// velocity. The defaults reproduce a 3.3 V microcontroller DAC scaled to a
/// +-10 V velocity drive input.
struct DriveConfig {
    int dac_bits = 12;                 // in [8, 16]
    double dac_fullscale = 3.3;        // V
    double opamp_gain = 10.0 / 3.3;    // dimensionless
    double driver_fullscale = 10.0;    // V
    double velocity_fullscale = 0.5;   // m/s commanded at +-driver_fullscale

    void validate() const;  // throws ConfigError
    int code_count() const { return 1 << dac_bits; }
    int max_code() const { return code_count() - 1; }
    /// Volts per code step over the +-driver_fullscale span.
    double voltage_lsb() const { return 2.0 * driver_fullscale / max_code(); }
    /// Velocity change per code step.
    double velocity_lsb() const { return 2.0 * velocity_fullscale / max_code(); }
};

struct DriveFrame {
    double t = 0.0;
    std::array<std::uint16_t, 6> dac_code{};
    std::array<double, 6> driver_voltage{};  // dequantized command voltage
};

/// Maps a signed voltage to the nearest DAC code, rounding halves away from
/// zero, clamped to the code range.
std::uint16_t quantize_voltage(double volts, const DriveConfig& cfg);

/// Command voltage a DAC code produces after the op-amp stage.
double dequantize_code(std::uint16_t code, const DriveConfig& cfg);

struct EmitResult {
    std::vector<DriveFrame> frames;
    long clamp_events = 0;  // joint-samples whose velocity exceeded full scale
};

/// Converts joint velocities to drive command frames, one per trajectory
/// sample. Velocities beyond velocity_fullscale are clamped and counted,
/// never fatal. The trajectory must be uniformly sampled.
EmitResult emit(const JointTrajectory& traj, const DriveConfig& cfg);

/// Integrates dequantized velocity commands (explicit Euler at the frame
/// rate) back into slider positions, reconstructing a joint trajectory for
/// comparison with the source. Poses are recovered through forward
/// kinematics, warm-started sample to sample. Throws RailOverrunError if the
/// integration leaves a rail's travel interval.
JointTrajectory replay(const std::vector<DriveFrame>& frames, const MachineGeometry& geom,
                       const DriveConfig& cfg, const JointVector& initial, double sample_rate_hz);

/// Binary frame stream, little-endian. 16-byte header: magic "HXG1", u8
/// dac_bits, 3 reserved zero bytes, f64 sample rate in Hz. Each frame is 20
/// bytes: f64 t followed by six u16 DAC codes.
void write_frames(const std::vector<DriveFrame>& frames, const DriveConfig& cfg,
                  double sample_rate_hz, const std::string& path);

struct FrameFile {
    std::vector<DriveFrame> frames;  // voltages filled from codes via cfg
    int dac_bits = 0;
    double sample_rate_hz = 0.0;
};

FrameFile read_frames(const std::string& path, const DriveConfig& cfg);

/// Human-readable twin of the binary stream: t,dac1..dac6,v1..v6.
void write_frames_csv(const std::vector<DriveFrame>& frames, const std::string& path);

}  // namespace hexakine::drive

#endif  // HEXAKINE_DRIVE_HPP
