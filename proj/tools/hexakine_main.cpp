// hexakine: Hexaglide kinematics and G-Code trajectory compiler, batch CLI.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hexakine/drive.hpp"
#include "hexakine/errors.hpp"
#include "hexakine/gcode.hpp"
#include "hexakine/geometry.hpp"
#include "hexakine/kinematics.hpp"
#include "hexakine/planner.hpp"
#include "hexakine/svg_plot.hpp"
#include "hexakine/trajectory_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitWorkspace = 4;
constexpr int kExitNumerical = 5;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::vector<double> parse_csv_numbers(const std::string& text, std::size_t expected,
                                      const std::string& what) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0') {
            throw UsageError(what + ": bad number '" + cell + "'");
        }
        values.push_back(v);
    }
    if (values.size() != expected) {
        throw UsageError(what + ": expected " + std::to_string(expected) + " comma-separated values");
    }
    return values;
}

struct Options {
    std::string geometry_path;
    std::vector<std::string> overrides;  // key=value
    hexakine::PlannerConfig planner;
    hexakine::drive::DriveConfig drive;

    void apply_overrides() {
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw UsageError("--set expects key=value, got '" + kv + "'");
            }
            const std::string key = kv.substr(0, eq);
            char* end = nullptr;
            const double value = std::strtod(kv.c_str() + eq + 1, &end);
            if (end == kv.c_str() + eq + 1 || *end != '\0') {
                throw UsageError("--set " + key + ": bad number '" + kv.substr(eq + 1) + "'");
            }
            if (key == "max_cartesian_step") planner.max_cartesian_step = value;
            else if (key == "arc_chord_tolerance") planner.arc_chord_tolerance = value;
            else if (key == "rapid_feed") planner.rapid_feed = value;
            else if (key == "workspace_margin") planner.workspace_margin = value;
            else if (key == "sample_rate") planner.sample_rate = value;
            else if (key == "characteristic_radius") planner.characteristic_radius = value;
            else if (key == "dac_bits") drive.dac_bits = static_cast<int>(value);
            else if (key == "dac_fullscale") drive.dac_fullscale = value;
            else if (key == "opamp_gain") drive.opamp_gain = value;
            else if (key == "driver_fullscale") drive.driver_fullscale = value;
            else if (key == "velocity_fullscale") drive.velocity_fullscale = value;
            else throw UsageError("--set: unknown key '" + key + "'");
        }
    }

    hexakine::MachineGeometry load_geometry_or_fail() const {
        std::string path = geometry_path;
        if (path.empty()) {
            if (const char* env = std::getenv("HEXAKINE_GEOMETRY")) path = env;
        }
        if (path.empty()) {
            throw UsageError("no geometry file: pass --geometry or set HEXAKINE_GEOMETRY");
        }
        return hexakine::load_geometry(path);
    }
};

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string replace_extension(const std::string& path, const std::string& ext) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + ext;
    }
    return path.substr(0, dot) + ext;
}

void check_fingerprint(const hexakine::JointTrajectory& traj,
                       const hexakine::MachineGeometry& geom) {
    if (traj.geometry_fingerprint != geom.fingerprint()) {
        throw UsageError("trajectory was planned for a different geometry (fingerprint " +
                         traj.geometry_fingerprint + ", geometry " + geom.fingerprint() + ")");
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Hexaglide kinematics and G-Code trajectory compiler"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::simple);

    Options opt;
    app.add_option("-g,--geometry", opt.geometry_path,
                   "Geometry JSON file (fallback: HEXAKINE_GEOMETRY env var)");
    app.add_option("--set", opt.overrides,
                   "Override a planner/drive parameter, key=value (repeatable). Keys: "
                   "max_cartesian_step arc_chord_tolerance rapid_feed workspace_margin "
                   "sample_rate characteristic_radius dac_bits dac_fullscale opamp_gain "
                   "driver_fullscale velocity_fullscale");

    // ik
    auto* ik_cmd = app.add_subcommand("ik", "Inverse kinematics: pose -> slider positions");
    std::string ik_pose;
    ik_cmd->add_option("--pose", ik_pose, "px,py,pz,alpha,beta,gamma (m, rad)")->required();

    // fk
    auto* fk_cmd = app.add_subcommand("fk", "Forward kinematics: slider positions -> pose");
    std::string fk_joints, fk_guess;
    fk_cmd->add_option("--joints", fk_joints, "q1,q2,q3,q4,q5,q6 (m)")->required();
    fk_cmd->add_option("--guess", fk_guess, "initial pose guess (default: home pose)");

    // dof
    auto* dof_cmd = app.add_subcommand("dof", "Print the Gruebler mobility computation");

    // translate
    auto* tr_cmd = app.add_subcommand("translate", "Compile a G-Code program to a joint trajectory");
    std::string tr_input, tr_output;
    tr_cmd->add_option("input", tr_input, "G-Code program")->required();
    tr_cmd->add_option("-o,--output", tr_output, "Output CSV (default: input with .csv)");

    // verify
    auto* ver_cmd = app.add_subcommand("verify", "Replay a trajectory through forward kinematics");
    std::string ver_input, ver_program;
    ver_cmd->add_option("input", ver_input, "Trajectory CSV")->required();
    ver_cmd->add_option("--program", ver_program,
                        "Original G-Code program; adds a path-deviation check");

    // emit
    auto* em_cmd = app.add_subcommand("emit", "Convert a trajectory to drive command frames");
    std::string em_input, em_output;
    em_cmd->add_option("input", em_input, "Trajectory CSV")->required();
    em_cmd->add_option("-o,--output", em_output,
                       "Output frame file (default: input with .frames.bin); a CSV twin is "
                       "written with extension .csv");

    // plot
    auto* pl_cmd = app.add_subcommand("plot", "Render the XY path and joint curves as SVG");
    std::string pl_input, pl_output;
    pl_cmd->add_option("input", pl_input, "Trajectory CSV")->required();
    pl_cmd->add_option("-o,--output", pl_output, "Output SVG (default: input with .svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            app.exit(e);
            return kExitOk;
        }
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    }

    opt.apply_overrides();

    if (dof_cmd->parsed()) {
        const hexakine::MobilitySpec spec = hexakine::hexaglide_mobility_spec();
        int sum_f = 0;
        for (int f : spec.joint_dof) sum_f += f;
        std::cout << "lambda=" << spec.space_dof << " links=" << spec.link_count
                  << " joints=" << spec.joint_count() << " sum_f=" << sum_f << "\n";
        std::cout << spec.space_dof << "(" << spec.link_count << "-" << spec.joint_count()
                  << "-1)+" << sum_f << " = " << hexakine::mobility(spec) << "\n";
        return kExitOk;
    }

    const hexakine::MachineGeometry geom = opt.load_geometry_or_fail();

    if (ik_cmd->parsed()) {
        const auto v = parse_csv_numbers(ik_pose, 6, "--pose");
        const hexakine::PlatformPose pose(v[0], v[1], v[2], v[3], v[4], v[5]);
        const hexakine::JointVector q = hexakine::inverse_kinematics(geom, pose);
        for (int i = 0; i < 6; ++i) std::cout << (i ? " " : "") << format_number(q[i]);
        std::cout << "\n";
        return kExitOk;
    }

    if (fk_cmd->parsed()) {
        const auto v = parse_csv_numbers(fk_joints, 6, "--joints");
        hexakine::JointVector q;
        for (int i = 0; i < 6; ++i) q[i] = v[i];
        hexakine::PlatformPose guess = geom.home_pose;
        if (!fk_guess.empty()) {
            const auto g = parse_csv_numbers(fk_guess, 6, "--guess");
            guess = hexakine::PlatformPose(g[0], g[1], g[2], g[3], g[4], g[5]);
        }
        const hexakine::FkResult fk = hexakine::forward_kinematics(geom, q, guess);
        const hexakine::Vec6 chi = fk.pose.to_vector();
        for (int i = 0; i < 6; ++i) std::cout << (i ? " " : "") << format_number(chi[i]);
        std::cout << "\n";
        return kExitOk;
    }

    if (tr_cmd->parsed()) {
        const std::string out_path =
            tr_output.empty() ? replace_extension(tr_input, ".csv") : tr_output;
        const std::string text = read_text_file(tr_input);
        const auto blocks = hexakine::gcode::tokenize(text);
        const auto commands =
            hexakine::gcode::interpret(blocks, hexakine::gcode::initial_state(geom.home_pose));
        const hexakine::JointTrajectory traj = hexakine::plan(commands, geom, opt.planner);
        hexakine::write_trajectory(traj, opt.planner, out_path);
        std::cout << "samples: " << traj.samples.size() << "\n";
        std::cout << "duration_s: "
                  << format_number(traj.samples.empty() ? 0.0 : traj.samples.back().t) << "\n";
        std::cout << "output: " << out_path << "\n";
        return kExitOk;
    }

    if (ver_cmd->parsed()) {
        const hexakine::JointTrajectory traj = hexakine::read_trajectory(ver_input);
        check_fingerprint(traj, geom);
        hexakine::VerifyReport report;
        if (!ver_program.empty()) {
            const auto blocks = hexakine::gcode::tokenize(read_text_file(ver_program));
            const auto commands = hexakine::gcode::interpret(
                blocks, hexakine::gcode::initial_state(geom.home_pose));
            report = hexakine::verify(traj, geom, commands, geom.home_pose);
        } else {
            report = hexakine::verify(traj, geom);
        }
        std::cout << report.to_string();
        return kExitOk;
    }

    if (em_cmd->parsed()) {
        const hexakine::JointTrajectory traj = hexakine::read_trajectory(em_input);
        check_fingerprint(traj, geom);
        const std::string out_path =
            em_output.empty() ? replace_extension(em_input, ".frames.bin") : em_output;
        std::string twin_path = replace_extension(out_path, ".csv");
        if (twin_path == em_input) twin_path = out_path + ".csv";  // never clobber the input
        const hexakine::drive::EmitResult result = hexakine::drive::emit(traj, opt.drive);
        hexakine::drive::write_frames(result.frames, opt.drive, traj.sample_rate_hz, out_path);
        hexakine::drive::write_frames_csv(result.frames, twin_path);
        std::cout << "frames: " << result.frames.size() << "\n";
        std::cout << "clamp_events: " << result.clamp_events << "\n";
        std::cout << "output: " << out_path << "\n";
        return kExitOk;
    }

    if (pl_cmd->parsed()) {
        const hexakine::JointTrajectory traj = hexakine::read_trajectory(pl_input);
        check_fingerprint(traj, geom);
        const std::string out_path =
            pl_output.empty() ? replace_extension(pl_input, ".svg") : pl_output;
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw hexakine::IoError("cannot write SVG: " + out_path);
        out << hexakine::render_svg(traj);
        std::cout << "output: " << out_path << "\n";
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hexakine::GCodeError& e) {
        std::cerr << "error: parse: " << e.what() << "\n";
        return kExitParse;
    } catch (const hexakine::ConfigError& e) {
        std::cerr << "error: parse: " << e.what() << "\n";
        return kExitParse;
    } catch (const hexakine::IoError& e) {
        std::cerr << "error: parse: " << e.what() << "\n";
        return kExitParse;
    } catch (const hexakine::WorkspaceViolationError& e) {
        std::cerr << "error: workspace: " << e.what() << "\n";
        return kExitWorkspace;
    } catch (const hexakine::UnreachableError& e) {
        std::cerr << "error: workspace: " << e.what() << "\n";
        return kExitWorkspace;
    } catch (const hexakine::RailOverrunError& e) {
        std::cerr << "error: workspace: " << e.what() << "\n";
        return kExitWorkspace;
    } catch (const hexakine::NoConvergenceError& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const hexakine::SingularPoseError& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
