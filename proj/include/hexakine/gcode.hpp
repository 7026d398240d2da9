#ifndef HEXAKINE_GCODE_HPP
#define HEXAKINE_GCODE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hexakine/types.hpp"

namespace hexakine::gcode {

/// One letter-number word, e.g. G1, X10.5, F300.
struct Word {
    char letter = '\0';  // uppercase, from the supported set
    double value = 0.0;
    int column = 0;  // 1-based column of the letter in the source line
};

/// One source line's worth of words. interpret() enforces that a block
/// carries at most one motion word (G0/G1/G2/G3).
struct Block {
    std::optional<int> line_number;  // N word
    std::vector<Word> words;
    int source_line = 0;  // 1-based physical line
};

enum class MotionMode { None, Rapid, Linear, ArcCW, ArcCCW };
enum class Units { mm, inch };
enum class DistanceMode { absolute, incremental };
enum class Plane { XY };  // G17; other planes are rejected outright

/// Interpreter state that persists across blocks. Linear quantities in mm,
/// angles in degrees; conversion to SI happens when commands are emitted.
struct ModalState {
    MotionMode motion_mode = MotionMode::None;
    double feed_rate = 0.0;  // mm/min; 0 = unset
    Units units = Units::mm;
    DistanceMode distance_mode = DistanceMode::absolute;
    Plane plane = Plane::XY;
    Vec3 current_point = Vec3::Zero();        // mm
    Vec3 current_orientation = Vec3::Zero();  // degrees
};

/// Default initial state: mm, absolute, XY plane, feed unset, positioned at
/// the machine home pose (converted from SI).
ModalState initial_state(const PlatformPose& home_pose);

enum class CommandKind { Rapid, Linear, Arc };
enum class ArcSense { CW, CCW };

/// A fully resolved, machine-independent motion command in SI units.
struct MotionCommand {
    CommandKind kind = CommandKind::Rapid;
    PlatformPose target;               // meters / radians
    std::optional<Vec3> arc_center;    // meters, absolute; z carries the start z
    std::optional<ArcSense> arc_sense;
    double feed = 0.0;  // m/s; 0 for rapid moves (planner substitutes its rapid feed)
    int source_line = 0;

    /// Annotations carried through without actuation (M, S, T words).
    std::vector<Word> annotations;
};

/// Splits program text into blocks. Case-insensitive letters, optional
/// whitespace between words, '(...)' and ';' comments stripped, blank lines
/// skipped. Throws LexError on unrecognized characters or malformed numbers.
std::vector<Block> tokenize(std::string_view text);

/// Applies modal semantics and emits resolved motion commands.
/// Supported codes: G0 G1 G2 G3 G17 G20 G21 G90 G91, M0 M2 M3 M5 M30.
/// Throws UnsupportedCodeError, MissingFeedError, or BadArcError.
std::vector<MotionCommand> interpret(const std::vector<Block>& blocks, ModalState initial);

/// Canonical normal form: uppercase words, one command per line, fixed
/// 4-decimal coordinates, explicit G21/G90 preamble, all six axes spelled
/// out. Re-interpreting the output reproduces the command list.
std::string serialize(const std::vector<MotionCommand>& commands, const PlatformPose& start);

/// Tolerance for the arc radius consistency check, in mm.
constexpr double kArcRadiusTolMm = 1e-4;

}  // namespace hexakine::gcode

#endif  // HEXAKINE_GCODE_HPP
