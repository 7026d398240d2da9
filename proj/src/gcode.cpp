#include "hexakine/gcode.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hexakine/errors.hpp"

namespace hexakine::gcode {

namespace {

constexpr const char* kSupportedLetters = "GMXYZABCIJKRFSNT";
constexpr double kMmPerInch = 25.4;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;
constexpr double kMmPerMinToMps = 1.0 / 60000.0;

bool is_supported_letter(char c) {
    return std::strchr(kSupportedLetters, c) != nullptr;
}

std::string word_text(const Word& w) {
    std::ostringstream out;
    out << w.letter;
    if (w.value == std::floor(w.value) && std::abs(w.value) < 1e9) {
        out << static_cast<long long>(w.value);
    } else {
        out << w.value;
    }
    return out.str();
}

}  // namespace

std::vector<Block> tokenize(std::string_view text) {
    std::vector<Block> blocks;
    int line_no = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        // Carve out one physical line (LF or CRLF).
        std::size_t eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        if (eol == std::string_view::npos && line.empty() && pos == text.size()) break;
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        Block block;
        block.source_line = line_no;
        std::size_t i = 0;
        while (i < line.size()) {
            const char c = line[i];
            const int column = static_cast<int>(i) + 1;
            if (c == ';') break;  // rest of line is a comment
            if (c == '(') {
                const std::size_t close = line.find(')', i + 1);
                if (close == std::string_view::npos) {
                    throw LexError(line_no, column, "unterminated comment");
                }
                i = close + 1;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }

            const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (!std::isalpha(static_cast<unsigned char>(c)) || !is_supported_letter(upper)) {
                throw LexError(line_no, column, std::string(1, c));
            }

            // Number: [+-]?digits[.digits] with at most one decimal point.
            std::size_t n = i + 1;
            while (n < line.size() && std::isspace(static_cast<unsigned char>(line[n]))) ++n;
            const std::size_t num_start = n;
            if (n < line.size() && (line[n] == '+' || line[n] == '-')) ++n;
            int digits = 0, dots = 0;
            while (n < line.size()) {
                if (std::isdigit(static_cast<unsigned char>(line[n]))) {
                    ++digits;
                } else if (line[n] == '.') {
                    ++dots;
                } else {
                    break;
                }
                ++n;
            }
            const std::string fragment(line.substr(i, n - i));
            if (digits == 0 || dots > 1) {
                throw LexError(line_no, static_cast<int>(num_start) + 1, fragment);
            }

            Word word;
            word.letter = upper;
            word.value = std::strtod(std::string(line.substr(num_start, n - num_start)).c_str(),
                                     nullptr);
            word.column = column;
            if (word.letter == 'N') {
                if (word.value != std::floor(word.value)) {
                    throw LexError(line_no, column, fragment);
                }
                block.line_number = static_cast<int>(word.value);
            } else {
                block.words.push_back(word);
            }
            i = n;
        }

        if (!block.words.empty() || block.line_number.has_value()) {
            blocks.push_back(std::move(block));
        }
    }
    return blocks;
}

ModalState initial_state(const PlatformPose& home_pose) {
    ModalState state;
    state.current_point = home_pose.position * 1000.0;  // m -> mm
    state.current_orientation = home_pose.angles * kRadToDeg;
    return state;
}

namespace {

struct AxisWords {
    std::optional<double> x, y, z;  // machine units
    std::optional<double> a, b, c;  // degrees
    std::optional<double> i, j;     // center offsets, machine units
    std::optional<double> r;        // radius, machine units
    bool any_axis() const { return x || y || z || a || b || c; }
    bool any_arc() const { return i || j || r; }
};

void set_once(std::optional<double>& slot, const Word& w, int line) {
    if (slot.has_value()) {
        throw UnsupportedCodeError(line, std::string(1, w.letter), "word repeated in block");
    }
    slot = w.value;
}

double apply_mode(double current, std::optional<double> word, double scale, DistanceMode mode) {
    if (!word) return current;
    const double v = *word * scale;
    return mode == DistanceMode::absolute ? v : current + v;
}

// Resolves the arc center in mm (XY plane) and validates radius consistency.
Vec3 resolve_arc_center(const AxisWords& axes, const Vec3& start_mm, const Vec3& target_mm,
                        ArcSense sense, double unit_scale, int line) {
    if (axes.r && (axes.i || axes.j)) {
        throw BadArcError(line, 0.0, "both R and I/J given");
    }
    if (axes.r) {
        const double r = *axes.r * unit_scale;
        const double dx = target_mm.x() - start_mm.x();
        const double dy = target_mm.y() - start_mm.y();
        const double d = std::hypot(dx, dy);
        if (d <= kArcRadiusTolMm) {
            throw BadArcError(line, 0.0, "R form needs distinct start and end points");
        }
        const double half = d / 2.0;
        if (std::abs(r) + kArcRadiusTolMm < half) {
            throw BadArcError(line, half - std::abs(r), "radius too small for chord");
        }
        const double h = std::sqrt(std::max(0.0, r * r - half * half));
        // Positive R picks the arc <= 180 degrees, negative the arc > 180.
        const double side = (sense == ArcSense::CCW ? 1.0 : -1.0) * (r > 0.0 ? 1.0 : -1.0);
        const Vec3 mid = (start_mm + target_mm) / 2.0;
        const double nx = -dy / d, ny = dx / d;  // left normal of travel direction
        return {mid.x() + side * h * nx, mid.y() + side * h * ny, start_mm.z()};
    }
    if (!axes.i && !axes.j) {
        throw BadArcError(line, 0.0, "arc requires I/J or R");
    }
    const double ci = axes.i.value_or(0.0) * unit_scale;
    const double cj = axes.j.value_or(0.0) * unit_scale;
    const Vec3 center(start_mm.x() + ci, start_mm.y() + cj, start_mm.z());
    const double r_start = std::hypot(start_mm.x() - center.x(), start_mm.y() - center.y());
    const double r_end = std::hypot(target_mm.x() - center.x(), target_mm.y() - center.y());
    if (std::abs(r_start - r_end) > kArcRadiusTolMm) {
        throw BadArcError(line, std::abs(r_start - r_end), "start/end radius mismatch of " +
                                                               std::to_string(std::abs(r_start - r_end)) +
                                                               " mm");
    }
    return center;
}

}  // namespace

std::vector<MotionCommand> interpret(const std::vector<Block>& blocks, ModalState state) {
    std::vector<MotionCommand> commands;

    for (const Block& block : blocks) {
        const int line = block.source_line;
        AxisWords axes;
        std::optional<Word> motion_word;
        std::optional<double> feed_word;
        std::vector<Word> annotations;

        // First pass: classify words, validate support, reject duplicates.
        for (const Word& w : block.words) {
            switch (w.letter) {
                case 'G': {
                    if (w.value != std::floor(w.value)) {
                        throw UnsupportedCodeError(line, word_text(w));
                    }
                    const int code = static_cast<int>(w.value);
                    if (code == 0 || code == 1 || code == 2 || code == 3) {
                        if (motion_word) {
                            throw UnsupportedCodeError(line, word_text(w),
                                                       "conflicts with earlier motion word");
                        }
                        motion_word = w;
                    } else if (code == 17) {
                        state.plane = Plane::XY;  // the only supported plane
                    } else if (code == 20) {
                        state.units = Units::inch;
                    } else if (code == 21) {
                        state.units = Units::mm;
                    } else if (code == 90) {
                        state.distance_mode = DistanceMode::absolute;
                    } else if (code == 91) {
                        state.distance_mode = DistanceMode::incremental;
                    } else {
                        throw UnsupportedCodeError(line, word_text(w));
                    }
                    break;
                }
                case 'M': {
                    if (w.value != std::floor(w.value)) {
                        throw UnsupportedCodeError(line, word_text(w));
                    }
                    const int code = static_cast<int>(w.value);
                    if (code != 0 && code != 2 && code != 3 && code != 5 && code != 30) {
                        throw UnsupportedCodeError(line, word_text(w));
                    }
                    annotations.push_back(w);
                    break;
                }
                case 'X': set_once(axes.x, w, line); break;
                case 'Y': set_once(axes.y, w, line); break;
                case 'Z': set_once(axes.z, w, line); break;
                case 'A': set_once(axes.a, w, line); break;
                case 'B': set_once(axes.b, w, line); break;
                case 'C': set_once(axes.c, w, line); break;
                case 'I': set_once(axes.i, w, line); break;
                case 'J': set_once(axes.j, w, line); break;
                case 'K':
                    throw UnsupportedCodeError(line, "K", "not supported in the XY plane");
                case 'R': set_once(axes.r, w, line); break;
                case 'F':
                    if (feed_word) {
                        throw UnsupportedCodeError(line, "F", "word repeated in block");
                    }
                    feed_word = w.value;
                    break;
                case 'S':
                case 'T':
                    annotations.push_back(w);
                    break;
                default:
                    throw UnsupportedCodeError(line, std::string(1, w.letter));
            }
        }

        const double unit_scale = (state.units == Units::inch) ? kMmPerInch : 1.0;
        if (feed_word) {
            const double feed_mm_min = *feed_word * unit_scale;
            if (!(feed_mm_min > 0.0)) {
                throw UnsupportedCodeError(line, "F", "feed must be positive");
            }
            state.feed_rate = feed_mm_min;
        }

        if (motion_word) {
            const int code = static_cast<int>(motion_word->value);
            state.motion_mode = code == 0   ? MotionMode::Rapid
                                : code == 1 ? MotionMode::Linear
                                : code == 2 ? MotionMode::ArcCW
                                            : MotionMode::ArcCCW;
        }

        if (!axes.any_axis() && !axes.any_arc()) {
            continue;  // modal/annotation-only block
        }
        if (state.motion_mode == MotionMode::None) {
            char offending = '?';
            for (const Word& w : block.words) {
                if (std::strchr("XYZABCIJR", w.letter)) {
                    offending = w.letter;
                    break;
                }
            }
            throw UnsupportedCodeError(line, std::string(1, offending),
                                       "coordinate word with no active motion mode");
        }

        const bool is_arc =
            state.motion_mode == MotionMode::ArcCW || state.motion_mode == MotionMode::ArcCCW;
        if (!is_arc && axes.any_arc()) {
            throw UnsupportedCodeError(line, axes.r ? "R" : "I",
                                       "arc word outside G2/G3 context");
        }

        // Resolve the target in mm / degrees.
        Vec3 target_mm = state.current_point;
        target_mm.x() = apply_mode(target_mm.x(), axes.x, unit_scale, state.distance_mode);
        target_mm.y() = apply_mode(target_mm.y(), axes.y, unit_scale, state.distance_mode);
        target_mm.z() = apply_mode(target_mm.z(), axes.z, unit_scale, state.distance_mode);
        Vec3 target_deg = state.current_orientation;
        target_deg.x() = apply_mode(target_deg.x(), axes.a, 1.0, state.distance_mode);
        target_deg.y() = apply_mode(target_deg.y(), axes.b, 1.0, state.distance_mode);
        target_deg.z() = apply_mode(target_deg.z(), axes.c, 1.0, state.distance_mode);

        MotionCommand cmd;
        cmd.source_line = line;
        cmd.annotations = std::move(annotations);
        cmd.target.position = target_mm / 1000.0;
        cmd.target.angles = target_deg * kDegToRad;
        cmd.target = cmd.target.normalized();

        if (state.motion_mode == MotionMode::Rapid) {
            cmd.kind = CommandKind::Rapid;
            cmd.feed = 0.0;
        } else {
            if (!(state.feed_rate > 0.0)) throw MissingFeedError(line);
            cmd.feed = state.feed_rate * kMmPerMinToMps;
            if (is_arc) {
                cmd.kind = CommandKind::Arc;
                cmd.arc_sense =
                    state.motion_mode == MotionMode::ArcCW ? ArcSense::CW : ArcSense::CCW;
                const Vec3 center_mm = resolve_arc_center(axes, state.current_point, target_mm,
                                                          *cmd.arc_sense, unit_scale, line);
                cmd.arc_center = center_mm / 1000.0;
            } else {
                cmd.kind = CommandKind::Linear;
            }
        }

        commands.push_back(cmd);
        state.current_point = target_mm;
        state.current_orientation = target_deg;
    }
    return commands;
}

std::string serialize(const std::vector<MotionCommand>& commands, const PlatformPose& start) {
    std::ostringstream out;
    out << "G21\nG90\n";
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };

    Vec3 point_mm = start.position * 1000.0;
    for (const MotionCommand& cmd : commands) {
        const Vec3 pos_mm = cmd.target.position * 1000.0;
        const Vec3 ang_deg = cmd.target.angles * kRadToDeg;
        switch (cmd.kind) {
            case CommandKind::Rapid: out << "G0"; break;
            case CommandKind::Linear: out << "G1"; break;
            case CommandKind::Arc:
                out << (cmd.arc_sense == ArcSense::CW ? "G2" : "G3");
                break;
        }
        out << " X" << num(pos_mm.x()) << " Y" << num(pos_mm.y()) << " Z" << num(pos_mm.z());
        out << " A" << num(ang_deg.x()) << " B" << num(ang_deg.y()) << " C" << num(ang_deg.z());
        if (cmd.kind == CommandKind::Arc) {
            out << " I" << num(cmd.arc_center->x() * 1000.0 - point_mm.x()) << " J"
                << num(cmd.arc_center->y() * 1000.0 - point_mm.y());
        }
        if (cmd.kind != CommandKind::Rapid) {
            out << " F" << num(cmd.feed / kMmPerMinToMps);
        }
        out << "\n";
        point_mm = pos_mm;
    }
    return out.str();
}

}  // namespace hexakine::gcode
