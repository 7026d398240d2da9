#include "hexakine/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hexakine {

namespace {

constexpr double kWidth = 800.0;
constexpr double kPathHeight = 420.0;
constexpr double kJointHeight = 300.0;
constexpr double kMargin = 50.0;
constexpr const char* kJointColors[6] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                         "#d62728", "#9467bd", "#8c564b"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void expand(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {  // flat data: open up a symmetric band
            const double c = lo;
            lo = c - 1e-3;
            hi = c + 1e-3;
        }
        const double extra = 0.05 * (hi - lo);
        lo -= extra;
        hi += extra;
    }
    double map(double v, double out_lo, double out_hi) const {
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string fmt_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void polyline(std::ostringstream& out, const std::string& points, const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\""
        << points << "\"/>\n";
}

}  // namespace

std::string render_svg(const JointTrajectory& traj) {
    Range x_range, y_range, t_range, q_range;
    for (const TrajectorySample& s : traj.samples) {
        x_range.expand(s.pose.position.x());
        y_range.expand(s.pose.position.y());
        t_range.expand(s.t);
        for (int k = 0; k < 6; ++k) q_range.expand(s.joints[k]);
    }
    if (traj.samples.empty()) {
        x_range.expand(0.0);
        y_range.expand(0.0);
        t_range.expand(0.0);
        q_range.expand(0.0);
    }
    x_range.pad();
    y_range.pad();
    t_range.pad();
    q_range.pad();

    const double total_height = kPathHeight + kJointHeight;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << total_height << "\" viewBox=\"0 0 " << kWidth << " " << total_height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Panel 1: XY tool path (y axis points up, aspect ratio preserved so
    // circles draw as circles).
    const double px_lo = kMargin, px_hi = kWidth - kMargin;
    const double py_lo = kPathHeight - kMargin, py_hi = kMargin;
    const double xy_scale = std::min((px_hi - px_lo) / (x_range.hi - x_range.lo),
                                     (py_lo - py_hi) / (y_range.hi - y_range.lo));
    const double x_mid = 0.5 * (x_range.lo + x_range.hi);
    const double y_mid = 0.5 * (y_range.lo + y_range.hi);
    const auto map_x = [&](double x) { return 0.5 * (px_lo + px_hi) + (x - x_mid) * xy_scale; };
    const auto map_y = [&](double y) { return 0.5 * (py_lo + py_hi) - (y - y_mid) * xy_scale; };
    out << "<rect x=\"" << fmt(px_lo) << "\" y=\"" << fmt(py_hi) << "\" width=\""
        << fmt(px_hi - px_lo) << "\" height=\"" << fmt(py_lo - py_hi)
        << "\" fill=\"none\" stroke=\"#888\"/>\n";
    out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"13\">tool path, XY (m)</text>\n";

    std::ostringstream path_points;
    for (const TrajectorySample& s : traj.samples) {
        path_points << fmt(map_x(s.pose.position.x())) << ',' << fmt(map_y(s.pose.position.y()))
                    << ' ';
    }
    polyline(out, path_points.str(), "#1f77b4");
    if (!traj.samples.empty()) {
        const auto& first = traj.samples.front().pose.position;
        out << "<circle cx=\"" << fmt(map_x(first.x())) << "\" cy=\"" << fmt(map_y(first.y()))
            << "\" r=\"3\" fill=\"#d62728\"/>\n";
    }
    out << "<text x=\"" << fmt(px_lo) << "\" y=\"" << fmt(py_lo + 16)
        << "\" font-family=\"monospace\" font-size=\"11\">x: [" << fmt_value(x_range.lo) << ", "
        << fmt_value(x_range.hi) << "]  y: [" << fmt_value(y_range.lo) << ", "
        << fmt_value(y_range.hi) << "]</text>\n";

    // Panel 2: joint positions over time.
    const double jy_top = kPathHeight + kMargin / 2;
    const double jy_bot = total_height - kMargin;
    out << "<rect x=\"" << fmt(px_lo) << "\" y=\"" << fmt(jy_top) << "\" width=\""
        << fmt(px_hi - px_lo) << "\" height=\"" << fmt(jy_bot - jy_top)
        << "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (int k = 0; k < 6; ++k) {
        std::ostringstream points;
        for (const TrajectorySample& s : traj.samples) {
            points << fmt(t_range.map(s.t, px_lo, px_hi)) << ','
                   << fmt(q_range.map(s.joints[k], jy_bot, jy_top)) << ' ';
        }
        polyline(out, points.str(), kJointColors[k]);
        out << "<text x=\"" << fmt(px_hi + 6) << "\" y=\"" << fmt(jy_top + 14 + 14 * k)
            << "\" font-family=\"monospace\" font-size=\"11\" fill=\"" << kJointColors[k]
            << "\">q" << (k + 1) << "</text>\n";
    }
    out << "<text x=\"" << fmt(px_lo) << "\" y=\"" << fmt(jy_bot + 16)
        << "\" font-family=\"monospace\" font-size=\"11\">t: [" << fmt_value(t_range.lo) << ", "
        << fmt_value(t_range.hi) << "] s  q: [" << fmt_value(q_range.lo) << ", "
        << fmt_value(q_range.hi) << "] m</text>\n";

    out << "</svg>\n";
    return out.str();
}

}  // namespace hexakine
