#pragma once

// SVG rendering of Bloch trajectories as orthographic projections.

#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "rotten/errors.hpp"
#include "rotten/trajectory.hpp"

namespace rotten {

enum class Projection { xy, xz, yz };

inline std::string_view projection_name(Projection p) {
    switch (p) {
        case Projection::xy: return "xy";
        case Projection::xz: return "xz";
        case Projection::yz: return "yz";
    }
    return "xy";
}

/// Horizontal and vertical plot coordinates of `v` (unit sphere units).
inline std::pair<double, double> project(const BlochVector& v, Projection p) {
    switch (p) {
        case Projection::xy: return {v.x, v.y};
        case Projection::xz: return {v.x, v.z};
        case Projection::yz: return {v.y, v.z};
    }
    return {v.x, v.y};
}

struct GrapefruitStyle {
    double size = 400.0;
    double radius = 160.0;
    std::string title;
};

namespace detail {

inline std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    // Avoid "-0.0000" so identical geometry produces identical bytes.
    if (std::string_view{buf} == "-0.0000") return "0.0000";
    return buf;
}

inline constexpr std::array<std::string_view, 3> kPulseColors{"#d62728", "#1f77b4", "#2ca02c"};

}  // namespace detail

class GrapefruitCanvas {
public:
    GrapefruitCanvas(Projection p, GrapefruitStyle style) : projection_{p}, style_{std::move(style)} {}

    [[nodiscard]] std::pair<double, double> to_screen(const BlochVector& v) const {
        const auto [h, vert] = project(v, projection_);
        const double c = style_.size / 2.0;
        return {c + style_.radius * h, c - style_.radius * vert};
    }

    void render(std::ostream& out, const Trajectory& t) const {
        if (t.samples.empty()) throw DomainError("cannot render an empty trajectory");
        const double c = style_.size / 2.0;
        const double r = style_.radius;
        const auto name = projection_name(projection_);
        const std::string h_label(1, name[0]);
        const std::string v_label(1, name[1]);
        using detail::fmt4;

        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt4(style_.size) << "\" height=\""
            << fmt4(style_.size) << "\" viewBox=\"0 0 " << fmt4(style_.size) << ' ' << fmt4(style_.size)
            << "\">\n";
        out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        if (!style_.title.empty())
            out << "  <text x=\"" << fmt4(c) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
                << escape(style_.title) << "</text>\n";
        out << "  <circle id=\"sphere\" cx=\"" << fmt4(c) << "\" cy=\"" << fmt4(c) << "\" r=\"" << fmt4(r)
            << "\" fill=\"#fff3e6\" stroke=\"#e08a3c\" stroke-width=\"1.5\"/>\n";
        out << "  <g id=\"axes\" stroke=\"#888\" stroke-width=\"0.8\">\n";
        out << "    <line x1=\"" << fmt4(c - r) << "\" y1=\"" << fmt4(c) << "\" x2=\"" << fmt4(c + r) << "\" y2=\""
            << fmt4(c) << "\"/>\n";
        out << "    <line x1=\"" << fmt4(c) << "\" y1=\"" << fmt4(c - r) << "\" x2=\"" << fmt4(c) << "\" y2=\""
            << fmt4(c + r) << "\"/>\n";
        out << "  </g>\n";
        out << "  <text id=\"label-h\" x=\"" << fmt4(c + r + 8) << "\" y=\"" << fmt4(c + 4)
            << "\" font-size=\"14\">" << h_label << "</text>\n";
        out << "  <text id=\"label-v\" x=\"" << fmt4(c - 4) << "\" y=\"" << fmt4(c - r - 8)
            << "\" font-size=\"14\">" << v_label << "</text>\n";

        // Full path as one polyline; per-pulse colored segments drawn on top.
        out << "  <polyline id=\"trajectory\" fill=\"none\" stroke=\"#444\" stroke-width=\"0.6\" points=\"";
        write_points(out, t, 0, t.samples.size() - 1);
        out << "\"/>\n";
        std::size_t begin = 0;
        for (std::size_t j = 0; j < t.pulse_boundaries.size(); ++j) {
            const std::size_t end = t.pulse_boundaries[j];
            out << "  <polyline class=\"pulse-" << (j + 1) << "\" fill=\"none\" stroke=\""
                << detail::kPulseColors[j % detail::kPulseColors.size()] << "\" stroke-width=\"2\" points=\"";
            write_points(out, t, begin, end);
            out << "\"/>\n";
            begin = end;
        }

        const auto [sx, sy] = to_screen(t.samples.front().v);
        const auto [ex, ey] = to_screen(t.samples.back().v);
        out << "  <circle id=\"start\" cx=\"" << fmt4(sx) << "\" cy=\"" << fmt4(sy)
            << "\" r=\"5\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
        out << "  <circle id=\"end\" cx=\"" << fmt4(ex) << "\" cy=\"" << fmt4(ey) << "\" r=\"4\" fill=\"black\"/>\n";
        out << "</svg>\n";
    }

private:
    void write_points(std::ostream& out, const Trajectory& t, std::size_t first, std::size_t last) const {
        for (std::size_t i = first; i <= last; ++i) {
            const auto [x, y] = to_screen(t.samples[i].v);
            if (i != first) out << ' ';
            out << detail::fmt4(x) << ',' << detail::fmt4(y);
        }
    }

    static std::string escape(std::string_view s) {
        std::string out;
        for (char ch : s) {
            switch (ch) {
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                case '&': out += "&amp;"; break;
                case '"': out += "&quot;"; break;
                default: out += ch;
            }
        }
        return out;
    }

    Projection projection_;
    GrapefruitStyle style_;
};

inline void export_grapefruit(const Trajectory& t, Projection p, std::ostream& out, GrapefruitStyle style = {}) {
    GrapefruitCanvas{p, std::move(style)}.render(out, t);
}

inline void export_grapefruit(const Trajectory& t, Projection p, const std::string& path, GrapefruitStyle style = {}) {
    std::ofstream out{path};
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    export_grapefruit(t, p, out, std::move(style));
    if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace rotten
