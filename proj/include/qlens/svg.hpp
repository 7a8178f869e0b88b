#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qlens/bundle.hpp"
#include "qlens/dandelion.hpp"
#include "qlens/errors.hpp"

namespace qlens::svg {

// Linear pixel map for a square canvas: the amplitude plane spans
// [-axis_extent, axis_extent] on both axes inside a fixed margin, x grows to
// the right, y grows upward, and the origin sits at the canvas centre.
struct PixelMap {
    double size = 480.0;
    double margin = 40.0;
    double extent = 1.0;

    double scale() const noexcept { return (size / 2.0 - margin) / extent; }
    double px(double x) const noexcept { return size / 2.0 + x * scale(); }
    double py(double y) const noexcept { return size / 2.0 - y * scale(); }
    double length(double d) const noexcept { return d * scale(); }
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s(buf);
    if (s == "-0.0000") s = "0.0000";
    return s;
}

inline void line(std::ostringstream& out, const PixelMap& m, Point2 a, Point2 b, const char* cls,
                 const char* stroke, const char* extra = "") {
    out << "  <line class=\"" << cls << "\" x1=\"" << num(m.px(a.x)) << "\" y1=\"" << num(m.py(a.y))
        << "\" x2=\"" << num(m.px(b.x)) << "\" y2=\"" << num(m.py(b.y)) << "\" stroke=\"" << stroke
        << "\"" << extra << "/>\n";
}

} // namespace detail

inline std::string render_figure(const DandelionFigure& fig, const std::string& title = {}) {
    const PixelMap m{480.0, 40.0, fig.axis_extent};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << m.size << "\" height=\"" << m.size
        << "\" viewBox=\"0 0 " << m.size << ' ' << m.size << "\">\n";
    if (!title.empty()) out << "  <title>" << title << "</title>\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double e = fig.axis_extent;
    detail::line(out, m, {-e, 0}, {e, 0}, "axis", "#444444");
    detail::line(out, m, {0, -e}, {0, e}, "axis", "#444444");
    out << "  <text class=\"tick\" x=\"" << detail::num(m.px(e)) << "\" y=\"" << detail::num(m.py(0) + 14)
        << "\" font-size=\"10\" text-anchor=\"end\">" << detail::num(e) << "</text>\n";
    out << "  <text class=\"tick\" x=\"" << detail::num(m.px(0) + 4) << "\" y=\"" << detail::num(m.py(e) + 10)
        << "\" font-size=\"10\">" << detail::num(e) << "i</text>\n";

    for (const auto& el : fig.elements) {
        const Point2 c = el.center(fig.k);
        const bool negative = sign_of({el.point.x, el.point.y}) == SignClass::Negative;
        out << "  <g class=\"state\" data-label=\"" << el.label.bits() << "\">\n";
        out << "  <circle cx=\"" << detail::num(m.px(c.x)) << "\" cy=\"" << detail::num(m.py(c.y))
            << "\" r=\"" << detail::num(m.length(el.radius(fig.k))) << "\" fill=\""
            << (negative ? "#1f5f8b" : "#a6d4f2") << "\" fill-opacity=\"0.5\" stroke=\"#1f5f8b\"/>\n";
        detail::line(out, m, el.stem().from, el.stem().to, "stem", "#777777", " stroke-dasharray=\"3,2\"");
        detail::line(out, m, el.real_stick().from, el.real_stick().to, "stick-real", "green");
        detail::line(out, m, el.imag_stick().from, el.imag_stick().to, "stick-imag", "red");
        out << "  <rect class=\"point\" x=\"" << detail::num(m.px(el.point.x) - 2.5) << "\" y=\""
            << detail::num(m.py(el.point.y) - 2.5) << "\" width=\"5\" height=\"5\" fill=\"black\"/>\n";
        out << "  <text x=\"" << detail::num(m.px(el.point.x) + 5) << "\" y=\"" << detail::num(m.py(el.point.y) - 5)
            << "\" font-size=\"12\">|" << el.label.bits() << "&gt;</text>\n";
        out << "  </g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// Renders the state after `state_index` gates (0 = initial state).
inline std::string render_state(const AnalysisBundle& bundle, std::size_t state_index, double k) {
    if (state_index > bundle.step_count())
        throw RangeError("state " + std::to_string(state_index) + " outside [0, " +
                         std::to_string(bundle.step_count()) + "]");
    const auto fig = build_figure(bundle.dandelion[state_index], k);
    std::string title = bundle.circuit.title().value_or("circuit " + bundle.id);
    std::string escaped;
    for (char ch : title) {
        if (ch == '<') escaped += "&lt;";
        else if (ch == '>') escaped += "&gt;";
        else if (ch == '&') escaped += "&amp;";
        else escaped += ch;
    }
    return render_figure(fig, escaped + " - state " + std::to_string(state_index));
}

inline void export_svg(const AnalysisBundle& bundle, std::size_t state_index, double k,
                       const std::filesystem::path& out_path) {
    const std::string doc = render_state(bundle, state_index, k);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + out_path.string() + " for writing");
    out << doc;
    out.flush();
    if (!out) throw IoError("write to " + out_path.string() + " failed");
}

} // namespace qlens::svg
