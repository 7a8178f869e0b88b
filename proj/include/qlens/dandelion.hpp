#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlens/analysis.hpp"
#include "qlens/basis.hpp"
#include "qlens/errors.hpp"
#include "qlens/statevec.hpp"

namespace qlens {

inline constexpr double default_scale = 0.25;

struct Point2 {
    double x = 0;
    double y = 0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct Segment {
    Point2 from;
    Point2 to;

    double length() const noexcept { return std::hypot(to.x - from.x, to.y - from.y); }
    friend bool operator==(const Segment&, const Segment&) = default;
};

// Amplitude-plane glyph for one basis state: the point (re, im), a circle
// through it whose area is proportional to the probability, two sticks to
// the axes and a stem from the origin.
//
// The circle has radius k·r0 and centre (1 − k)·point, so it sits on the
// origin-to-point stem and the point stays on its boundary for every k.
struct DandelionElement {
    BasisLabel label;
    Point2 point;
    double r0 = 0;

    double radius(double k) const noexcept { return k * r0; }
    Point2 center(double k) const noexcept { return {(1.0 - k) * point.x, (1.0 - k) * point.y}; }
    // Real-part stick (drawn green): horizontal, from the point to the y-axis.
    Segment real_stick() const noexcept { return {point, {0.0, point.y}}; }
    // Imaginary-part stick (drawn red): vertical, from the point to the x-axis.
    Segment imag_stick() const noexcept { return {point, {point.x, 0.0}}; }
    Segment stem() const noexcept { return {{0.0, 0.0}, point}; }

    friend bool operator==(const DandelionElement&, const DandelionElement&) = default;
};

inline double area_of(const DandelionElement& e, double k) noexcept {
    return std::numbers::pi * k * k * e.r0 * e.r0;
}

struct DandelionFigure {
    std::vector<DandelionElement> elements;
    double k = default_scale;
    double axis_extent = 1.0;

    const DandelionElement* find(const BasisLabel& label) const {
        for (const auto& e : elements)
            if (e.label == label) return &e;
        return nullptr;
    }

    friend bool operator==(const DandelionFigure&, const DandelionFigure&) = default;
};

inline void check_scale(double k) {
    if (!(k > 0.0 && k <= 1.0))
        throw BadScale("scale factor k must lie in (0, 1], got " + std::to_string(k));
}

// Base geometry (k-independent) for the alive labels of a state.
inline std::vector<DandelionElement> dandelion_elements(const StateVector& state) {
    std::vector<DandelionElement> out;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const ComplexAmp a = state[i];
        if (!is_alive(a)) continue;
        out.push_back({BasisLabel(state.num_qubits(), i), {a.real(), a.imag()}, std::abs(a)});
    }
    return out;
}

inline DandelionFigure build_figure(std::vector<DandelionElement> elements, double k) {
    check_scale(k);
    double extent = 1.0;
    for (const auto& e : elements)
        extent = std::max({extent, std::abs(e.point.x), std::abs(e.point.y)});
    return {std::move(elements), k, extent};
}

inline DandelionFigure build_figure(const StateVector& state, double k) {
    check_scale(k);
    return build_figure(dandelion_elements(state), k);
}

inline std::pair<DandelionFigure, DandelionFigure> compare_pair(const StateVector& pre,
                                                                const StateVector& post,
                                                                double k) {
    return {build_figure(pre, k), build_figure(post, k)};
}

} // namespace qlens
