#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "btparam/curve.hpp"
#include "btparam/error.hpp"
#include "btparam/sampling.hpp"

namespace btparam {

inline JordanCurve make_regular_polygon(std::size_t n) {
    if (n < 3) fail(errc::bad_params, "polygon needs at least 3 vertices");
    std::vector<std::vector<double>> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({std::cos(a), std::sin(a)});
    }
    return curve_from_points(pts, true);
}

// Unit circle at polyline resolution.
inline JordanCurve make_circle(std::size_t n = 256) { return make_regular_polygon(n); }

inline JordanCurve make_square() {
    return curve_from_points({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, true);
}

// Straight unit segment with n evenly spaced vertices.
inline JordanCurve make_segment(std::size_t n = 2) {
    if (n < 2) fail(errc::bad_params, "segment needs at least 2 vertices");
    std::vector<std::vector<double>> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({static_cast<double>(i) / static_cast<double>(n - 1), 0.0});
    return curve_from_points(pts, false);
}

// Two unit segments meeting at a right angle; the corner sits at arc length
// 1/2, handy as a known division point.
inline JordanCurve make_l_arc() {
    return curve_from_points({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, false);
}

namespace detail {

// One substitution round: each edge gains an outward bump over its middle
// section. Cut points sit at (1/2 -+ p) of the edge; the apex rises
// sqrt(3) * p * |edge| along the outward normal, making the bump equilateral.
inline std::vector<std::vector<double>> snowflake_round(const std::vector<std::vector<double>>& pts,
                                                        double p) {
    std::size_t n = pts.size();
    std::vector<std::vector<double>> out;
    out.reserve(4 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % n];
        double dx = b[0] - a[0], dy = b[1] - a[1];
        // CCW polygon: interior is left of the direction, outward is right.
        double nx = dy, ny = -dx;
        double c1x = a[0] + (0.5 - p) * dx, c1y = a[1] + (0.5 - p) * dy;
        double c2x = a[0] + (0.5 + p) * dx, c2y = a[1] + (0.5 + p) * dy;
        double h = std::numbers::sqrt3 * p;
        double ax = a[0] + 0.5 * dx + h * nx, ay = a[1] + 0.5 * dy + h * ny;
        out.push_back(a);
        out.push_back({c1x, c1y});
        out.push_back({ax, ay});
        out.push_back({c2x, c2y});
    }
    return out;
}

} // namespace detail

// Snowflake family over an equilateral triangle: displacement parameter p in
// (0, 1/2) controls how much of each edge bulges out per round.
inline JordanCurve make_snowflake(std::size_t level, double p) {
    if (!(p > 0.0 && p < 0.5)) fail(errc::bad_params, "displacement must lie in (0, 1/2)");
    if (level > 7) fail(errc::bad_params, "snowflake level capped at 7");
    std::vector<std::vector<double>> pts = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::numbers::sqrt3 / 2.0}};
    for (std::size_t k = 0; k < level; ++k) pts = detail::snowflake_round(pts, p);
    return curve_from_points(pts, true);
}

// The classical snowflake: cuts at thirds, 3 * 4^level vertices.
inline JordanCurve make_koch(std::size_t level) { return make_snowflake(level, 1.0 / 6.0); }

// Seeded midpoint-displacement loop: starts from a regular octagon and
// repeatedly splits each edge at its midpoint, nudged along the edge normal
// by at most `cap` edge lengths. Doubles until at least n vertices.
inline JordanCurve make_random_bt(std::uint64_t seed, std::size_t n = 256, double cap = 0.2) {
    if (n < 8) fail(errc::bad_params, "random curve needs at least 8 vertices");
    if (!(cap >= 0.0 && cap < 0.5)) fail(errc::bad_params, "displacement cap must lie in [0, 1/2)");
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < 8; ++i) {
        double a = 2.0 * std::numbers::pi * static_cast<double>(i) / 8.0;
        pts.push_back({std::cos(a), std::sin(a)});
    }
    std::uint64_t round = 0;
    while (pts.size() < n) {
        Rng rng(mix_seed(seed, round++));
        std::size_t m = pts.size();
        std::vector<std::vector<double>> next;
        next.reserve(2 * m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& a = pts[i];
            const auto& b = pts[(i + 1) % m];
            double dx = b[0] - a[0], dy = b[1] - a[1];
            double u = rng.uniform(-cap, cap);
            next.push_back(a);
            next.push_back({a[0] + 0.5 * dx + u * dy, a[1] + 0.5 * dy - u * dx});
        }
        pts = std::move(next);
    }
    return curve_from_points(pts, true);
}

struct GeneratorSpec {
    std::string kind;      // circle, regular_polygon, square, segment, l_arc,
                           // koch_snowflake (alias koch), snowflake_family, random_bt
    std::size_t count = 0; // vertex count where applicable
    std::size_t level = 0; // recursion depth for the snowflakes
    double p = 1.0 / 6.0;  // snowflake_family displacement
    std::uint64_t seed = 0;
    double cap = 0.2;      // random_bt displacement cap
};

inline JordanCurve generate_curve(const GeneratorSpec& spec) {
    if (spec.kind == "circle") return make_circle(spec.count ? spec.count : 256);
    if (spec.kind == "regular_polygon") return make_regular_polygon(spec.count ? spec.count : 6);
    if (spec.kind == "square") return make_square();
    if (spec.kind == "segment") return make_segment(spec.count ? spec.count : 2);
    if (spec.kind == "l_arc") return make_l_arc();
    if (spec.kind == "koch_snowflake" || spec.kind == "koch") return make_koch(spec.level);
    if (spec.kind == "snowflake_family") return make_snowflake(spec.level, spec.p);
    if (spec.kind == "random_bt")
        return make_random_bt(spec.seed, spec.count ? spec.count : 256, spec.cap);
    fail(errc::bad_params, "unknown generator kind '" + spec.kind + "'");
}

} // namespace btparam
