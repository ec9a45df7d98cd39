#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "btparam/curve.hpp"
#include "btparam/dyadic.hpp"
#include "btparam/error.hpp"
#include "btparam/hierarchy.hpp"

namespace btparam {

// Arc-length metric on the unit circle parametrized by [0,1).
inline double lambda_metric(double s, double t) {
    s -= std::floor(s);
    t -= std::floor(t);
    double d = std::abs(t - s);
    return std::min(d, 1.0 - d);
}

// The map phi sends circle breakpoints to curve-arc endpoints, level by
// level: interval j at each level corresponds to arc j, and nested intervals
// correspond to nested arcs. Everything else is evaluated by descending to
// the deepest stored level.
struct Parametrization {
    JordanCurve curve;    // original metric, used for all measurements
    JordanCurve curve_dd; // remetrized to the diameter distance, for reporting
    GammaHierarchy gamma;
    CircleHierarchy circle;
    std::size_t depth = 0;
    double deepest_max_diameter = 0.0;

    // Image (curve parameter) of circle breakpoint j at a level.
    double breakpoint_image(std::size_t level_ix, std::size_t j) const {
        return gamma.levels[level_ix].endpoints[j];
    }

    // Distance between domain parameters: circle metric when the curve is
    // closed, plain interval metric when open.
    double domain_distance(double s, double t) const {
        return curve.closed() ? lambda_metric(s, t) : std::abs(t - s);
    }
};

namespace detail {

// Index of the interval [breakpoints[j], breakpoints[j+1]) containing s at
// one circle level, using the float mirror first and exact dyadic comparison
// to settle the boundary when the mirror is lossy.
inline std::size_t locate_interval(const CircleLevel& lv, double s) {
    const std::vector<double>& bp = lv.breakpoints_f64;
    std::size_t n = lv.interval_count();
    auto it = std::upper_bound(bp.begin(), bp.end(), s);
    std::size_t j = (it == bp.begin()) ? 0 : static_cast<std::size_t>(it - bp.begin()) - 1;
    if (j >= n) j = n - 1;
    if (!lv.f64_exact) {
        Dyadic sd = Dyadic::from_double(s);
        while (j > 0 && sd < lv.breakpoints[j]) --j;
        while (j + 1 < n && sd >= lv.breakpoints[j + 1]) ++j;
    }
    return j;
}

} // namespace detail

inline Parametrization build_parametrization(const JordanCurve& curve, std::size_t depth,
                                             double tol = 1e-6) {
    GammaHierarchy gamma = build_gamma_hierarchy(curve, depth, tol);
    CircleHierarchy circle = build_circle_hierarchy(gamma);
    Parametrization p{curve, remetrize_dd(curve), std::move(gamma), std::move(circle), depth, 0.0};
    const std::vector<double>& deep = p.gamma.levels.back().diameters;
    p.deepest_max_diameter = *std::max_element(deep.begin(), deep.end());

    // Shared breakpoints must carry one image: a parent endpoint reappears
    // among its children's endpoints at the same cumulative position, with
    // identical dyadic position and identical curve parameter.
    for (std::size_t ix = 0; ix + 1 < p.depth; ++ix) {
        const GammaLevel& g0 = p.gamma.levels[ix];
        const GammaLevel& g1 = p.gamma.levels[ix + 1];
        const CircleLevel& c0 = p.circle.levels[ix];
        const CircleLevel& c1 = p.circle.levels[ix + 1];
        std::size_t cum = 0;
        for (std::size_t j = 0; j <= g0.arc_count(); ++j) {
            if (c1.breakpoints[cum] != c0.breakpoints[j] ||
                g1.endpoints[cum] != g0.endpoints[j])
                fail(errc::bad_child_count,
                     "levels disagree on a shared breakpoint at index " + std::to_string(j));
            if (j < g0.arc_count()) cum += g0.child_counts[j];
        }
    }
    return p;
}

struct PhiPoint {
    double curve_param = 0.0;
    std::vector<double> coords; // empty for abstract-backend curves
    double error_bound = 0.0;   // max arc diameter at the deepest level
};

// Evaluates phi at any circle point by snapping to the nearest deepest-level
// breakpoint. The snap distance to the true limit map is at most the largest
// deepest-level arc diameter, which the result carries along.
inline PhiPoint phi_eval(const Parametrization& p, double s) {
    s = p.curve.closed() ? s - std::floor(s) : std::clamp(s, 0.0, 1.0);
    const CircleLevel& lv = p.circle.levels.back();
    std::size_t j = detail::locate_interval(lv, s);
    double dl = s - lv.breakpoints_f64[j];
    double dr = lv.breakpoints_f64[j + 1] - s;
    std::size_t pick = (dl <= dr) ? j : j + 1;

    PhiPoint out;
    out.curve_param = p.gamma.levels.back().endpoints[pick];
    if (p.curve.closed() && out.curve_param >= 1.0) out.curve_param = 0.0;
    if (p.curve.embedded()) out.coords = p.curve.point_at(out.curve_param);
    out.error_bound = p.deepest_max_diameter;
    return out;
}

struct ModulusReport {
    double max_image_distance = 0.0; // in the diameter distance
    double bound = 0.0;              // 2 * 4^-level * curve diameter
    double delta_n = 0.0;            // smallest interval length at the level
    std::size_t pairs = 0;
    double max_adjacent_excess = 0.0; // image distance minus the two-arc sum, same/adjacent arcs
    bool adjacent_ok = true;
};

// Continuity modulus at a level: over deepest-level breakpoint pairs closer
// than half the level's smallest interval, the image distance (in dd) must
// stay under 2 * 4^-level * diam. Breakpoints are the extremal candidates,
// so the sweep is deterministic; `samples` caps the pair budget.
inline ModulusReport modulus_check(const Parametrization& p, std::size_t level,
                                   std::size_t samples = 10000) {
    if (level < 1 || level > p.depth)
        fail(errc::level_out_of_range,
             "level " + std::to_string(level) + " not in [1, " + std::to_string(p.depth) + "]");
    const CircleLevel& at = p.circle.levels[level - 1];
    const GammaLevel& arcs = p.gamma.levels[level - 1];
    const CircleLevel& deep = p.circle.levels.back();
    const GammaLevel& deep_g = p.gamma.levels.back();

    ModulusReport rep;
    Dyadic min_len = at.lengths[0];
    for (const Dyadic& l : at.lengths) min_len = (l < min_len) ? l : min_len;
    rep.delta_n = min_len.to_double();
    rep.bound = 2.0 * std::pow(4.0, -static_cast<double>(level)) * p.gamma.curve_diameter;

    const bool closed = p.curve.closed();
    std::size_t n_pts = deep.interval_count() + (closed ? 0 : 1);
    double half = rep.delta_n / 2.0;

    double min_deep = deep.lengths[0].to_double();
    for (const Dyadic& l : deep.lengths) min_deep = std::min(min_deep, l.to_double());
    std::size_t window = static_cast<std::size_t>(half / min_deep) + 2;
    std::size_t inner_stride = std::max<std::size_t>(1, n_pts * window / std::max<std::size_t>(samples, 1));

    for (std::size_t i = 0; i < n_pts; ++i) {
        double si = deep.breakpoints_f64[i];
        for (std::size_t step = 1; step < n_pts; step += inner_stride) {
            std::size_t jj = i + step;
            if (closed)
                jj %= n_pts;
            else if (jj >= n_pts)
                break;
            double sj = deep.breakpoints_f64[jj];
            if (p.domain_distance(si, sj) > half) break;
            double ai = deep_g.endpoints[i];
            double aj = deep_g.endpoints[jj];
            double dist = diameter_distance(p.curve, ai, aj);
            rep.pairs++;
            rep.max_image_distance = std::max(rep.max_image_distance, dist);

            std::size_t ci = detail::locate_interval(at, si);
            std::size_t cj = detail::locate_interval(at, sj);
            std::size_t fwd_gap = (cj + arcs.arc_count() - ci) % arcs.arc_count();
            if (!closed) fwd_gap = (cj >= ci) ? cj - ci : ci - cj;
            if (fwd_gap <= 1 || (closed && fwd_gap == arcs.arc_count() - 1)) {
                double excess = dist - (arcs.diameters[ci] + arcs.diameters[cj]);
                rep.max_adjacent_excess = std::max(rep.max_adjacent_excess, excess);
            }
        }
    }
    rep.adjacent_ok = rep.max_adjacent_excess <= 1e-12 * p.gamma.curve_diameter;
    return rep;
}

} // namespace btparam
