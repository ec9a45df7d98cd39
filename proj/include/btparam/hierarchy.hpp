#pragma once

#include <algorithm>
#include <cfloat>
#include <cstddef>
#include <string>
#include <vector>

#include "btparam/curve.hpp"
#include "btparam/division.hpp"
#include "btparam/dyadic.hpp"
#include "btparam/error.hpp"

namespace btparam {

// One level of the curve-side hierarchy. Arc j runs between endpoints[j] and
// endpoints[j+1]; arcs are contiguous and tile [0,1] (parameter 1 meets 0 on
// closed curves).
struct GammaLevel {
    std::vector<double> endpoints;          // N+1, endpoints[0] = 0, endpoints[N] = 1
    std::vector<double> diameters;          // N, measured per arc
    std::vector<std::size_t> parent;        // N, arc index one level up (empty on the first level)
    std::vector<std::size_t> child_counts;  // N, filled once the next level exists
    double delta = 0.0;                     // diameter target this level was built for

    std::size_t arc_count() const { return diameters.size(); }
};

struct GammaHierarchy {
    bool closed = true;
    double curve_diameter = 0.0;
    std::vector<GammaLevel> levels; // levels[0] is level 1

    std::size_t depth() const { return levels.size(); }

    ArcSpan arc(std::size_t level_ix, std::size_t j) const {
        const GammaLevel& lv = levels[level_ix];
        return ArcSpan{lv.endpoints[j], lv.endpoints[j + 1], false};
    }
};

namespace detail {

// Subdividing an arc the metric can no longer resolve produces garbage, not
// an approximation; refuse instead. Embedded curves run out of parameter
// precision, abstract ones run out of vertices.
inline void check_resolvable(const JordanCurve& curve, const ArcSpan& span, std::size_t level) {
    if (curve.embedded()) {
        if (span.extent() < 64.0 * DBL_EPSILON)
            fail(errc::depth_exceeds_resolution,
                 "arc at level " + std::to_string(level) + " is below parameter resolution");
    } else {
        if (curve.vertices_in(span).count < 2)
            fail(errc::depth_exceeds_resolution,
                 "arc at level " + std::to_string(level) + " covers fewer than 2 vertices");
    }
}

} // namespace detail

// Builds `depth` levels of arcs with controlled diameters: the first level
// targets a quarter of the curve diameter, each further level a quarter of
// the smallest diameter one level up. Every arc splits into at least 4
// children, same-level diameters stay within a factor 2 of each other and
// children within [1/16, 1/4] of any arc one level up.
inline GammaHierarchy build_gamma_hierarchy(const JordanCurve& curve, std::size_t depth,
                                            double tol = 1e-6) {
    if (depth < 1) fail(errc::bad_params, "depth must be >= 1");

    GammaHierarchy h;
    h.closed = curve.closed();
    h.curve_diameter = arc_diameter(curve, full_span());
    if (!(h.curve_diameter > 0.0)) fail(errc::degenerate_span, "curve has zero diameter");

    for (std::size_t level = 1; level <= depth; ++level) {
        GammaLevel out;
        if (level == 1) {
            out.delta = h.curve_diameter / 4.0;
            detail::check_resolvable(curve, full_span(), level);
            CountResult r = smallest_count_below(curve, full_span(), out.delta, tol);
            if (r.count < 4)
                fail(errc::bad_child_count,
                     "first level produced " + std::to_string(r.count) + " arcs, need >= 4");
            out.endpoints.push_back(0.0);
            for (double b : r.division.breakpoints) out.endpoints.push_back(b);
            out.endpoints.push_back(1.0);
            out.diameters = r.division.piece_diameters;
        } else {
            GammaLevel& prev = h.levels.back();
            double min_diam = *std::min_element(prev.diameters.begin(), prev.diameters.end());
            out.delta = min_diam / 4.0;
            prev.child_counts.resize(prev.arc_count(), 0);
            out.endpoints.push_back(0.0);
            for (std::size_t j = 0; j < prev.arc_count(); ++j) {
                ArcSpan arc = ArcSpan{prev.endpoints[j], prev.endpoints[j + 1], false};
                detail::check_resolvable(curve, arc, level);
                CountResult r = smallest_count_below(curve, arc, out.delta, tol);
                if (r.count < 4)
                    fail(errc::bad_child_count,
                         "arc " + std::to_string(j) + " at level " + std::to_string(level) +
                             " split into " + std::to_string(r.count) + " children, need >= 4");
                prev.child_counts[j] = r.count;
                for (double b : r.division.breakpoints) out.endpoints.push_back(b);
                out.endpoints.push_back(arc.end);
                for (double d : r.division.piece_diameters) out.diameters.push_back(d);
                out.parent.insert(out.parent.end(), r.count, j);
            }
        }
        for (std::size_t i = 1; i < out.endpoints.size(); ++i)
            if (!(out.endpoints[i] > out.endpoints[i - 1]))
                fail(errc::depth_exceeds_resolution,
                     "level " + std::to_string(level) + " endpoints collapsed at index " +
                         std::to_string(i));
        h.levels.push_back(std::move(out));
    }
    return h;
}

// Child lengths for one subdivided interval, as exact fractions of the
// parent: 1/4, 1/8, ... halving toward the middle and mirrored back out, the
// odd case merging the two innermost entries. Sums to exactly 1, largest
// entry exactly 1/4, neighbor ratios in {1/2, 1, 2}.
struct DyadicSplit {
    std::vector<Dyadic> fractions;
    std::vector<char> middle; // flags the child(ren) holding the parent midpoint
};

inline DyadicSplit dyadic_child_lengths(std::size_t n) {
    if (n < 4)
        fail(errc::bad_child_count, "dyadic split needs >= 4 children, got " + std::to_string(n));
    bool odd = (n % 2) != 0;
    std::size_t m = (n + (odd ? 1 : 0)) / 2;
    std::size_t n_even = 2 * m;

    std::vector<Dyadic> even(n_even);
    for (std::size_t i = 1; i <= m; ++i) {
        Dyadic f = Dyadic::pow2(static_cast<int>(std::min(i + 1, m)));
        even[i - 1] = f;
        even[n_even - i] = f;
    }

    DyadicSplit out;
    if (!odd) {
        out.fractions = std::move(even);
        out.middle.assign(n, 0);
        out.middle[m - 1] = 1;
        out.middle[m] = 1;
    } else {
        out.fractions.assign(even.begin(), even.begin() + static_cast<std::ptrdiff_t>(m - 1));
        out.fractions.push_back(even[m - 1] + even[m]);
        out.fractions.insert(out.fractions.end(), even.begin() + static_cast<std::ptrdiff_t>(m + 1),
                             even.end());
        out.middle.assign(n, 0);
        out.middle[m - 1] = 1;
    }
    return out;
}

// Circle-side counterpart of GammaLevel, with exact dyadic breakpoints.
// breakpoints_f64 mirrors the endpoints in floating point; f64_exact records
// whether that mirror is bit-faithful (it is at any practical depth).
struct CircleLevel {
    std::vector<Dyadic> breakpoints; // N+1, [0] = 0, [N] = 1
    std::vector<Dyadic> lengths;     // N
    std::vector<std::size_t> parent; // N (empty on the first level)
    std::vector<char> middle;        // N
    std::vector<double> breakpoints_f64;
    bool f64_exact = true;

    std::size_t interval_count() const { return lengths.size(); }
};

struct CircleHierarchy {
    bool closed = true;
    std::vector<CircleLevel> levels;

    std::size_t depth() const { return levels.size(); }
};

// Mirrors the curve hierarchy combinatorially onto [0,1]: the first level is
// one dyadic split of the whole circle, and every interval splits into as
// many children as its curve-side twin, each child an exact dyadic fraction
// of the parent length.
inline CircleHierarchy build_circle_hierarchy(const GammaHierarchy& gamma) {
    if (gamma.depth() == 0) fail(errc::bad_params, "empty curve hierarchy");

    CircleHierarchy c;
    c.closed = gamma.closed;
    for (std::size_t ix = 0; ix < gamma.depth(); ++ix) {
        CircleLevel lv;
        if (ix == 0) {
            DyadicSplit split = dyadic_child_lengths(gamma.levels[0].arc_count());
            lv.lengths = std::move(split.fractions);
            lv.middle = std::move(split.middle);
            lv.breakpoints.push_back(Dyadic::zero());
            for (const Dyadic& len : lv.lengths)
                lv.breakpoints.push_back(lv.breakpoints.back() + len);
        } else {
            const CircleLevel& up = c.levels.back();
            const std::vector<std::size_t>& counts = gamma.levels[ix - 1].child_counts;
            lv.breakpoints.push_back(Dyadic::zero());
            for (std::size_t p = 0; p < up.interval_count(); ++p) {
                DyadicSplit split = dyadic_child_lengths(counts[p]);
                for (std::size_t i = 0; i < split.fractions.size(); ++i) {
                    Dyadic len = up.lengths[p] * split.fractions[i];
                    lv.lengths.push_back(len);
                    lv.breakpoints.push_back(lv.breakpoints.back() + len);
                    lv.parent.push_back(p);
                    lv.middle.push_back(split.middle[i]);
                }
            }
        }
        if (lv.breakpoints.back() != Dyadic::one())
            fail(errc::bad_child_count, "circle level does not tile [0,1] exactly");
        lv.breakpoints_f64.reserve(lv.breakpoints.size());
        for (const Dyadic& b : lv.breakpoints) {
            lv.f64_exact = lv.f64_exact && b.double_exact();
            lv.breakpoints_f64.push_back(b.to_double());
        }
        c.levels.push_back(std::move(lv));
    }
    return c;
}

} // namespace btparam
