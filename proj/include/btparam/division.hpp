#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "btparam/curve.hpp"
#include "btparam/error.hpp"

namespace btparam {

// Division of a span into pieces of (nearly) equal diameter.
//
// breakpoints holds the N-1 interior cut parameters in the curve's own
// parameter (wrapped into [0,1) on closed curves), ordered along the span.
// common_diameter is the mean measured piece diameter and residual the
// largest absolute deviation from it.
struct DivisionResult {
    std::vector<double> breakpoints;
    std::vector<double> piece_diameters;
    double common_diameter = 0.0;
    double residual = 0.0;
};

namespace detail {

// Spans are marched in unrolled coordinates [start, start + extent], which
// may pass 1 on closed curves; this maps an unrolled pair back to an ArcSpan.
inline ArcSpan unrolled_span(double a, double b) {
    if (b <= 1.0) return ArcSpan{a, b, false};
    if (a >= 1.0) return ArcSpan{a - 1.0, b - 1.0, false};
    return ArcSpan{a, b - 1.0, true};
}

// Greedy march state for one trial diameter. The regularized diameter
//   d_eps(s,t) = diam[s,t] + eps * (t - s)
// is strictly increasing in t, so each cut is found by bisection.
struct Marcher {
    const JordanCurve* curve;
    double S, E;    // unrolled span bounds
    double eps;     // regularization slope per unit parameter

    double d_eps(double s, double t) const {
        return arc_diameter(*curve, unrolled_span(s, t)) + eps * (t - s);
    }

    // Largest t in (s, E] with d_eps(s, t) <= c; returns s if even the
    // smallest step overshoots.
    double first_reach(double s, double c) const {
        if (d_eps(s, E) <= c) return E;
        double lo = s, hi = E;
        for (int it = 0; it < 90; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (d_eps(s, mid) <= c)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

    // Number of pieces the greedy march needs at trial diameter c, capped at
    // limit + 1. Fills `cuts` with the interior cut parameters when non-null.
    std::size_t pieces_needed(double c, std::size_t limit, std::vector<double>* cuts) const {
        if (cuts) cuts->clear();
        if (!(c > 0.0)) return limit + 1;
        double s = S;
        for (std::size_t count = 1;; ++count) {
            double t = first_reach(s, c);
            if (t >= E) return count;
            if (t <= s || count >= limit) return limit + 1;
            if (cuts) cuts->push_back(t);
            s = t;
        }
    }

};

} // namespace detail

// Splits `span` into `n` pieces of equal regularized diameter, first by
// bisecting the trial diameter of a greedy leftmost march and, where vertex
// geometry leaves that short of tol, by shooting on the common fill value
// and sliding cuts across flat diameter stretches. The regularization slope
// is 1e-6 * diam / extent of the span, small enough that it never dominates
// the reported residual.
inline DivisionResult equal_diameter_division(const JordanCurve& curve, const ArcSpan& span,
                                              std::size_t n, double tol = 1e-6,
                                              std::size_t max_iter = 200) {
    if (n < 1) fail(errc::bad_params, "piece count must be >= 1");
    if (!(tol > 0.0)) fail(errc::bad_params, "tolerance must be positive");
    double extent = span.extent();
    if (!(extent > 0.0)) fail(errc::degenerate_span, "span has zero extent");
    if (span.wraps && !curve.closed())
        fail(errc::invalid_argument, "wrapping span on an open curve");
    double span_diam = arc_diameter(curve, span);
    if (!(span_diam > 0.0)) fail(errc::degenerate_span, "span has zero diameter");

    auto measure = [&](const std::vector<double>& interior) {
        DivisionResult r;
        r.breakpoints = interior;
        double prev = span.start;
        for (std::size_t i = 0; i <= interior.size(); ++i) {
            double next = (i < interior.size()) ? interior[i] : span.start + extent;
            r.piece_diameters.push_back(arc_diameter(curve, detail::unrolled_span(prev, next)));
            prev = next;
        }
        double sum = 0.0;
        for (double d : r.piece_diameters) sum += d;
        r.common_diameter = sum / static_cast<double>(r.piece_diameters.size());
        for (double d : r.piece_diameters)
            r.residual = std::max(r.residual, std::abs(d - r.common_diameter));
        for (double& b : r.breakpoints)
            if (curve.closed() && b >= 1.0) b -= 1.0;
        return r;
    };

    if (n == 1) return measure({});

    detail::Marcher m{&curve, span.start, span.start + extent,
                      1e-6 * span_diam / extent};

    double lo = 0.0;
    double hi = m.d_eps(m.S, m.E);
    const double hi0 = hi;
    std::vector<std::pair<double, std::size_t>> probes; // monotonicity audit
    probes.reserve(max_iter + 2);
    probes.emplace_back(hi, m.pieces_needed(hi, n, nullptr));

    bool converged = false;
    for (std::size_t it = 0; it < max_iter; ++it) {
        if (hi - lo <= 1e-15 * hi0) {
            converged = true;
            break;
        }
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            converged = true; // bracket collapsed to adjacent doubles
            break;
        }
        std::size_t need = m.pieces_needed(mid, n, nullptr);
        probes.emplace_back(mid, need);
        if (need <= n)
            hi = mid;
        else
            lo = mid;
    }
    if (!converged)
        fail(errc::no_convergence,
             "bisection on the trial diameter did not converge in " + std::to_string(max_iter) +
                 " iterations");

    // Greedy-cut monotonicity: a larger trial diameter never needs more
    // pieces. Probes closer than float noise are exempt.
    std::sort(probes.begin(), probes.end());
    for (std::size_t i = 1; i < probes.size(); ++i)
        if (probes[i].first - probes[i - 1].first > 1e-12 * hi0 &&
            probes[i].second > probes[i - 1].second)
            fail(errc::no_convergence, "greedy cut count increased with the trial diameter");

    std::vector<double> cuts;
    std::size_t used = m.pieces_needed(hi, n, &cuts);
    if (used > n)
        fail(errc::no_convergence, "converged trial diameter does not cover the span");
    // The march can cover in fewer pieces than requested when the metric is
    // too coarse to balance exactly (discrete backends). Pad the remaining
    // cuts uniformly over the tail so the result still has n pieces.
    while (cuts.size() + 1 < n) {
        double tail_start = cuts.empty() ? m.S : cuts.back();
        std::size_t missing = n - 1 - cuts.size();
        double step = (m.E - tail_start) / static_cast<double>(missing + 1);
        cuts.push_back(tail_start + step);
    }

    DivisionResult best = measure(cuts);
    if (best.residual <= tol * best.common_diameter) return best;

    // The greedy march fixes every piece to the trial diameter and leaves the
    // rounding deficit in the last one. Where the arc diameter is flat in the
    // cut position (a piece's farthest pair sits strictly between vertices)
    // the cut cascade jumps across the flat stretch as the trial value passes
    // its level, so no representable value removes the deficit, and pairwise
    // leveling merely transports it along the chain. Shoot on the common
    // value instead: fill pieces left to right to value v and bisect v on the
    // sign of the leftover gap.
    std::vector<double> A(n - 1), B(n - 1);
    auto fill_tail = [&](std::vector<double>& c, std::size_t from, double v) {
        double s = (from == 0) ? m.S : c[from - 1];
        for (std::size_t i = from; i + 1 < n; ++i) {
            s = m.first_reach(s, v);
            c[i] = s;
        }
        return m.d_eps(c[n - 2], m.E) - v;
    };
    double vlo = 0.0, vhi = hi0;
    for (int it = 0; it < 130; ++it) {
        double mid = 0.5 * (vlo + vhi);
        if (mid <= vlo || mid >= vhi) break;
        if (fill_tail(B, 0, mid) > 0.0)
            vlo = mid;
        else
            vhi = mid;
    }
    fill_tail(A, 0, vlo);
    fill_tail(B, 0, vhi);
    auto keep_best = [&](const std::vector<double>& c) {
        DivisionResult r = measure(c);
        if (r.residual < best.residual) best = std::move(r);
        return best.residual <= 0.5 * tol * best.common_diameter;
    };
    if (keep_best(A) || keep_best(B)) return best;
    // Between vlo and vhi the fill configuration, meaning which side of each
    // flat stretch a cut lands on, changes faster than the value grid can
    // resolve, so no single value balances the fill. Recover the balance in
    // cut space: sliding a cut right until its piece reaches vlo plus a small
    // allowance shortens the final piece at a bounded value cost, and a cut
    // on a flat stretch buys a long slide for it. Slide cuts one at a time,
    // leftmost first, a whole stretch per round, and when the leftover gap
    // changes sign inside a slide, bisect the cut position there.
    double allow = 0.25 * tol * vlo / static_cast<double>(n);
    std::vector<char> spent(n - 1, 0);
    double gap = fill_tail(A, 0, vlo);
    for (std::size_t round = 0; round < 4 * n && gap > 0.0; ++round) {
        std::size_t jump = n;
        double reach = 0.0;
        for (std::size_t i = 0; i + 1 < n && jump == n; ++i) {
            if (spent[i]) continue;
            double s = (i == 0) ? m.S : A[i - 1];
            reach = m.first_reach(s, vlo + allow);
            if (reach - A[i] > 1e-9 * extent) jump = i;
        }
        if (jump == n) break;
        double xa = A[jump], xb = reach;
        A[jump] = xb;
        gap = fill_tail(A, jump + 1, vlo);
        if (gap > 0.0) {
            if (gap < best.residual && keep_best(A)) return best;
            continue;
        }
        spent[jump] = 1;
        for (int it = 0; it < 90; ++it) {
            double xm = 0.5 * (xa + xb);
            if (xm <= xa || xm >= xb) break;
            A[jump] = xm;
            if (fill_tail(A, jump + 1, vlo) > 0.0)
                xa = xm;
            else
                xb = xm;
        }
        A[jump] = xb;
        fill_tail(A, jump + 1, vlo);
        if (keep_best(A)) return best;
        A[jump] = xa;
        gap = fill_tail(A, jump + 1, vlo);
        if (keep_best(A)) return best;
    }
    if (best.residual <= tol * best.common_diameter) return best;
    fail(errc::no_convergence, "value shooting did not balance the piece diameters");
}

struct CountResult {
    std::size_t count = 0;
    DivisionResult division;
};

// Smallest piece count whose equal-diameter division has common diameter at
// most delta; linear scan from 1 as the counts in play are small.
inline CountResult smallest_count_below(const JordanCurve& curve, const ArcSpan& span,
                                        double delta, double tol = 1e-6) {
    if (!(delta > 0.0)) fail(errc::bad_params, "delta must be positive");
    constexpr std::size_t kMaxCount = 1000000;
    for (std::size_t n = 1; n <= kMaxCount; ++n) {
        DivisionResult r = equal_diameter_division(curve, span, n, tol);
        if (r.common_diameter <= delta * (1.0 + 1e-12)) return {n, std::move(r)};
    }
    fail(errc::no_convergence, "no piece count up to 1e6 reaches the target diameter");
}

} // namespace btparam
