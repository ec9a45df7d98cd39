#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "btparam/error.hpp"
#include "btparam/sampling.hpp"

namespace btparam {

// Relative tolerance for distance-matrix validation (symmetry, zero diagonal,
// triangle inequality).
inline constexpr double kMetricTol = 1e-9;

// Pairs closer than this are skipped when estimating ratio suprema, to avoid
// 0/0 noise.
inline constexpr double kPairCutoff = 1e-12;

// The arc-diameter table is O(n^2) memory; curves beyond this vertex count
// refuse to build it. Raise the knob if you have the RAM for it.
inline std::size_t& max_dd_vertices() {
    static std::size_t cap = 8192;
    return cap;
}

// Arc of a curve in normalized parameters. Runs from `start` in the positive
// direction to `end`; `wraps` marks arcs passing through parameter 0 (closed
// curves only). start == end with wraps == false is the empty span, start ==
// end with wraps == true is the full circle.
struct ArcSpan {
    double start = 0.0;
    double end = 0.0;
    bool wraps = false;

    double extent() const {
        return wraps ? (1.0 - start) + end : end - start;
    }
};

inline ArcSpan full_span() { return ArcSpan{0.0, 1.0, false}; }

// Positively oriented span from x to y on a closed curve (params in [0,1)).
inline ArcSpan span_between(double x, double y) {
    return ArcSpan{x, y, y < x};
}

struct VertexRange {
    std::size_t first = 0;
    std::size_t count = 0; // indices first, first+1, ... (mod n for closed)
};

// Diameters of all contiguous vertex ranges, offset-indexed:
// range(i, k) = max pairwise vertex distance over {v_i, ..., v_{i+k-1}}.
// Built once per curve with the interval recurrence
//   diam(i..j) = max(diam(i..j-1), diam(i+1..j), d(i,j)).
struct DiamTable {
    std::size_t n = 0;
    std::vector<double> fwd; // fwd[i*n + off] = diam of the off+1 vertices from i

    double range(std::size_t first, std::size_t count) const {
        if (count < 2) return 0.0;
        return fwd[first * n + (count - 1)];
    }
};

namespace detail {
struct TrustedMatrixTag {};
} // namespace detail

class JordanCurve;
JordanCurve curve_from_points(const std::vector<std::vector<double>>& points, bool closed);
JordanCurve curve_from_distance_matrix(const std::vector<std::vector<double>>& matrix, bool closed);

class JordanCurve {
public:
    bool closed() const { return closed_; }
    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }
    bool embedded() const { return dim_ > 0; }
    std::size_t basepoint() const { return 0; }
    double total_length() const { return length_; }

    const std::vector<double>& params() const { return params_; }
    double param(std::size_t i) const { return params_[i]; }

    std::span<const double> vertex(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }

    double matrix_at(std::size_t i, std::size_t j) const { return matrix_[i * n_ + j]; }

    double vertex_distance(std::size_t i, std::size_t j) const {
        if (embedded()) {
            const double* a = coords_.data() + i * dim_;
            const double* b = coords_.data() + j * dim_;
            double s = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
                double d = a[k] - b[k];
                s += d * d;
            }
            return std::sqrt(s);
        }
        return matrix_[i * n_ + j];
    }

    // Normalizes a parameter into the curve domain: closed curves wrap mod 1,
    // open curves must stay in [0, 1].
    double wrap_param(double t) const {
        if (closed_) {
            double w = t - std::floor(t);
            return w == 1.0 ? 0.0 : w;
        }
        if (t < -1e-12 || t > 1.0 + 1e-12)
            fail(errc::invalid_argument, "parameter " + std::to_string(t) + " outside [0,1] on open curve");
        return std::clamp(t, 0.0, 1.0);
    }

    // Writes the interpolated point at parameter t (embedded backend only).
    void point_at(double t, double* out) const {
        t = wrap_param(t);
        std::size_t i = segment_of(t);
        std::size_t j = (i + 1 < n_) ? i + 1 : (closed_ ? 0 : n_ - 1);
        double p0 = params_[i];
        double p1 = (i + 1 < n_) ? params_[i + 1] : 1.0;
        double f = (p1 > p0) ? (t - p0) / (p1 - p0) : 0.0;
        const double* a = coords_.data() + i * dim_;
        const double* b = coords_.data() + j * dim_;
        for (std::size_t k = 0; k < dim_; ++k) out[k] = a[k] + f * (b[k] - a[k]);
    }

    std::vector<double> point_at(double t) const {
        if (!embedded())
            fail(errc::invalid_argument, "point_at needs an embedded curve");
        std::vector<double> out(dim_);
        point_at(t, out.data());
        return out;
    }

    // Nearest vertex in parameter distance; how the abstract backend reads
    // off-vertex parameters.
    std::size_t nearest_vertex(double t) const {
        t = wrap_param(t);
        auto it = std::upper_bound(params_.begin(), params_.end(), t);
        std::size_t hi = static_cast<std::size_t>(it - params_.begin());
        std::size_t lo = hi - 1; // params_[0] == 0 <= t, so hi >= 1
        double upper_param = (hi < n_) ? params_[hi] : 1.0;
        double d_lo = t - params_[lo];
        double d_hi = upper_param - t;
        std::size_t pick = (d_lo <= d_hi) ? lo : hi;
        if (pick == n_) pick = closed_ ? 0 : n_ - 1;
        return pick;
    }

    // Ambient distance between two curve points given by parameters.
    double distance(double s, double t) const {
        if (embedded()) {
            double bs[16], bt[16];
            std::vector<double> hs, ht;
            double* ps = scratch(bs, hs);
            double* pt = scratch(bt, ht);
            point_at(s, ps);
            point_at(t, pt);
            double acc = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
                double d = ps[k] - pt[k];
                acc += d * d;
            }
            return std::sqrt(acc);
        }
        return matrix_[nearest_vertex(s) * n_ + nearest_vertex(t)];
    }

    // Vertices whose parameter lies in the span (inclusive bounds).
    VertexRange vertices_in(const ArcSpan& span) const {
        VertexRange r;
        if (!span.wraps) {
            auto lo = std::lower_bound(params_.begin(), params_.end(), span.start);
            auto hi = std::upper_bound(params_.begin(), params_.end(), span.end);
            if (lo < hi) {
                r.first = static_cast<std::size_t>(lo - params_.begin());
                r.count = static_cast<std::size_t>(hi - lo);
            }
            return r;
        }
        // [start, 1) followed by [0, end]
        auto lo = std::lower_bound(params_.begin(), params_.end(), span.start);
        std::size_t head = static_cast<std::size_t>(params_.end() - lo);
        auto hi = std::upper_bound(params_.begin(), params_.end(), span.end);
        std::size_t tail = static_cast<std::size_t>(hi - params_.begin());
        r.first = head > 0 ? static_cast<std::size_t>(lo - params_.begin()) : 0;
        r.count = std::min(head + tail, n_);
        return r;
    }

    const DiamTable& diam_table() const {
        std::lock_guard<std::mutex> lock(cache_->m);
        if (!cache_->table) {
            if (n_ > max_dd_vertices())
                fail(errc::curve_too_large,
                     "curve has " + std::to_string(n_) + " vertices; the arc-diameter table is capped at " +
                         std::to_string(max_dd_vertices()) + " (see max_dd_vertices())");
            cache_->table = build_table();
        }
        return *cache_->table;
    }

    double diameter() const { return diam_table().range(0, n_); }

private:
    friend JordanCurve curve_from_points(const std::vector<std::vector<double>>&, bool);
    friend JordanCurve curve_from_distance_matrix(const std::vector<std::vector<double>>&, bool);
    friend JordanCurve make_curve_trusted(detail::TrustedMatrixTag, std::vector<double>, std::size_t, bool);

    JordanCurve() : cache_(std::make_shared<Cache>()) {}

    struct Cache {
        std::mutex m;
        std::shared_ptr<const DiamTable> table;
    };

    double* scratch(double (&stack)[16], std::vector<double>& heap) const {
        if (dim_ <= 16) return stack;
        heap.resize(dim_);
        return heap.data();
    }

    std::size_t segment_of(double t) const {
        auto it = std::upper_bound(params_.begin(), params_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - params_.begin()) - 1;
        if (!closed_ && i >= n_ - 1) i = n_ - 2; // t == 1 sits in the last segment
        return i;
    }

    std::shared_ptr<const DiamTable> build_table() const {
        auto table = std::make_shared<DiamTable>();
        table->n = n_;
        table->fwd.assign(n_ * n_, 0.0);
        auto& fwd = table->fwd;
        const std::size_t max_off = n_ - 1;
        for (std::size_t off = 1; off <= max_off; ++off) {
            std::size_t i_end = closed_ ? n_ : n_ - off;
            for (std::size_t i = 0; i < i_end; ++i) {
                std::size_t j = i + off;
                std::size_t jm = (j >= n_) ? j - n_ : j;
                std::size_t inext = (i + 1 == n_) ? 0 : i + 1;
                double a = fwd[i * n_ + off - 1];
                double b = fwd[inext * n_ + off - 1];
                double c = vertex_distance(i, jm);
                fwd[i * n_ + off] = std::max({a, b, c});
            }
        }
        return table;
    }

    // Params from cumulative chord length, normalized to [0,1). `edges` holds
    // consecutive vertex distances, including the closing edge when closed.
    void set_params_from_edges(const std::vector<double>& edges) {
        double total = 0.0;
        for (double e : edges) {
            if (!(e > 0.0))
                fail(errc::degenerate_edge, "zero-length edge between consecutive vertices");
            total += e;
        }
        length_ = total;
        params_.resize(n_);
        params_[0] = 0.0;
        double acc = 0.0;
        for (std::size_t i = 1; i < n_; ++i) {
            acc += edges[i - 1];
            params_[i] = acc / total;
            if (!(params_[i] > params_[i - 1]))
                fail(errc::degenerate_edge, "edge too short to resolve in the parametrization");
        }
        if (!closed_ && params_[n_ - 1] != 1.0) params_[n_ - 1] = 1.0;
        if (closed_ && !(params_[n_ - 1] < 1.0))
            fail(errc::degenerate_edge, "closing edge too short to resolve in the parametrization");
    }

    bool closed_ = true;
    std::size_t n_ = 0;
    std::size_t dim_ = 0;              // 0 for the abstract backend
    std::vector<double> coords_;       // n * dim, embedded backend
    std::vector<double> matrix_;       // n * n, abstract backend
    std::vector<double> params_;       // normalized cumulative chord length
    double length_ = 0.0;
    std::shared_ptr<Cache> cache_;     // copies share the lazily built table
};

inline JordanCurve curve_from_points(const std::vector<std::vector<double>>& points, bool closed) {
    std::size_t n = points.size();
    if (n < (closed ? 3u : 2u))
        fail(errc::too_few_points,
             std::string(closed ? "closed" : "open") + " curve needs at least " +
                 (closed ? "3" : "2") + " points, got " + std::to_string(n));
    std::size_t dim = points[0].size();
    if (dim == 0) fail(errc::invalid_argument, "points must have dimension >= 1");
    for (const auto& p : points)
        if (p.size() != dim)
            fail(errc::invalid_argument, "points have inconsistent dimensions");

    JordanCurve c;
    c.closed_ = closed;
    c.n_ = n;
    c.dim_ = dim;
    c.coords_.reserve(n * dim);
    for (const auto& p : points)
        for (double v : p) {
            if (!std::isfinite(v)) fail(errc::invalid_argument, "non-finite coordinate");
            c.coords_.push_back(v);
        }

    std::vector<double> edges;
    edges.reserve(closed ? n : n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back(c.vertex_distance(i, i + 1));
    if (closed) edges.push_back(c.vertex_distance(n - 1, 0));
    c.set_params_from_edges(edges);
    return c;
}

namespace detail {

inline void validate_matrix(const std::vector<double>& m, std::size_t n) {
    double scale = 0.0;
    for (double v : m) {
        if (!std::isfinite(v) || v < 0.0)
            fail(errc::invalid_argument, "distance matrix entries must be finite and non-negative");
        scale = std::max(scale, v);
    }
    double tol = kMetricTol * scale;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(m[i * n + i]) > tol)
            fail(errc::invalid_argument, "distance matrix diagonal must be zero");
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m[i * n + j] - m[j * n + i]) > tol)
                fail(errc::not_symmetric,
                     "matrix not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    // Triangle inequality: exhaustive on small matrices, seeded sample beyond
    // (the full scan is cubic; certification re-checks it by sampling anyway).
    auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
        if (m[i * n + k] > m[i * n + j] + m[j * n + k] + tol)
            fail(errc::triangle_violation,
                 "triangle inequality fails at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                     std::to_string(k) + ")");
    };
    if (n <= 128) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) check(i, j, k);
    } else {
        Rng rng(0x747269616E676Cull);
        for (std::size_t s = 0; s < 200000; ++s)
            check(rng.index(n), rng.index(n), rng.index(n));
    }
}

} // namespace detail

inline JordanCurve make_curve_trusted(detail::TrustedMatrixTag, std::vector<double> matrix,
                                      std::size_t n, bool closed) {
    JordanCurve c;
    c.closed_ = closed;
    c.n_ = n;
    c.dim_ = 0;
    c.matrix_ = std::move(matrix);
    std::vector<double> edges;
    edges.reserve(closed ? n : n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back(c.matrix_[i * n + i + 1]);
    if (closed) edges.push_back(c.matrix_[(n - 1) * n + 0]);
    c.set_params_from_edges(edges);
    return c;
}

inline JordanCurve curve_from_distance_matrix(const std::vector<std::vector<double>>& matrix, bool closed) {
    std::size_t n = matrix.size();
    if (n < (closed ? 3u : 2u))
        fail(errc::too_few_points, "distance matrix needs at least " +
                                       std::string(closed ? "3" : "2") + " rows");
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : matrix) {
        if (row.size() != n) fail(errc::invalid_argument, "distance matrix must be square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    detail::validate_matrix(flat, n);
    return make_curve_trusted(detail::TrustedMatrixTag{}, std::move(flat), n, closed);
}

namespace detail {

// Shared arc-diameter walk. Computes max pairwise distance over the span's
// vertices plus its two (interpolated) boundary points; exact for embedded
// polylines because the segment-restricted distance is convex. When `witness`
// is non-null the attaining parameter pair is recovered as well.
struct ArcWitness {
    double p = 0.0;
    double q = 0.0;
};

inline double arc_diameter_impl(const JordanCurve& c, const ArcSpan& span, ArcWitness* witness) {
    if (span.wraps && !c.closed())
        fail(errc::invalid_argument, "wrapping span on an open curve");
    double extent = span.extent();
    if (extent <= 0.0) return 0.0;

    const std::size_t n = c.size();
    const DiamTable& table = c.diam_table();
    VertexRange r = c.vertices_in(span);

    double best = 0.0;
    double bp = span.start, bq = span.start;

    if (r.count >= 2) {
        best = table.range(r.first, r.count);
        if (witness) {
            // O(k^2) rescan, only paid when the caller wants the pair.
            for (std::size_t a = 0; a < r.count && best > 0.0; ++a) {
                std::size_t ia = (r.first + a) % n;
                for (std::size_t b = a + 1; b < r.count; ++b) {
                    std::size_t ib = (r.first + b) % n;
                    if (c.vertex_distance(ia, ib) == best) {
                        bp = c.param(ia);
                        bq = c.param(ib);
                        a = r.count;
                        break;
                    }
                }
            }
        }
    }

    double end_param = c.closed() ? c.wrap_param(span.end) : span.end;
    if (c.embedded()) {
        const std::size_t dim = c.dim();
        double sx[16], sy[16];
        std::vector<double> hx, hy;
        double* X = dim <= 16 ? sx : (hx.resize(dim), hx.data());
        double* Y = dim <= 16 ? sy : (hy.resize(dim), hy.data());
        c.point_at(span.start, X);
        c.point_at(end_param, Y);
        auto dist_to = [&](const double* p, std::size_t v) {
            double s = 0.0;
            auto q = c.vertex(v);
            for (std::size_t k = 0; k < dim; ++k) {
                double d = p[k] - q[k];
                s += d * d;
            }
            return std::sqrt(s);
        };
        double dxy = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            double d = X[k] - Y[k];
            dxy += d * d;
        }
        dxy = std::sqrt(dxy);
        if (dxy > best) { best = dxy; bp = span.start; bq = span.end; }
        for (std::size_t a = 0; a < r.count; ++a) {
            std::size_t v = (r.first + a) % n;
            double dx = dist_to(X, v);
            if (dx > best) { best = dx; bp = span.start; bq = c.param(v); }
            double dy = dist_to(Y, v);
            if (dy > best) { best = dy; bp = c.param(v); bq = span.end; }
        }
    } else {
        std::size_t ex = c.nearest_vertex(span.start);
        std::size_t ey = c.nearest_vertex(end_param);
        double dxy = c.matrix_at(ex, ey);
        if (dxy > best) { best = dxy; bp = c.param(ex); bq = c.param(ey); }
        for (std::size_t a = 0; a < r.count; ++a) {
            std::size_t v = (r.first + a) % n;
            double dx = c.matrix_at(ex, v);
            if (dx > best) { best = dx; bp = c.param(ex); bq = c.param(v); }
            double dy = c.matrix_at(ey, v);
            if (dy > best) { best = dy; bp = c.param(ey); bq = c.param(v); }
        }
    }

    if (witness) {
        witness->p = bp;
        witness->q = bq;
    }
    return best;
}

} // namespace detail

inline double arc_diameter(const JordanCurve& curve, const ArcSpan& span) {
    return detail::arc_diameter_impl(curve, span, nullptr);
}

struct ArcDiameterWitness {
    double value = 0.0;
    double p = 0.0; // parameters of an attaining pair
    double q = 0.0;
};

inline ArcDiameterWitness arc_diameter_witness(const JordanCurve& curve, const ArcSpan& span) {
    detail::ArcWitness w;
    double v = detail::arc_diameter_impl(curve, span, &w);
    return {v, w.p, w.q};
}

// The connecting arc of smaller diameter between two points of a closed
// curve; ties go to the positively oriented arc from x to y.
inline ArcSpan smaller_arc(const JordanCurve& curve, double x, double y) {
    if (!curve.closed())
        fail(errc::invalid_argument, "smaller_arc needs a closed curve");
    x = curve.wrap_param(x);
    y = curve.wrap_param(y);
    if (x == y) fail(errc::same_point, "smaller_arc of a point pair with x == y");
    ArcSpan fwd = span_between(x, y);
    ArcSpan bwd = span_between(y, x);
    return arc_diameter(curve, fwd) <= arc_diameter(curve, bwd) ? fwd : bwd;
}

// Diameter distance: diam of the smaller connecting arc (closed curves), or
// of the unique connecting subarc (open curves). A metric on the curve.
inline double diameter_distance(const JordanCurve& curve, double x, double y) {
    if (curve.closed()) {
        x = curve.wrap_param(x);
        y = curve.wrap_param(y);
        if (x == y) return 0.0;
        return std::min(arc_diameter(curve, span_between(x, y)),
                        arc_diameter(curve, span_between(y, x)));
    }
    double a = std::min(x, y), b = std::max(x, y);
    if (a == b) return 0.0;
    return arc_diameter(curve, ArcSpan{a, b, false});
}

// Diameter distance between two vertices straight out of the table.
inline double vertex_diameter_distance(const JordanCurve& curve, std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    const DiamTable& t = curve.diam_table();
    std::size_t n = curve.size();
    if (i > j && !curve.closed()) std::swap(i, j);
    if (curve.closed()) {
        std::size_t k = (j + n - i) % n;               // vertices strictly after i through j
        double fwd = t.range(i, k + 1);
        double bwd = t.range(j, n - k + 1);
        return std::min(fwd, bwd);
    }
    return t.range(i, j - i + 1);
}

struct BtEstimate {
    double c = 1.0;
    double x = 0.0; // parameters of the attaining pair
    double y = 0.0;
};

// Supremum of diameter_distance / ambient distance over all vertex pairs plus
// `resolution` seeded random parameter pairs (default 4x vertex count).
inline BtEstimate bounded_turning_witness(const JordanCurve& curve, std::size_t resolution = 0,
                                          std::uint64_t seed = 0x62746573ull) {
    const std::size_t n = curve.size();
    if (resolution == 0) resolution = 4 * n;
    curve.diam_table();

    BtEstimate best;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = curve.vertex_distance(i, j);
            if (d < kPairCutoff) continue;
            double ratio = vertex_diameter_distance(curve, i, j) / d;
            if (ratio > best.c) best = {ratio, curve.param(i), curve.param(j)};
        }
    }

    const std::size_t chunk = 512;
    std::size_t nchunks = (resolution + chunk - 1) / chunk;
    std::vector<BtEstimate> partial(std::max<std::size_t>(nchunks, 1));
    for_each_chunk(resolution, chunk, [&](std::size_t cix, std::size_t begin, std::size_t end) {
        Rng rng(mix_seed(seed, cix));
        BtEstimate local;
        for (std::size_t s = begin; s < end; ++s) {
            double x = rng.uniform();
            double y = rng.uniform();
            double d = curve.distance(x, y);
            if (d < kPairCutoff) continue;
            double ratio = diameter_distance(curve, x, y) / d;
            if (ratio > local.c) local = {ratio, x, y};
        }
        partial[cix] = local;
    });
    for (const auto& p : partial)
        if (p.c > best.c) best = p;
    return best;
}

inline double bounded_turning_constant(const JordanCurve& curve, std::size_t resolution = 0,
                                       std::uint64_t seed = 0x62746573ull) {
    return bounded_turning_witness(curve, resolution, seed).c;
}

// Replaces the metric with the diameter distance on the vertex set. The
// result is an abstract-backend curve that is 1-bounded-turning.
inline JordanCurve remetrize_dd(const JordanCurve& curve) {
    const std::size_t n = curve.size();
    curve.diam_table();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = vertex_diameter_distance(curve, i, j);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    return make_curve_trusted(detail::TrustedMatrixTag{}, std::move(m), n, curve.closed());
}

} // namespace btparam
