#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "btparam/curve.hpp"
#include "btparam/dyadic.hpp"
#include "btparam/error.hpp"
#include "btparam/hierarchy.hpp"
#include "btparam/parametrization.hpp"
#include "btparam/sampling.hpp"

namespace btparam {

// Largest stored subdivision interval inside a circle interval [x,y].
struct DeltaQuery {
    double x = 0.0;
    double y = 0.0;
    std::size_t best_level = 0; // 1-based
    std::size_t best_index = 0;
    Dyadic delta;
    double delta_f64 = 0.0;
};

// Seed streams for the individual randomized checks, so every check draws
// from its own deterministic sequence regardless of which others run.
namespace stream {
inline constexpr std::uint64_t triangle = 1;
inline constexpr std::uint64_t diam_identity = 2;
inline constexpr std::uint64_t interval = 3;
inline constexpr std::uint64_t gap = 4;
inline constexpr std::uint64_t wqs_dd = 5;
inline constexpr std::uint64_t wqs_original = 6;
inline constexpr std::uint64_t bt_original = 7;
inline constexpr std::uint64_t bt_dd = 8;
inline constexpr std::uint64_t sym = 9;
} // namespace stream

// Answers delta queries over a fixed circle hierarchy. Per level a sparse
// table holds range maxima over interval lengths (ties to the smaller
// index), so a query costs O(log) for the boundary search and O(1) for the
// maximum. Levels whose float mirror is lossy fall back to an exact linear
// scan; that path cannot trigger at depths the builder accepts.
class DeltaIndex {
public:
    explicit DeltaIndex(const CircleHierarchy& circle) : circle_(&circle) {
        for (const CircleLevel& lv : circle.levels) {
            LevelIndex ix;
            ix.lengths_f64.reserve(lv.interval_count());
            for (const Dyadic& l : lv.lengths) ix.lengths_f64.push_back(l.to_double());
            ix.exact = lv.f64_exact;
            for (const Dyadic& l : lv.lengths) ix.exact = ix.exact && l.double_exact();
            build_table(ix);
            levels_.push_back(std::move(ix));
        }
    }

    std::optional<DeltaQuery> try_query(double x, double y) const {
        bool wraps = y < x;
        DeltaQuery best;
        best.x = x;
        best.y = y;
        bool found = false;
        for (std::size_t ix = 0; ix < levels_.size(); ++ix) {
            const CircleLevel& lv = circle_->levels[ix];
            const LevelIndex& li = levels_[ix];
            std::size_t n = lv.interval_count();
            // Interval j is contained iff bp[j] >= x and bp[j+1] <= y,
            // window-wise when the query wraps through 0.
            auto scan = [&](std::size_t j_begin, std::size_t j_end) { // inclusive bounds
                if (j_begin > j_end || j_end >= n) return;
                std::pair<double, std::size_t> m = li.range_max(j_begin, j_end);
                if (!found || m.first > best.delta_f64) {
                    best.best_level = ix + 1;
                    best.best_index = m.second;
                    best.delta = lv.lengths[m.second];
                    best.delta_f64 = m.first;
                    found = true;
                }
            };
            if (!li.exact) {
                exact_scan(lv, ix + 1, x, y, wraps, best, found);
                continue;
            }
            const std::vector<double>& bp = lv.breakpoints_f64;
            if (!wraps) {
                std::size_t j_lo = lower_index(bp, x);
                std::size_t b = upper_index(bp, y);
                if (b > 0) scan(j_lo, std::min(b - 1, n - 1));
            } else {
                std::size_t b = upper_index(bp, y);
                if (b > 0) scan(0, std::min(b - 1, n - 1)); // inside [0, y]
                std::size_t j_lo = lower_index(bp, x);
                scan(j_lo, n - 1); // inside [x, 1]
            }
        }
        if (!found) return std::nullopt;
        return best;
    }

    DeltaQuery query(double x, double y) const {
        auto q = try_query(x, y);
        if (!q)
            fail(errc::none_contained, "no stored interval inside [" + std::to_string(x) + ", " +
                                           std::to_string(y) + "]");
        return *q;
    }

    // Smallest stored interval length at the deepest level; checks sample at
    // 4x this scale or wider so truncation cannot skew them.
    double finest_length() const {
        const std::vector<double>& l = levels_.back().lengths_f64;
        return *std::min_element(l.begin(), l.end());
    }

private:
    struct LevelIndex {
        std::vector<double> lengths_f64;
        std::vector<std::vector<std::pair<double, std::size_t>>> table;
        bool exact = true;

        std::pair<double, std::size_t> range_max(std::size_t a, std::size_t b) const {
            std::size_t len = b - a + 1;
            std::size_t k = static_cast<std::size_t>(std::bit_width(len)) - 1;
            return pick(table[k][a], table[k][b + 1 - (std::size_t{1} << k)]);
        }

        static std::pair<double, std::size_t> pick(std::pair<double, std::size_t> u,
                                                   std::pair<double, std::size_t> v) {
            if (u.first != v.first) return u.first > v.first ? u : v;
            return u.second <= v.second ? u : v;
        }
    };

    static std::size_t lower_index(const std::vector<double>& bp, double x) {
        return static_cast<std::size_t>(std::lower_bound(bp.begin(), bp.end(), x) - bp.begin());
    }
    static std::size_t upper_index(const std::vector<double>& bp, double y) {
        // index of the last breakpoint <= y
        auto it = std::upper_bound(bp.begin(), bp.end(), y);
        return static_cast<std::size_t>(it - bp.begin()) - 1;
    }

    static void build_table(LevelIndex& ix) {
        std::size_t n = ix.lengths_f64.size();
        ix.table.emplace_back();
        ix.table[0].reserve(n);
        for (std::size_t j = 0; j < n; ++j) ix.table[0].emplace_back(ix.lengths_f64[j], j);
        for (std::size_t k = 1; (std::size_t{1} << k) <= n; ++k) {
            std::size_t span = std::size_t{1} << k;
            std::vector<std::pair<double, std::size_t>> row;
            row.reserve(n - span + 1);
            for (std::size_t j = 0; j + span <= n; ++j)
                row.push_back(LevelIndex::pick(ix.table[k - 1][j], ix.table[k - 1][j + span / 2]));
            ix.table.push_back(std::move(row));
        }
    }

    void exact_scan(const CircleLevel& lv, std::size_t level, double x, double y, bool wraps,
                    DeltaQuery& best, bool& found) const {
        Dyadic xd = Dyadic::from_double(x);
        Dyadic yd = Dyadic::from_double(y);
        for (std::size_t j = 0; j < lv.interval_count(); ++j) {
            bool in = wraps ? (lv.breakpoints[j] >= xd || lv.breakpoints[j + 1] <= yd)
                            : (lv.breakpoints[j] >= xd && lv.breakpoints[j + 1] <= yd);
            if (!in) continue;
            if (!found || best.delta < lv.lengths[j]) {
                best.best_level = level;
                best.best_index = j;
                best.delta = lv.lengths[j];
                best.delta_f64 = lv.lengths[j].to_double();
                found = true;
            }
        }
    }

    const CircleHierarchy* circle_;
    std::vector<LevelIndex> levels_;
};

inline std::optional<DeltaQuery> try_largest_contained_interval(const CircleHierarchy& circle,
                                                                double x, double y) {
    return DeltaIndex(circle).try_query(x, y);
}

inline DeltaQuery largest_contained_interval(const CircleHierarchy& circle, double x, double y) {
    return DeltaIndex(circle).query(x, y);
}

struct IntervalEstimateReport {
    double max_ratio = 0.0; // interval length over delta, over used samples
    std::size_t used = 0;
    std::size_t skipped = 0;
    bool covering_ok = true; // every sample sat inside two intersecting parent intervals
    double worst_x = 0.0;
    double worst_len = 0.0;
    double guard = 0.0;
};

namespace detail {

// Does [x,y] sit inside the union of the interval containing x and the one
// after it, one level above `level`? Level 1 is covered by the whole circle.
inline bool parents_cover(const CircleHierarchy& circle, std::size_t level, double x, double y,
                          bool closed) {
    if (level <= 1) return true;
    const CircleLevel& up = circle.levels[level - 2];
    std::size_t n = up.interval_count();
    std::size_t a = locate_interval(up, x);
    std::size_t b = locate_interval(up, y);
    auto ok = [&](std::size_t c) {
        std::size_t fwd = closed ? (c + n - a) % n : (c >= a ? c - a : n);
        return fwd <= 1;
    };
    if (ok(b)) return true;
    // y exactly on a breakpoint also belongs to the interval ending there
    if (b > 0 && up.breakpoints_f64[b] == y && ok(b - 1)) return true;
    if (closed && b == 0 && up.breakpoints_f64[0] == y && ok(n - 1)) return true;
    return false;
}

} // namespace detail

// Samples circle intervals above the truncation guard and checks that the
// largest contained subdivision interval is never more than 12 times shorter,
// and that two intersecting intervals one level up cover the sample.
inline IntervalEstimateReport check_interval_estimate(const CircleHierarchy& circle,
                                                      std::size_t samples, std::uint64_t seed) {
    DeltaIndex index(circle);
    IntervalEstimateReport rep;
    rep.guard = 4.0 * index.finest_length();
    const bool closed = circle.closed;
    const double lo = std::log(rep.guard), hi = std::log(0.5);
    if (!(rep.guard < 0.5)) {
        rep.skipped = samples;
        return rep;
    }

    struct Local {
        double max_ratio = -1.0;
        double worst_x = 0.0, worst_len = 0.0;
        std::size_t used = 0, skipped = 0;
        bool covering_ok = true;
    };
    const std::size_t chunk = 256;
    std::vector<Local> locals((samples + chunk - 1) / chunk + 1);
    for_each_chunk(samples, chunk, [&](std::size_t cix, std::size_t begin, std::size_t end) {
        Rng rng(mix_seed(seed, mix_seed(stream::interval, cix)));
        Local& L = locals[cix];
        for (std::size_t s = begin; s < end; ++s) {
            double len = std::exp(rng.uniform(lo, hi));
            double x, y;
            if (closed) {
                x = rng.uniform();
                y = x + len;
                if (y >= 1.0) y -= 1.0;
            } else {
                x = rng.uniform(0.0, 1.0 - len);
                y = x + len;
            }
            auto q = index.try_query(x, y);
            if (!q) {
                L.skipped++;
                continue;
            }
            L.used++;
            double ratio = len / q->delta_f64;
            if (ratio > L.max_ratio) {
                L.max_ratio = ratio;
                L.worst_x = x;
                L.worst_len = len;
            }
            L.covering_ok =
                L.covering_ok && detail::parents_cover(circle, q->best_level, x, y, closed);
        }
    });
    for (const Local& L : locals) {
        rep.used += L.used;
        rep.skipped += L.skipped;
        rep.covering_ok = rep.covering_ok && L.covering_ok;
        if (L.max_ratio > rep.max_ratio) {
            rep.max_ratio = L.max_ratio;
            rep.worst_x = L.worst_x;
            rep.worst_len = L.worst_len;
        }
    }
    return rep;
}

struct GapReport {
    std::size_t max_gap = 0;
    std::size_t used = 0;
    std::size_t skipped = 0;
    double guard = 0.0;
};

// Levels of the largest intervals contained in [x-t, x] and [x, x+t] differ
// by a bounded amount; sampled form.
inline GapReport check_level_gap(const CircleHierarchy& circle, std::size_t samples,
                                 std::uint64_t seed) {
    DeltaIndex index(circle);
    GapReport rep;
    rep.guard = 4.0 * index.finest_length();
    const bool closed = circle.closed;
    if (!(rep.guard < 0.5)) {
        rep.skipped = samples;
        return rep;
    }
    const double lo = std::log(rep.guard), hi = std::log(0.5);

    struct Local {
        std::size_t max_gap = 0, used = 0, skipped = 0;
    };
    const std::size_t chunk = 256;
    std::vector<Local> locals((samples + chunk - 1) / chunk + 1);
    for_each_chunk(samples, chunk, [&](std::size_t cix, std::size_t begin, std::size_t end) {
        Rng rng(mix_seed(seed, mix_seed(stream::gap, cix)));
        Local& L = locals[cix];
        for (std::size_t s = begin; s < end; ++s) {
            double t = std::exp(rng.uniform(lo, hi));
            double x;
            if (closed) {
                x = rng.uniform();
            } else {
                if (1.0 - 2.0 * t <= 0.0) {
                    L.skipped++;
                    continue;
                }
                x = rng.uniform(t, 1.0 - t);
            }
            double xl = x - t, xr = x + t;
            if (closed) {
                if (xl < 0.0) xl += 1.0;
                if (xr >= 1.0) xr -= 1.0;
            }
            auto left = index.try_query(xl, x);
            auto right = index.try_query(x, xr);
            if (!left || !right) {
                L.skipped++;
                continue;
            }
            L.used++;
            std::size_t gap = left->best_level > right->best_level
                                  ? left->best_level - right->best_level
                                  : right->best_level - left->best_level;
            L.max_gap = std::max(L.max_gap, gap);
        }
    });
    for (const Local& L : locals) {
        rep.used += L.used;
        rep.skipped += L.skipped;
        rep.max_gap = std::max(rep.max_gap, L.max_gap);
    }
    return rep;
}

// Exhaustive variant anchored at stored breakpoints: every deepest-level
// breakpoint pair defines a half-width t, and both one-sided intervals at the
// anchor are queried. These are the extremal configurations.
inline GapReport check_level_gap_exhaustive(const CircleHierarchy& circle) {
    DeltaIndex index(circle);
    GapReport rep;
    rep.guard = 4.0 * index.finest_length();
    const bool closed = circle.closed;
    const CircleLevel& deep = circle.levels.back();
    std::size_t n_pts = deep.interval_count() + (closed ? 0 : 1);

    std::vector<GapReport> locals(n_pts);
    for_each_chunk(n_pts, 8, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            GapReport& L = locals[i];
            double x = deep.breakpoints_f64[i];
            for (std::size_t k = 0; k < n_pts; ++k) {
                if (k == i) continue;
                double other = deep.breakpoints_f64[k];
                double t = closed ? lambda_metric(x, other) : std::abs(other - x);
                if (t < rep.guard || t > 0.5) {
                    L.skipped++;
                    continue;
                }
                double xl = x - t, xr = x + t;
                if (closed) {
                    if (xl < 0.0) xl += 1.0;
                    if (xr >= 1.0) xr -= 1.0;
                } else if (xl < 0.0 || xr > 1.0) {
                    L.skipped++;
                    continue;
                }
                auto left = index.try_query(xl, x);
                auto right = index.try_query(x, xr);
                if (!left || !right) {
                    L.skipped++;
                    continue;
                }
                L.used++;
                std::size_t gap = left->best_level > right->best_level
                                      ? left->best_level - right->best_level
                                      : right->best_level - left->best_level;
                L.max_gap = std::max(L.max_gap, gap);
            }
        }
    });
    for (const GapReport& L : locals) {
        rep.used += L.used;
        rep.skipped += L.skipped;
        rep.max_gap = std::max(rep.max_gap, L.max_gap);
    }
    return rep;
}

// Same-level separation: if one interval is at least 2^(i+1) times longer
// for some i >= 1, the two must be at least 2^i short-lengths apart. Checked
// in exact arithmetic over all same-level pairs, at the largest applicable i.
inline bool check_gap_claim(const CircleHierarchy& circle) {
    for (const CircleLevel& lv : circle.levels) {
        std::size_t n = lv.interval_count();
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                const Dyadic &a = lv.lengths[j], &b = lv.lengths[k];
                const Dyadic& small = (a < b) ? a : b;
                const Dyadic& big = (a < b) ? b : a;
                Dyadic thresh = small + small;
                thresh = thresh + thresh; // 2^(i+1) * small at i = 1
                if (big < thresh) continue;
                Dyadic need = small + small; // 2^i * small at i = 1
                while (true) {
                    Dyadic next = thresh + thresh;
                    if (big < next) break;
                    thresh = next;
                    need = need + need;
                }
                Dyadic fwd = lv.breakpoints[k] - lv.breakpoints[j + 1];
                Dyadic dist = fwd;
                if (circle.closed) {
                    Dyadic bwd = (Dyadic::one() - lv.breakpoints[k + 1]) + lv.breakpoints[j];
                    dist = (bwd < fwd) ? bwd : fwd;
                }
                if (dist < need) return false;
            }
        }
    }
    return true;
}

enum class WqsMetric { dd, original };

struct DomainTriple {
    double x = 0.0, y = 0.0, z = 0.0;
};

struct WqsReport {
    double h_emp = 1.0; // y = z triples pin the supremum at >= 1
    double h_sym = 0.0; // one-sided image arc-diameter ratios (dd)
    std::size_t used = 0;
    std::size_t skipped = 0;
    DomainTriple worst;
    double guard = 0.0;
};

namespace detail {

inline double wrap_unit(double v) {
    v -= std::floor(v);
    return v == 1.0 ? 0.0 : v;
}

inline double image_distance(const Parametrization& p, WqsMetric metric, double a, double b) {
    return metric == WqsMetric::dd ? diameter_distance(p.curve, a, b) : p.curve.distance(a, b);
}

// dd-diameter of the image of the positively oriented domain interval [a, b].
inline double image_arc_diameter(const Parametrization& p, double a, double b) {
    double pa = phi_eval(p, a).curve_param;
    double pb = phi_eval(p, b).curve_param;
    if (p.curve.closed()) {
        if (pa == pb) return 0.0;
        return arc_diameter(p.curve, span_between(pa, pb));
    }
    return arc_diameter(p.curve, ArcSpan{std::min(pa, pb), std::max(pa, pb), false});
}

} // namespace detail

// Empirical weak-quasisymmetry constant of phi: over triples with
// lambda(x,y) <= lambda(x,z), the supremum of image ratio |fx-fy| / |fx-fz|.
// Draws random triples plus mirrored breakpoint-anchored ones, and accepts
// extra caller-supplied triples (used to pin the turning-constant witnesses).
inline WqsReport measure_weak_qs(const Parametrization& p, WqsMetric metric,
                                 std::size_t samples = 10000, std::uint64_t seed = 0,
                                 const std::vector<DomainTriple>& extras = {}) {
    WqsReport rep;
    const CircleLevel& deep = p.circle.levels.back();
    double finest = deep.lengths[0].to_double();
    for (const Dyadic& l : deep.lengths) finest = std::min(finest, l.to_double());
    rep.guard = 4.0 * finest;
    const bool closed = p.curve.closed();
    const double diam = p.gamma.curve_diameter;
    const double cutoff = 1e-12 * diam;
    const double lo = std::log(rep.guard), hi = std::log(0.5);
    const std::uint64_t ms =
        mix_seed(seed, metric == WqsMetric::dd ? stream::wqs_dd : stream::wqs_original);

    struct Local {
        double h = 1.0;
        DomainTriple worst;
        std::size_t used = 0, skipped = 0;
    };

    auto consider = [&](Local& L, double x, double y, double z) {
        double ly = p.domain_distance(x, y);
        double lz = p.domain_distance(x, z);
        if (ly > lz) return; // not a valid triple
        double px = phi_eval(p, x).curve_param;
        double py = phi_eval(p, y).curve_param;
        double pz = phi_eval(p, z).curve_param;
        double denom = detail::image_distance(p, metric, px, pz);
        if (denom < cutoff) {
            L.skipped++;
            return;
        }
        L.used++;
        double r = detail::image_distance(p, metric, px, py) / denom;
        if (r > L.h) {
            L.h = r;
            L.worst = {x, y, z};
        }
    };

    const std::size_t chunk = 256;
    std::size_t nchunks = (samples + chunk - 1) / chunk + 1;
    std::vector<Local> locals(nchunks);
    for_each_chunk(samples, chunk, [&](std::size_t cix, std::size_t begin, std::size_t end) {
        Rng rng(mix_seed(ms, cix));
        Local& L = locals[cix];
        for (std::size_t s = begin; s < end; ++s) {
            double lz = std::exp(rng.uniform(lo, hi));
            double ly = rng.uniform() * lz;
            double x, y, z;
            if (closed) {
                x = rng.uniform();
                y = detail::wrap_unit(x + (rng.coin() ? ly : -ly));
                z = detail::wrap_unit(x + (rng.coin() ? lz : -lz));
            } else {
                x = rng.uniform();
                y = x + (rng.coin() ? ly : -ly);
                z = x + (rng.coin() ? lz : -lz);
                if (y < 0.0 || y > 1.0 || z < 0.0 || z > 1.0) {
                    L.skipped++;
                    continue;
                }
            }
            consider(L, x, y, z);
        }
    });

    // Mirrored anchors: x at a breakpoint, y and z reflected through it at
    // equal distance. Both orientations qualify, which makes these the
    // natural extremal family for the symmetric form as well.
    std::size_t n_pts = deep.interval_count() + (closed ? 0 : 1);
    std::size_t budget = std::max<std::size_t>(samples, 1);
    std::size_t stride = std::max<std::size_t>(1, (n_pts * n_pts) / budget);
    Local anchored;
    double h_sym = 0.0;
    std::size_t pair_ix = 0;
    for (std::size_t i = 0; i < n_pts; ++i) {
        for (std::size_t k = 0; k < n_pts; ++k) {
            if (k == i || (pair_ix++ % stride) != 0) continue;
            double x = deep.breakpoints_f64[i];
            double other = deep.breakpoints_f64[k];
            double t = closed ? lambda_metric(x, other) : std::abs(other - x);
            if (t < rep.guard || t > 0.5) continue;
            double mirror = closed ? detail::wrap_unit(2.0 * x - other) : 2.0 * x - other;
            if (!closed && (mirror < 0.0 || mirror > 1.0)) continue;
            consider(anchored, x, other, mirror);
            consider(anchored, x, mirror, other);

            double left = detail::image_arc_diameter(p, closed ? detail::wrap_unit(x - t) : x - t, x);
            double right = detail::image_arc_diameter(p, x, closed ? detail::wrap_unit(x + t) : x + t);
            if (left > cutoff && right > cutoff)
                h_sym = std::max(h_sym, std::max(left / right, right / left));
        }
    }

    Local total;
    for (const Local& L : locals) {
        total.used += L.used;
        total.skipped += L.skipped;
        if (L.h > total.h) {
            total.h = L.h;
            total.worst = L.worst;
        }
    }
    total.used += anchored.used;
    total.skipped += anchored.skipped;
    if (anchored.h > total.h) {
        total.h = anchored.h;
        total.worst = anchored.worst;
    }
    Local ex;
    for (const DomainTriple& t : extras) consider(ex, t.x, t.y, t.z);
    total.used += ex.used;
    total.skipped += ex.skipped;
    if (ex.h > total.h) {
        total.h = ex.h;
        total.worst = ex.worst;
    }

    rep.h_emp = total.h;
    rep.h_sym = h_sym;
    rep.used = total.used;
    rep.skipped = total.skipped;
    rep.worst = total.worst;
    return rep;
}

struct BtConsistency {
    double implied_c = 0.0;
    bool pass = false;
};

// A weak-quasisymmetry constant H forces the turning constant down to
// min{2H, H^2}; the measured constant must respect that.
inline BtConsistency check_bt_from_wqs(double h, double c_measured, double tol = 1e-6) {
    if (h < 1.0) fail(errc::bad_constant, "weak-quasisymmetry constant below 1");
    BtConsistency out;
    out.implied_c = std::min(2.0 * h, h * h);
    out.pass = c_measured <= out.implied_c + tol;
    return out;
}

struct CertifyConfig {
    std::size_t depth = 4;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    std::size_t resolution = 0; // random pair count for turning constants; 0 -> samples
};

struct ModulusSummary {
    std::size_t level = 0;
    double max_image_distance = 0.0;
    double bound = 0.0;
    std::size_t pairs = 0;
    bool adjacent_ok = true;
};

struct CertificationReport {
    std::size_t vertex_count = 0;
    bool closed = true;
    std::size_t depth = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t resolution = 0;

    double curve_diameter = 0.0;
    double c_original = 0.0;
    double c_dd = 0.0;
    double dd_triangle_max_violation = 0.0; // relative to the curve diameter
    double dd_diam_identity_max_error = 0.0;

    double level1_min_norm = 0.0; // first-level diameters over the curve diameter
    double level1_max_norm = 0.0;
    double same_level_min_ratio = 0.0;
    double same_level_max_ratio = 0.0;
    double child_parent_min_ratio = 0.0;
    double child_parent_max_ratio = 0.0;
    std::size_t min_child_count = 0;

    std::vector<ModulusSummary> modulus;

    double max_ratio_lemma6 = 0.0;
    std::size_t interval_used = 0;
    std::size_t interval_skipped = 0;

    std::size_t max_level_gap = 0;
    std::size_t gap_used = 0;
    std::size_t gap_skipped = 0;
    bool exhaustive_gap_checked = false;
    std::size_t max_level_gap_exhaustive = 0;

    double h_emp_dd = 0.0;
    double h_emp_original = 0.0;
    double h_sym = 0.0;
    double h_bound = 4194304.0; // 32 * 2 * 16^4
    double eq4_implied_dd = 0.0;
    double eq4_implied_original = 0.0;
    std::size_t wqs_used_dd = 0;
    std::size_t wqs_skipped_dd = 0;
    std::size_t wqs_used_original = 0;
    std::size_t wqs_skipped_original = 0;

    std::map<std::string, bool> pass_flags;
    std::vector<std::string> errors;

    bool all_pass() const {
        if (!errors.empty()) return false;
        for (const auto& [name, ok] : pass_flags)
            if (!ok) return false;
        return !pass_flags.empty();
    }
};

namespace detail {

// Domain parameter of the deepest breakpoint whose image is nearest (in
// curve parameter) to a given point; used to express turning-constant
// witnesses as domain triples.
inline double nearest_breakpoint_domain(const Parametrization& p, double curve_param) {
    const std::vector<double>& img = p.gamma.levels.back().endpoints;
    const std::vector<double>& dom = p.circle.levels.back().breakpoints_f64;
    auto it = std::lower_bound(img.begin(), img.end(), curve_param);
    std::size_t hi = static_cast<std::size_t>(it - img.begin());
    std::size_t best = 0;
    double best_d = 2.0;
    for (std::size_t c : {hi > 0 ? hi - 1 : 0, std::min(hi, img.size() - 1)}) {
        double d = std::abs(img[c] - curve_param);
        if (p.curve.closed()) d = std::min(d, 1.0 - d);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    double s = dom[best];
    return (p.curve.closed() && s >= 1.0) ? 0.0 : s;
}

// Triples built from the turning-constant witness pair and the diameter
// witness of its smaller arc: walking the chain endpoint -> diameter pair ->
// endpoint keeps the empirical H large enough that min{2H, H^2} stays above
// the measured C.
inline std::vector<DomainTriple> witness_triples(const Parametrization& p,
                                                 const BtEstimate& w) {
    std::vector<DomainTriple> out;
    if (!p.curve.closed()) return out;
    double a = nearest_breakpoint_domain(p, w.x);
    double b = nearest_breakpoint_domain(p, w.y);
    if (a == b) return out;
    double ia = phi_eval(p, a).curve_param;
    double ib = phi_eval(p, b).curve_param;
    if (ia == ib) return out;
    ArcDiameterWitness dw = arc_diameter_witness(p.curve, smaller_arc(p.curve, ia, ib));
    double s = nearest_breakpoint_domain(p, dw.p);
    double t = nearest_breakpoint_domain(p, dw.q);
    for (double mid : {s, t}) {
        out.push_back({a, mid, b});
        out.push_back({b, mid, a});
    }
    out.push_back({s, t, b});
    out.push_back({t, s, b});
    out.push_back({s, t, a});
    out.push_back({t, s, a});
    out.push_back({a, b, b});
    return out;
}

} // namespace detail

// Runs the full pipeline on one curve and aggregates every check into a
// report. Stage failures are recorded and downstream flags stay false; the
// remaining independent checks still run.
inline CertificationReport certify(const JordanCurve& curve, const CertifyConfig& cfg = {}) {
    CertificationReport rep;
    rep.vertex_count = curve.size();
    rep.closed = curve.closed();
    rep.depth = cfg.depth;
    rep.samples = cfg.samples;
    rep.seed = cfg.seed;
    rep.resolution = cfg.resolution ? cfg.resolution : cfg.samples;
    auto& flags = rep.pass_flags;

    auto stage = [&](const char* name, auto&& fn) {
        try {
            fn();
            return true;
        } catch (const Error& e) {
            rep.errors.push_back(std::string(name) + ": " + e.what());
            return false;
        }
    };

    // Metric layer.
    stage("metric", [&] {
        rep.curve_diameter = arc_diameter(curve, full_span());
        rep.c_original =
            bounded_turning_constant(curve, rep.resolution, mix_seed(cfg.seed, stream::bt_original));
        JordanCurve dd_curve = remetrize_dd(curve);
        rep.c_dd =
            bounded_turning_constant(dd_curve, rep.resolution, mix_seed(cfg.seed, stream::bt_dd));
        flags["dd_unit_bt"] = rep.c_dd >= 1.0 && rep.c_dd <= 1.0 + cfg.tol;

        Rng rng(mix_seed(cfg.seed, stream::triangle));
        double viol = 0.0;
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            double x = rng.uniform(), y = rng.uniform(), z = rng.uniform();
            double d = diameter_distance(curve, x, z) - diameter_distance(curve, x, y) -
                       diameter_distance(curve, y, z);
            viol = std::max(viol, d / rep.curve_diameter);
        }
        rep.dd_triangle_max_violation = viol;
        flags["dd_triangle"] = viol <= 1e-9;

        Rng rng2(mix_seed(cfg.seed, stream::diam_identity));
        const DiamTable& table = curve.diam_table();
        double err = 0.0;
        std::size_t n_sub = std::max<std::size_t>(1, cfg.samples / 10);
        for (std::size_t s = 0; s < n_sub; ++s) {
            double start = curve.closed() ? rng2.uniform() : 0.0;
            double len = rng2.uniform(0.01, curve.closed() ? 1.0 : 0.99);
            ArcSpan span;
            if (curve.closed()) {
                double end = start + len;
                span = detail::unrolled_span(start, end);
            } else {
                start = rng2.uniform(0.0, 1.0 - len);
                span = ArcSpan{start, start + len, false};
            }
            ArcDiameterWitness w = arc_diameter_witness(curve, span);
            if (w.value <= 0.0) continue;
            // dd between the attaining pair equals the plain diameter; no
            // vertex pair inside may exceed it.
            double dd_at = diameter_distance(curve, w.p, w.q);
            double m = dd_at;
            VertexRange r = curve.vertices_in(span);
            for (std::size_t ai = 0; ai < r.count; ++ai)
                for (std::size_t bi = ai + 1; bi < r.count; ++bi)
                    m = std::max(m, vertex_diameter_distance(curve,
                                                             (r.first + ai) % curve.size(),
                                                             (r.first + bi) % curve.size()));
            err = std::max(err, std::abs(m - w.value) / w.value);
        }
        rep.dd_diam_identity_max_error = err;
        flags["dd_diam_identity"] = err <= 1e-9;
    });

    // Hierarchies and the map.
    std::optional<Parametrization> built_p;
    bool built = stage("parametrization", [&] {
        built_p.emplace(build_parametrization(curve, cfg.depth, cfg.tol));
    });
    if (!built) return rep;
    const Parametrization& p = *built_p;

    stage("hierarchy", [&] {
        const GammaHierarchy& g = p.gamma;
        double diam = g.curve_diameter;
        const GammaLevel& l1 = g.levels[0];
        rep.level1_min_norm = *std::min_element(l1.diameters.begin(), l1.diameters.end()) / diam;
        rep.level1_max_norm = *std::max_element(l1.diameters.begin(), l1.diameters.end()) / diam;
        flags["hierarchy_level1_range"] = rep.level1_min_norm >= 0.125 - cfg.tol &&
                                          rep.level1_max_norm <= 0.25 + cfg.tol;

        rep.same_level_min_ratio = 1.0;
        rep.same_level_max_ratio = 1.0;
        for (const GammaLevel& lv : g.levels) {
            double lo_d = *std::min_element(lv.diameters.begin(), lv.diameters.end());
            double hi_d = *std::max_element(lv.diameters.begin(), lv.diameters.end());
            rep.same_level_min_ratio = std::min(rep.same_level_min_ratio, lo_d / hi_d);
            rep.same_level_max_ratio = std::max(rep.same_level_max_ratio, hi_d / lo_d);
        }
        flags["hierarchy_same_level_ratio"] = rep.same_level_min_ratio >= 0.5 - cfg.tol &&
                                              rep.same_level_max_ratio <= 2.0 + cfg.tol;

        rep.child_parent_min_ratio = 0.25;
        rep.child_parent_max_ratio = 0.0625;
        rep.min_child_count = SIZE_MAX;
        for (std::size_t ix = 0; ix + 1 < g.depth(); ++ix) {
            double plo = *std::min_element(g.levels[ix].diameters.begin(),
                                           g.levels[ix].diameters.end());
            double phi_d = *std::max_element(g.levels[ix].diameters.begin(),
                                             g.levels[ix].diameters.end());
            double clo = *std::min_element(g.levels[ix + 1].diameters.begin(),
                                           g.levels[ix + 1].diameters.end());
            double chi = *std::max_element(g.levels[ix + 1].diameters.begin(),
                                           g.levels[ix + 1].diameters.end());
            rep.child_parent_min_ratio = std::min(rep.child_parent_min_ratio, clo / phi_d);
            rep.child_parent_max_ratio = std::max(rep.child_parent_max_ratio, chi / plo);
            for (std::size_t c : g.levels[ix].child_counts)
                rep.min_child_count = std::min(rep.min_child_count, c);
        }
        if (g.depth() == 1) rep.min_child_count = g.levels[0].arc_count();
        flags["hierarchy_child_parent_ratio"] =
            g.depth() == 1 || (rep.child_parent_min_ratio >= 0.0625 - cfg.tol &&
                               rep.child_parent_max_ratio <= 0.25 + cfg.tol);
        flags["hierarchy_child_counts"] = rep.min_child_count >= 4;
    });

    stage("circle", [&] {
        const CircleHierarchy& c = p.circle;
        bool sums = true, ratios = true, quarter = true, iso = c.depth() == p.gamma.depth();
        for (std::size_t ix = 0; ix < c.depth(); ++ix) {
            const CircleLevel& lv = c.levels[ix];
            std::size_t n = lv.interval_count();
            iso = iso && n == p.gamma.levels[ix].arc_count() &&
                  lv.parent == p.gamma.levels[ix].parent;
            Dyadic sum = Dyadic::zero();
            for (const Dyadic& l : lv.lengths) sum = sum + l;
            sums = sums && sum == Dyadic::one();
            for (std::size_t j = 0; j + 1 < n; ++j) {
                const Dyadic &u = lv.lengths[j], &v = lv.lengths[j + 1];
                ratios = ratios && (u == v || u + u == v || v + v == u);
            }
            if (c.closed && n > 1) {
                const Dyadic &u = lv.lengths[n - 1], &v = lv.lengths[0];
                ratios = ratios && (u == v || u + u == v || v + v == u);
            }
            if (ix > 0) {
                const CircleLevel& up = c.levels[ix - 1];
                Dyadic acc = Dyadic::zero();
                std::size_t prev_parent = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    std::size_t par = lv.parent[j];
                    Dyadic quad = lv.lengths[j] + lv.lengths[j]; // 4 * child, exactly
                    quad = quad + quad;
                    quarter = quarter && quad <= up.lengths[par];
                    if (par != prev_parent) {
                        sums = sums && acc == up.lengths[prev_parent];
                        acc = Dyadic::zero();
                        prev_parent = par;
                    }
                    acc = acc + lv.lengths[j];
                }
                sums = sums && acc == up.lengths[prev_parent];
            }
        }
        flags["circle_exact_sums"] = sums;
        flags["circle_neighbor_ratios"] = ratios;
        flags["circle_quarter_rule"] = quarter;
        flags["circle_gamma_isomorphic"] = iso;
    });

    stage("phi", [&] {
        bool increasing = true;
        for (const GammaLevel& lv : p.gamma.levels)
            for (std::size_t i = 1; i < lv.endpoints.size(); ++i)
                increasing = increasing && lv.endpoints[i] > lv.endpoints[i - 1];
        flags["phi_well_defined"] = true; // build_parametrization verifies shared breakpoints
        flags["phi_injective"] = increasing;
        flags["phi_cyclic_order"] = increasing;
        double dense_bound =
            std::pow(0.25, static_cast<double>(cfg.depth) - 1.0) * p.gamma.curve_diameter;
        flags["phi_dense"] = p.deepest_max_diameter <= dense_bound * (1.0 + cfg.tol);
    });

    stage("modulus", [&] {
        bool adjacent = true;
        for (std::size_t level = 1; level <= std::min<std::size_t>(2, cfg.depth); ++level) {
            ModulusReport m = modulus_check(p, level, cfg.samples);
            ModulusSummary s;
            s.level = level;
            s.max_image_distance = m.max_image_distance;
            s.bound = m.bound;
            s.pairs = m.pairs;
            s.adjacent_ok = m.adjacent_ok;
            rep.modulus.push_back(s);
            flags["modulus_level" + std::to_string(level)] =
                m.max_image_distance <= m.bound * (1.0 + 1e-12);
            adjacent = adjacent && m.adjacent_ok;
        }
        flags["modulus_adjacent"] = adjacent;
    });

    stage("interval_estimate", [&] {
        IntervalEstimateReport r = check_interval_estimate(p.circle, cfg.samples, cfg.seed);
        rep.max_ratio_lemma6 = r.max_ratio;
        rep.interval_used = r.used;
        rep.interval_skipped = r.skipped;
        flags["interval_ratio_12"] = r.used > 0 && r.max_ratio <= 12.0 * (1.0 + 1e-12);
        flags["interval_covering"] = r.covering_ok;
    });

    stage("level_gap", [&] {
        GapReport r = check_level_gap(p.circle, cfg.samples, cfg.seed);
        rep.max_level_gap = r.max_gap;
        rep.gap_used = r.used;
        rep.gap_skipped = r.skipped;
        bool ok = r.used > 0 && r.max_gap <= 4;
        if (cfg.depth <= 3) {
            GapReport ex = check_level_gap_exhaustive(p.circle);
            rep.exhaustive_gap_checked = true;
            rep.max_level_gap_exhaustive = ex.max_gap;
            ok = ok && ex.max_gap <= 4;
        }
        flags["level_gap_4"] = ok;
        flags["gap_claim"] = check_gap_claim(p.circle);
    });

    stage("weak_qs", [&] {
        std::vector<DomainTriple> anchors;
        if (curve.closed()) {
            BtEstimate w = bounded_turning_witness(curve, rep.resolution,
                                                   mix_seed(cfg.seed, stream::bt_original));
            anchors = detail::witness_triples(p, w);
        }
        WqsReport dd = measure_weak_qs(p, WqsMetric::dd, cfg.samples, cfg.seed, anchors);
        WqsReport orig = measure_weak_qs(p, WqsMetric::original, cfg.samples, cfg.seed, anchors);
        rep.h_emp_dd = dd.h_emp;
        rep.h_emp_original = orig.h_emp;
        rep.h_sym = dd.h_sym;
        rep.wqs_used_dd = dd.used;
        rep.wqs_skipped_dd = dd.skipped;
        rep.wqs_used_original = orig.used;
        rep.wqs_skipped_original = orig.skipped;
        flags["wqs_dd_bound"] = dd.h_emp <= rep.h_bound;
        flags["wqs_sym_bound"] = dd.h_sym <= rep.h_bound;
        flags["bilip_transfer"] =
            orig.h_emp <= rep.h_bound * rep.c_original * rep.c_original * (1.0 + 1e-12);

        BtConsistency e4d = check_bt_from_wqs(dd.h_emp, rep.c_dd, cfg.tol);
        BtConsistency e4o = check_bt_from_wqs(orig.h_emp, rep.c_original, cfg.tol);
        rep.eq4_implied_dd = e4d.implied_c;
        rep.eq4_implied_original = e4o.implied_c;
        flags["eq4_dd"] = e4d.pass;
        flags["eq4_original"] = e4o.pass;
    });

    return rep;
}

} // namespace btparam
