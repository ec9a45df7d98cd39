#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <btparam/curve.hpp>
#include <btparam/generators.hpp>
#include <btparam/sampling.hpp>
#include <btparam/verification.hpp>

using btparam::ArcSpan;
using btparam::Error;
using btparam::errc;
using btparam::JordanCurve;

namespace {

// Unit square boundary sampled so the extremal pair for the turning constant
// sits exactly on vertices: x = (3 - sqrt 5)/2 on the bottom edge and its
// mirror on the top. Extra collinear vertices do not change the point set,
// so the discrete vertex-pair supremum equals the true constant.
JordanCurve dense_square(std::size_t per_side) {
    const double a = (3.0 - std::sqrt(5.0)) / 2.0;
    std::vector<double> xs;
    for (std::size_t k = 0; k < per_side; ++k)
        xs.push_back(static_cast<double>(k) / static_cast<double>(per_side));
    xs.push_back(a);
    xs.push_back(1.0 - a);
    std::sort(xs.begin(), xs.end());
    std::vector<std::vector<double>> pts;
    for (double x : xs) pts.push_back({x, 0.0});
    for (double x : xs) pts.push_back({1.0, x});
    for (double x : xs) pts.push_back({1.0 - x, 1.0});
    for (double x : xs) pts.push_back({0.0, 1.0 - x});
    return btparam::curve_from_points(pts, true);
}

JordanCurve hexagon_matrix() {
    const double r3 = std::sqrt(3.0);
    std::vector<std::vector<double>> m(6, std::vector<double>(6, 0.0));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            int k = std::min(std::abs(i - j), 6 - std::abs(i - j));
            m[i][j] = (k == 0) ? 0.0 : (k == 1) ? 1.0 : (k == 2) ? r3 : 2.0;
        }
    return btparam::curve_from_distance_matrix(m, true);
}

} // namespace

TEST_CASE("square turning constant equals the golden-ratio value") {
    const double target = (1.0 + std::sqrt(5.0)) / (2.0 * std::sqrt(2.0));
    JordanCurve sq = dense_square(50);
    btparam::BtEstimate est = btparam::bounded_turning_witness(
        sq, 64, btparam::mix_seed(7, btparam::stream::bt_original));
    CHECK(est.c >= target - 1e-9);
    CHECK(est.c <= target + 1e-9);
    CHECK(sq.diameter() == Catch::Approx(std::sqrt(2.0)).margin(1e-12));

    // The plain four-corner square covers the same point set, so no sampled
    // pair may ever exceed the supremum.
    double c4 = btparam::bounded_turning_constant(
        btparam::make_square(), 4000, btparam::mix_seed(7, btparam::stream::bt_original));
    CHECK(c4 <= target + 1e-9);
    CHECK(c4 >= 1.0);
}

TEST_CASE("straight segment has turning constant one") {
    double c = btparam::bounded_turning_constant(btparam::make_segment(17), 2000, 5);
    CHECK(c >= 1.0);
    CHECK(c <= 1.0 + 1e-9);
}

TEST_CASE("diameter distance is symmetric and satisfies the triangle bound") {
    JordanCurve k = btparam::make_koch(2);
    double diam = k.diameter();
    btparam::Rng rng(99);
    for (int i = 0; i < 2000; ++i) {
        double x = rng.uniform(), y = rng.uniform(), z = rng.uniform();
        if (x == y || y == z || x == z) continue;
        double dxy = btparam::diameter_distance(k, x, y);
        CHECK(dxy == btparam::diameter_distance(k, y, x));
        double dyz = btparam::diameter_distance(k, y, z);
        double dxz = btparam::diameter_distance(k, x, z);
        CHECK(dxz <= dxy + dyz + 1e-9 * diam);
        CHECK(dxy >= k.distance(x, y)); // an arc never beats the chord
    }
}

TEST_CASE("vertex diameter distance equals the smaller-arc diameter") {
    JordanCurve oct = btparam::make_regular_polygon(8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            if (i == j) continue;
            ArcSpan arc = btparam::smaller_arc(oct, oct.param(i), oct.param(j));
            CHECK(btparam::vertex_diameter_distance(oct, i, j) ==
                  btparam::arc_diameter(oct, arc));
        }
}

TEST_CASE("smaller_arc picks the side with the smaller diameter") {
    JordanCurve sq = btparam::make_square();
    // A lopsided pair: the short way around, no wrap.
    ArcSpan s = btparam::smaller_arc(sq, 0.1, 0.2);
    CHECK(s.start == 0.1);
    CHECK(s.end == 0.2);
    CHECK_FALSE(s.wraps);
    // Midpoints of opposite sides: both arcs span the same corner diagonal,
    // the tie is bit-exact, and the forward arc wins it.
    ArcSpan tie = btparam::smaller_arc(sq, 0.75, 0.25);
    CHECK(tie.start == 0.75);
    CHECK(tie.end == 0.25);
    CHECK(tie.wraps);

    // Whatever side is returned, its diameter is the diameter distance.
    JordanCurve c = btparam::make_circle(256);
    btparam::Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        double x = rng.uniform(), y = rng.uniform();
        ArcSpan a = btparam::smaller_arc(c, x, y);
        CHECK(btparam::arc_diameter(c, a) == btparam::diameter_distance(c, x, y));
    }
    CHECK_THROWS_AS(btparam::smaller_arc(c, 0.3, 0.3), Error);
}

TEST_CASE("parameters wrap and interpolate on the polyline") {
    JordanCurve sq = btparam::make_square();
    CHECK(sq.wrap_param(1.25) == 0.25);
    CHECK(sq.wrap_param(-0.25) == 0.75);
    std::vector<double> p = sq.point_at(0.125); // halfway along the bottom edge
    CHECK(p[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(p[1] == 0.0);
    CHECK(sq.distance(0.0, 0.5) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
    CHECK(sq.nearest_vertex(0.26) == 1);
}

TEST_CASE("vertices_in walks wrapped spans in order") {
    JordanCurve oct = btparam::make_regular_polygon(8);
    btparam::VertexRange r = oct.vertices_in(btparam::span_between(0.9, 0.2));
    CHECK(r.count == 2); // params 0 and 1/8 only
    CHECK(r.first % 8 == 0);
    btparam::VertexRange full = oct.vertices_in(btparam::full_span());
    CHECK(full.count == 8);
}

TEST_CASE("point construction rejects bad input") {
    using btparam::curve_from_points;
    CHECK_THROWS_AS(curve_from_points({{0, 0}, {1, 0}}, true), Error);         // too few for a loop
    CHECK_THROWS_AS(curve_from_points({{0, 0}}, false), Error);               // too few for an arc
    CHECK_THROWS_AS(curve_from_points({{0, 0}, {0, 0}, {1, 0}}, true), Error); // repeated point
    CHECK_THROWS_AS(curve_from_points({{0, 0}, {1}}, false), Error);           // mixed dimensions
    try {
        curve_from_points({{0, 0}, {1, 0}}, true);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == errc::too_few_points);
        CHECK(std::string(e.code_name()) == "too_few_points");
    }
}

TEST_CASE("matrix construction validates metric axioms") {
    JordanCurve hex = hexagon_matrix();
    CHECK(hex.size() == 6);
    CHECK(hex.closed());
    CHECK_FALSE(hex.embedded());
    CHECK(hex.diameter() == 2.0);

    std::vector<std::vector<double>> asym = {{0, 1, 1}, {1, 0, 1}, {2, 1, 0}};
    try {
        btparam::curve_from_distance_matrix(asym, true);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_symmetric);
    }

    std::vector<std::vector<double>> tri = {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}};
    try {
        btparam::curve_from_distance_matrix(tri, true);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == errc::triangle_violation);
    }
}

TEST_CASE("the vertex budget for diameter tables is enforced") {
    std::size_t old = btparam::max_dd_vertices();
    btparam::max_dd_vertices() = 16;
    JordanCurve big = btparam::make_regular_polygon(20);
    try {
        (void)big.diameter();
        btparam::max_dd_vertices() = old;
        FAIL("expected a throw");
    } catch (const Error& e) {
        btparam::max_dd_vertices() = old;
        CHECK(e.code() == errc::curve_too_large);
    }
    CHECK(big.diameter() > 1.9); // builds fine once the budget is back
}

TEST_CASE("remetrized curve reports unit turning constant") {
    JordanCurve sq = btparam::make_square();
    JordanCurve dd = btparam::remetrize_dd(sq);
    CHECK_FALSE(dd.embedded());
    double c = btparam::bounded_turning_constant(dd, 2000, 7);
    CHECK(c >= 1.0);
    CHECK(c <= 1.0 + 1e-6);
}
