#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <btparam/division.hpp>
#include <btparam/generators.hpp>

using btparam::ArcSpan;
using btparam::DivisionResult;
using btparam::Error;
using btparam::errc;
using btparam::JordanCurve;
using btparam::equal_diameter_division;
using btparam::full_span;
using btparam::smallest_count_below;
using btparam::span_between;

TEST_CASE("segment quarters land on the arithmetic quarters") {
    DivisionResult r = equal_diameter_division(btparam::make_segment(), full_span(), 4);
    REQUIRE(r.breakpoints.size() == 3);
    CHECK(r.breakpoints[0] == Catch::Approx(0.25).margin(1e-9));
    CHECK(r.breakpoints[1] == Catch::Approx(0.50).margin(1e-9));
    CHECK(r.breakpoints[2] == Catch::Approx(0.75).margin(1e-9));
    CHECK(r.common_diameter == Catch::Approx(0.25).margin(1e-9));
    CHECK(r.residual <= 1e-6 * r.common_diameter);
}

TEST_CASE("l-arc halves meet at the corner") {
    DivisionResult r = equal_diameter_division(btparam::make_l_arc(), full_span(), 2);
    REQUIRE(r.breakpoints.size() == 1);
    CHECK(r.breakpoints[0] == Catch::Approx(0.5).margin(1e-6));
    CHECK(r.common_diameter == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("square quarters are the sides") {
    DivisionResult r = equal_diameter_division(btparam::make_square(), full_span(), 4);
    REQUIRE(r.breakpoints.size() == 3);
    CHECK(r.breakpoints[0] == Catch::Approx(0.25).margin(1e-6));
    CHECK(r.breakpoints[1] == Catch::Approx(0.50).margin(1e-6));
    CHECK(r.breakpoints[2] == Catch::Approx(0.75).margin(1e-6));
    CHECK(r.common_diameter == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("circle quarters have chord diameter sqrt 2") {
    DivisionResult r = equal_diameter_division(btparam::make_circle(256), full_span(), 4);
    REQUIRE(r.breakpoints.size() == 3);
    CHECK(r.common_diameter == Catch::Approx(std::sqrt(2.0)).epsilon(2e-3));
    CHECK(r.breakpoints[1] == Catch::Approx(0.5).margin(1e-3));
    CHECK(r.residual <= 1e-6 * r.common_diameter);
}

TEST_CASE("wrapped spans divide and re-wrap their breakpoints") {
    // Left-side midpoint around the corner to the right-side midpoint; the
    // halves meet at the bottom-edge midpoint by symmetry.
    DivisionResult r =
        equal_diameter_division(btparam::make_square(), span_between(0.875, 0.375), 2);
    REQUIRE(r.breakpoints.size() == 1);
    CHECK(r.breakpoints[0] == Catch::Approx(0.125).margin(1e-6));
    CHECK(r.common_diameter == Catch::Approx(std::sqrt(0.5)).margin(1e-6));
    CHECK(r.breakpoints[0] >= 0.0);
    CHECK(r.breakpoints[0] < 1.0);
}

TEST_CASE("counts that frustrate the plain trial-diameter bisection converge") {
    // Piece diameters on these snowflakes sit on vertex-pair plateaus; the
    // slide completion has to find the balance. Frozen regression counts.
    JordanCurve k4 = btparam::make_koch(4);
    for (std::size_t n : {13u, 25u, 31u}) {
        DivisionResult r = equal_diameter_division(k4, full_span(), n);
        CHECK(r.residual <= 1e-6 * r.common_diameter);
        CHECK(r.breakpoints.size() == n - 1);
    }
}

TEST_CASE("single piece measures the whole span") {
    DivisionResult r = equal_diameter_division(btparam::make_square(), full_span(), 1);
    CHECK(r.breakpoints.empty());
    CHECK(r.common_diameter == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
    CHECK(r.residual == 0.0);
}

TEST_CASE("invalid division requests are rejected") {
    JordanCurve sq = btparam::make_square();
    CHECK_THROWS_AS(equal_diameter_division(sq, full_span(), 0), Error);
    CHECK_THROWS_AS(equal_diameter_division(sq, ArcSpan{0.3, 0.3, false}, 2), Error);
    CHECK_THROWS_AS(equal_diameter_division(sq, full_span(), 2, -1.0), Error);
    try {
        equal_diameter_division(btparam::make_segment(), ArcSpan{0.6, 0.2, true}, 2);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == errc::invalid_argument); // wrap needs a closed curve
    }
}

TEST_CASE("smallest count below a target is minimal and lands in the bracket") {
    btparam::CountResult seg = smallest_count_below(btparam::make_segment(), full_span(), 0.25);
    CHECK(seg.count == 4);
    CHECK(seg.division.common_diameter <= 0.25 * (1.0 + 1e-12));
    CHECK(seg.division.common_diameter >= 0.125 - 1e-9);

    JordanCurve circ = btparam::make_circle(256);
    double delta = circ.diameter() / 4.0;
    btparam::CountResult c = smallest_count_below(circ, full_span(), delta);
    CHECK(c.count == 13);
    CHECK(c.division.common_diameter <= delta * (1.0 + 1e-12));
    CHECK(c.division.common_diameter >= 0.5 * delta - 1e-6 * delta);
    // One piece fewer must overshoot the target, otherwise the count is not minimal.
    DivisionResult one_less = equal_diameter_division(circ, full_span(), c.count - 1);
    CHECK(one_less.common_diameter > delta);

    CHECK_THROWS_AS(smallest_count_below(circ, full_span(), 0.0), Error);
    CHECK_THROWS_AS(smallest_count_below(circ, full_span(), -1.0), Error);
}
