#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>

#include <btparam/curve.hpp>
#include <btparam/generators.hpp>
#include <btparam/sampling.hpp>
#include <btparam/verification.hpp>

using btparam::Error;
using btparam::GeneratorSpec;
using btparam::JordanCurve;

TEST_CASE("koch vertex counts follow the subdivision") {
    for (int level = 0; level <= 3; ++level) {
        JordanCurve k = btparam::make_koch(level);
        CHECK(k.size() == 3u * (std::size_t(1) << (2 * level)));
        CHECK(k.closed());
    }
}

TEST_CASE("regular polygons and circles have the advertised shape") {
    JordanCurve hex = btparam::make_regular_polygon(6);
    REQUIRE(hex.size() == 6);
    CHECK(hex.diameter() == Catch::Approx(2.0).margin(1e-12));

    JordanCurve circ = btparam::make_circle(256);
    REQUIRE(circ.size() == 256);
    CHECK(circ.diameter() == Catch::Approx(2.0).margin(1e-3));

    CHECK_THROWS_AS(btparam::make_regular_polygon(2), Error);
}

TEST_CASE("square, segment and l-arc are the fixed test shapes") {
    JordanCurve sq = btparam::make_square();
    REQUIRE(sq.size() == 4);
    CHECK(sq.closed());
    CHECK(sq.point_at(0.0)[0] == 0.0);
    CHECK(sq.point_at(0.0)[1] == 0.0);
    CHECK(sq.diameter() == Catch::Approx(std::sqrt(2.0)).margin(1e-12));

    JordanCurve seg = btparam::make_segment();
    CHECK_FALSE(seg.closed());
    CHECK(seg.diameter() == Catch::Approx(1.0).margin(1e-12));

    JordanCurve l = btparam::make_l_arc();
    REQUIRE(l.size() == 3);
    CHECK_FALSE(l.closed());
    CHECK(l.param(1) == Catch::Approx(0.5).margin(1e-12)); // corner halfway by arc length
}

TEST_CASE("snowflake parameters are validated") {
    CHECK_THROWS_AS(btparam::make_snowflake(2, 0.0), Error);
    CHECK_THROWS_AS(btparam::make_snowflake(2, 0.5), Error);
    CHECK_THROWS_AS(btparam::make_snowflake(8, 0.1), Error);
    JordanCurve s = btparam::make_snowflake(2, 0.25);
    CHECK(s.size() == 48);
}

TEST_CASE("random curves are reproducible from the seed") {
    JordanCurve a = btparam::make_random_bt(42, 256);
    JordanCurve b = btparam::make_random_bt(42, 256);
    REQUIRE(a.size() == 256);
    REQUIRE(b.size() == 256);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.point_at(a.param(i))[0] == b.point_at(b.param(i))[0]);
        CHECK(a.point_at(a.param(i))[1] == b.point_at(b.param(i))[1]);
    }

    JordanCurve c = btparam::make_random_bt(43, 256);
    bool differs = false;
    for (std::size_t i = 0; i < c.size() && !differs; ++i)
        differs = a.point_at(a.param(i))[0] != c.point_at(c.param(i))[0];
    CHECK(differs);

    CHECK_THROWS_AS(btparam::make_random_bt(1, 7), Error);
    CHECK_THROWS_AS(btparam::make_random_bt(1, 256, 0.5), Error);
}

TEST_CASE("generate_curve dispatches on the kind string") {
    GeneratorSpec koch;
    koch.kind = "koch";
    koch.level = 2;
    CHECK(btparam::generate_curve(koch).size() == 48);

    GeneratorSpec circ;
    circ.kind = "circle";
    circ.count = 16;
    CHECK(btparam::generate_curve(circ).size() == 16);

    GeneratorSpec bad;
    bad.kind = "bogus";
    CHECK_THROWS_AS(btparam::generate_curve(bad), Error);
}

TEST_CASE("koch turning constant is stable across refinement levels") {
    // The farthest arc-to-chord ratio is carried by coarse features, so
    // refining the polygon must not move it.
    std::uint64_t seed = btparam::mix_seed(7, btparam::stream::bt_original);
    double c3 = btparam::bounded_turning_constant(btparam::make_koch(3), 4000, seed);
    double c4 = btparam::bounded_turning_constant(btparam::make_koch(4), 4000, seed);
    CHECK(c3 == Catch::Approx(c4).margin(1e-9));
    CHECK(c3 > 1.5);
    CHECK(c3 < 1.56);
}
