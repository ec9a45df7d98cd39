#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>

#include <btparam/generators.hpp>
#include <btparam/parametrization.hpp>

using btparam::Error;
using btparam::JordanCurve;
using btparam::ModulusReport;
using btparam::Parametrization;
using btparam::PhiPoint;
using btparam::build_parametrization;
using btparam::lambda_metric;
using btparam::modulus_check;
using btparam::phi_eval;

TEST_CASE("lambda metric is the shorter way around the circle") {
    CHECK(lambda_metric(0.1, 0.9) == Catch::Approx(0.2).margin(1e-15));
    CHECK(lambda_metric(0.25, 0.75) == Catch::Approx(0.5).margin(1e-15));
    CHECK(lambda_metric(0.3, 0.3) == 0.0);
    CHECK(lambda_metric(-0.1, 0.1) == Catch::Approx(0.2).margin(1e-15));
}

TEST_CASE("phi maps circle breakpoints to their arc endpoints") {
    Parametrization p = build_parametrization(btparam::make_square(), 3);
    const auto& bp = p.circle.levels.back().breakpoints_f64;
    const auto& ep = p.gamma.levels.back().endpoints;
    REQUIRE(bp.size() == ep.size());

    for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
        PhiPoint q = phi_eval(p, bp[j]);
        CHECK(q.curve_param == ep[j]);
        CHECK(q.error_bound == p.deepest_max_diameter);
        REQUIRE(q.coords.size() == 2);
    }
    // The last breakpoint is the wrap point: endpoint 1 is the same curve
    // point as 0, and phi reports the canonical representative.
    CHECK(phi_eval(p, bp.back()).curve_param == 0.0);

    for (std::size_t j = 1; j < ep.size(); ++j) CHECK(ep[j] > ep[j - 1]);
    const auto& dy = p.circle.levels.back().breakpoints;
    for (std::size_t j = 1; j < dy.size(); ++j) CHECK(dy[j] > dy[j - 1]);
}

TEST_CASE("phi is monotone along the circle") {
    Parametrization p = build_parametrization(btparam::make_square(), 3);
    double prev = phi_eval(p, 0.0).curve_param;
    int drops = 0;
    for (int k = 1; k <= 1000; ++k) {
        double cur = phi_eval(p, k / 1000.0).curve_param;
        if (cur < prev) {
            ++drops;
            CHECK(cur == 0.0); // only the wrap back to the start may decrease
        }
        prev = cur;
    }
    CHECK(drops <= 1);
}

TEST_CASE("deepest arcs shrink geometrically with the depth") {
    Parametrization p = build_parametrization(btparam::make_square(), 3);
    double cap = p.gamma.curve_diameter * std::pow(4.0, -3.0);
    CHECK(p.deepest_max_diameter <= cap * (1.0 + 1e-6));
    CHECK(p.deepest_max_diameter > 0.0);
}

TEST_CASE("continuity modulus holds level by level") {
    Parametrization p = build_parametrization(btparam::make_square(), 3);
    for (std::size_t level = 1; level <= 2; ++level) {
        ModulusReport rep = modulus_check(p, level);
        CHECK(rep.bound ==
              Catch::Approx(2.0 * std::pow(4.0, -double(level)) * p.gamma.curve_diameter)
                  .margin(1e-15));
        CHECK(rep.max_image_distance <= rep.bound * (1.0 + 1e-9));
        CHECK(rep.pairs > 0);
        CHECK(rep.adjacent_ok);
    }
    CHECK_THROWS_AS(modulus_check(p, 0), Error);
    CHECK_THROWS_AS(modulus_check(p, p.depth + 1), Error);
}

TEST_CASE("open arcs parametrize over the plain interval") {
    Parametrization p = build_parametrization(btparam::make_l_arc(), 2);
    CHECK_FALSE(p.curve.closed());
    CHECK(p.domain_distance(0.1, 0.9) == Catch::Approx(0.8).margin(1e-15));

    CHECK(phi_eval(p, -0.2).curve_param == 0.0); // clamped, not wrapped
    CHECK(phi_eval(p, 1.2).curve_param == 1.0);

    // The closed-curve metric would have said 0.2 here.
    Parametrization q = build_parametrization(btparam::make_square(), 2);
    CHECK(q.domain_distance(0.1, 0.9) == Catch::Approx(0.2).margin(1e-15));
}
