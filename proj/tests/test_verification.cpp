#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <optional>

#include <btparam/generators.hpp>
#include <btparam/io.hpp>
#include <btparam/parametrization.hpp>
#include <btparam/sampling.hpp>
#include <btparam/verification.hpp>

using btparam::CertificationReport;
using btparam::CertifyConfig;
using btparam::CircleHierarchy;
using btparam::DeltaIndex;
using btparam::DeltaQuery;
using btparam::Error;
using btparam::Parametrization;
using btparam::build_parametrization;
using btparam::certify;

namespace {

// Largest stored interval inside [x, y] by direct scan over every level,
// kept deliberately dumb so it cannot share a bug with the indexed lookup.
std::optional<double> brute_delta(const CircleHierarchy& circle, double x, double y) {
    bool wraps = y < x;
    std::optional<double> best;
    for (const auto& lv : circle.levels) {
        const auto& bp = lv.breakpoints_f64;
        for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
            bool in = wraps ? (bp[j] >= x || bp[j + 1] <= y) : (bp[j] >= x && bp[j + 1] <= y);
            if (!in) continue;
            double len = lv.lengths[j].to_double();
            if (!best || len > *best) best = len;
        }
    }
    return best;
}

} // namespace

TEST_CASE("indexed interval lookup agrees with the direct scan") {
    Parametrization p = build_parametrization(btparam::make_square(), 3);
    DeltaIndex index(p.circle);
    btparam::Rng rng(2024);

    std::size_t hits = 0, wrapped = 0;
    for (int i = 0; i < 2000; ++i) {
        double x = rng.uniform(), y = rng.uniform();
        std::optional<DeltaQuery> got = index.try_query(x, y);
        std::optional<double> want = brute_delta(p.circle, x, y);
        REQUIRE(got.has_value() == want.has_value());
        if (got) {
            CHECK(got->delta_f64 == *want);
            ++hits;
        }
        if (y < x) ++wrapped;
    }
    CHECK(hits > 0);
    CHECK(wrapped > 0); // make sure the sample actually exercised both branches
    CHECK(index.finest_length() > 0.0);

    double min_len = p.circle.levels.back().lengths[0].to_double();
    for (const auto& l : p.circle.levels.back().lengths)
        min_len = std::min(min_len, l.to_double());
    CHECK(index.finest_length() == min_len);
}

TEST_CASE("a query strictly inside one finest interval finds nothing") {
    Parametrization p = build_parametrization(btparam::make_square(), 3);
    const auto& bp = p.circle.levels.back().breakpoints_f64;
    double x = bp[0] + 0.25 * (bp[1] - bp[0]);
    double y = bp[0] + 0.50 * (bp[1] - bp[0]);

    DeltaIndex index(p.circle);
    CHECK_FALSE(index.try_query(x, y).has_value());
    try {
        index.query(x, y);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == btparam::errc::none_contained);
    }
}

TEST_CASE("turning constant implied by weak quasisymmetry") {
    CHECK(btparam::check_bt_from_wqs(2.0, 1.0).implied_c == Catch::Approx(4.0));
    CHECK(btparam::check_bt_from_wqs(1.5, 1.0).implied_c == Catch::Approx(2.25));
    CHECK(btparam::check_bt_from_wqs(1.2, 1.0).implied_c == Catch::Approx(1.44));
    CHECK(btparam::check_bt_from_wqs(1.2, 1.44).pass);
    CHECK_FALSE(btparam::check_bt_from_wqs(1.2, 1.5).pass);
    CHECK_THROWS_AS(btparam::check_bt_from_wqs(0.9, 1.0), Error);
}

TEST_CASE("interval and gap estimates hold on the square") {
    Parametrization p = build_parametrization(btparam::make_square(), 3);

    btparam::IntervalEstimateReport ie = btparam::check_interval_estimate(p.circle, 5000, 9);
    CHECK(ie.max_ratio <= 12.0 + 1e-9);
    CHECK(ie.covering_ok);
    CHECK(ie.used + ie.skipped == 5000);
    CHECK(ie.used > 0);

    btparam::GapReport gap = btparam::check_level_gap(p.circle, 5000, 11);
    CHECK(gap.max_gap <= 4);
    CHECK(gap.used + gap.skipped == 5000);

    btparam::GapReport ex = btparam::check_level_gap_exhaustive(p.circle);
    CHECK(ex.max_gap <= 4);
    CHECK(ex.used > 0);

    CHECK(btparam::check_gap_claim(p.circle));
}

TEST_CASE("weak quasisymmetry measurement stays under the blanket bound") {
    Parametrization p = build_parametrization(btparam::make_square(), 3);
    btparam::WqsReport rep = btparam::measure_weak_qs(p, btparam::WqsMetric::dd, 2000, 0);
    CHECK(rep.h_emp > 0.0);
    CHECK(rep.h_emp <= 4194304.0);
    CHECK(rep.used > 0);
}

TEST_CASE("certification passes on the square and is deterministic") {
    CertifyConfig cfg;
    cfg.depth = 3;
    cfg.samples = 2000;
    cfg.seed = 5;

    CertificationReport a = certify(btparam::make_square(), cfg);
    CHECK(a.all_pass());
    CHECK(a.errors.empty());
    for (const auto& [name, ok] : a.pass_flags) {
        INFO(name);
        CHECK(ok);
    }

    CertificationReport b = certify(btparam::make_square(), cfg);
    CHECK(btparam::report_to_json(a).dump() == btparam::report_to_json(b).dump());
}

TEST_CASE("worker count does not change any reported number") {
    CertifyConfig cfg;
    cfg.depth = 2;
    cfg.samples = 1000;
    cfg.seed = 5;

    setenv("BTPARAM_THREADS", "1", 1);
    CertificationReport one = certify(btparam::make_square(), cfg);
    setenv("BTPARAM_THREADS", "3", 1);
    CertificationReport three = certify(btparam::make_square(), cfg);
    unsetenv("BTPARAM_THREADS");

    CHECK(btparam::report_to_json(one).dump() == btparam::report_to_json(three).dump());
}
