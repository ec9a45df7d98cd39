#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <btparam/dyadic.hpp>

using btparam::Dyadic;
using btparam::Error;

TEST_CASE("values stay canonical under construction") {
    CHECK(Dyadic(6, 3) == Dyadic(3, 2)); // 6/8 reduces to 3/4
    CHECK(Dyadic(4, 2) == Dyadic::one());
    CHECK(Dyadic(0, 7) == Dyadic::zero());
    CHECK(Dyadic(0, 7).exp() == 0);
    CHECK(Dyadic(3, 2).num() == 3);
    CHECK(Dyadic(3, 2).exp() == 2);
    CHECK(Dyadic::zero().is_zero());
    CHECK_FALSE(Dyadic::one().is_zero());
}

TEST_CASE("pow2 and double conversion are exact both ways") {
    CHECK(Dyadic::pow2(0) == Dyadic::one());
    CHECK(Dyadic::pow2(4).to_double() == 0.0625);
    for (double x : {0.0, 1.0, 0.5, 0.75, 0.1, 1.0 / 3.0, 1.9999999}) {
        Dyadic d = Dyadic::from_double(x);
        CHECK(d.to_double() == x); // doubles are dyadic rationals, no rounding
        CHECK(d.double_exact());
    }
}

TEST_CASE("arithmetic matches exact rational identities") {
    Dyadic a(3, 2); // 3/4
    Dyadic b(1, 3); // 1/8
    CHECK(a + b == Dyadic(7, 3));
    CHECK(a - b == Dyadic(5, 3));
    CHECK(a * b == Dyadic(3, 5));

    Dyadic q = Dyadic::one();
    for (int i = 0; i < 8; ++i) q = q * Dyadic(1, 2);
    CHECK(q == Dyadic::pow2(16));

    Dyadic s = Dyadic::zero();
    for (int i = 0; i < 256; ++i) s = s + Dyadic::pow2(8);
    CHECK(s == Dyadic::one());
}

TEST_CASE("ordering is exact across mixed exponents") {
    CHECK(Dyadic(1, 1) < Dyadic(3, 2));
    CHECK(Dyadic(3, 2) > Dyadic(1, 1));
    CHECK(Dyadic(1, 1) <= Dyadic(2, 2));
    CHECK(Dyadic(1, 1) >= Dyadic(2, 2));
    CHECK(Dyadic(1, 1) != Dyadic(1, 2));
    CHECK_FALSE(Dyadic(1, 1) < Dyadic(2, 2));
}

TEST_CASE("invalid construction is rejected") {
    CHECK_THROWS_AS(Dyadic(-1, 0), Error);
    CHECK_THROWS_AS(Dyadic(1, -1), Error);
    CHECK_THROWS_AS(Dyadic::pow2(-2), Error);
    CHECK_THROWS_AS(Dyadic::from_double(-0.5), Error);
    CHECK_THROWS_AS(Dyadic::from_double(std::nan("")), Error);
}

TEST_CASE("str spells num over a power of two") {
    CHECK(Dyadic(3, 2).str() == "3/2^2");
    CHECK(Dyadic::zero().str() == "0/2^0");
}

TEST_CASE("to_double peels oversized numerators without overflow") {
    // 1 + 2^-200: the numerator carries 201 significant bits.
    Dyadic d = Dyadic::one() + Dyadic::pow2(200);
    CHECK_FALSE(d.double_exact());
    CHECK(d.to_double() == 1.0);
}
