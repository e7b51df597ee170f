#include "sobex/error.hpp"
#include "sobex/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sobex;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("unit ball volume") {
    CHECK(unit_ball_volume(2) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(unit_ball_volume(0), Error);

    for (int n = 3; n <= 10; ++n)
        CHECK(unit_ball_volume(n) ==
              doctest::Approx(unit_ball_volume(n - 2) * 2.0 * pi / n).epsilon(1e-14));
}

TEST_CASE("volume radius") {
    CHECK(volume_radius(pi, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(volume_radius(4.0 * pi / 3.0, 3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(volume_radius(1.0, 2) == doctest::Approx(1.0 / std::sqrt(pi)).epsilon(1e-12));
    CHECK_THROWS_AS(volume_radius(0.0, 2), Error);
    CHECK_THROWS_AS(volume_radius(-1.0, 3), Error);

    for (int n : {2, 3, 4})
        for (double r : {0.5, 1.0, 3.0})
            CHECK(volume_radius(domain_volume(Domain::ball(n, r)), n) ==
                  doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("domain volume") {
    CHECK(domain_volume(Domain::ball(2, 2.0)) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(domain_volume(Domain::rectangle(1.0, 1.0)) == doctest::Approx(1.0));
    CHECK(domain_volume(Domain::ellipse(2.0, 1.0)) == doctest::Approx(2.0 * pi).epsilon(1e-15));

    const auto square = Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(domain_volume(square) == doctest::Approx(1.0));
    // clockwise input gets normalized
    const auto cw = Domain::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(domain_volume(cw) == doctest::Approx(1.0));
    CHECK(cw.contains(0.5, 0.5));

    CHECK_THROWS_AS(Domain::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), Error); // bowtie
}

TEST_CASE("exponent validation") {
    CHECK_NOTHROW(validate_exponents(3, 5.99));
    CHECK_THROWS_AS(validate_exponents(3, 6.0), Error);
    CHECK_NOTHROW(validate_exponents(2, 7.0));
    CHECK_THROWS_AS(validate_exponents(4, 4.0), Error);
    CHECK_THROWS_AS(validate_exponents(2, 1.0), Error);
    try {
        validate_exponents(3, 6.5);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::subcriticality_violation);
        CHECK(std::string(e.what()).find("6") != std::string::npos);
    }
}

TEST_CASE("containment") {
    const auto e = Domain::ellipse(2.0, 1.0);
    CHECK(e.contains(1.9, 0.0));
    CHECK(!e.contains(2.1, 0.0));
    CHECK(e.contains(0.0, 0.9));
    CHECK(!e.contains(1.5, 0.8));

    const auto tri = Domain::polygon({{0, 0}, {2, 0}, {0, 2}});
    CHECK(tri.contains(0.5, 0.5));
    CHECK(!tri.contains(1.5, 1.5));
}
