#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zarc/errors.hpp"
#include "zarc/riemann.hpp"

using zarc::riemann::theta;
using zarc::riemann::theta_derivative;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("theta matches high-precision gamma-function references") {
    // references: 40-digit evaluation of Im ln Gamma(1/4 + it/2) - (t/2) ln pi
    CHECK(std::fabs(theta(1000.0) - 2034.546428038031608703) <= 1e-9);
    CHECK(std::fabs(theta(100.0) - 87.97216523178721962548) <= 1e-10);
    CHECK(std::fabs(theta(1e6) - 5488816.353078403444883) <= 1e-6);
    CHECK(std::fabs(theta(251327.412287183449) - 1205948.294368171951984) <= 1e-7);
}

TEST_CASE("theta at 2*pi*e reduces to the expansion tail") {
    // (t/2) ln(t/2pi) - t/2 vanishes at t = 2*pi*e, leaving -pi/8 + corrections
    const double t = kTwoPi * std::numbers::e;
    const double t2 = t * t;
    const double tail = -std::numbers::pi / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t * t2) +
                        31.0 / (80640.0 * t * t2 * t2) + 127.0 / (430080.0 * t * t2 * t2 * t2);
    CHECK(std::fabs(theta(t) - tail) <= 1e-12);
    CHECK(std::fabs(theta(t) - (-0.391479049353897892116)) <= 1e-11); // 40-digit reference
}

TEST_CASE("theta grows monotonically in the asymptotic regime") {
    CHECK(theta(1e6 + 1.0) > theta(1e6));
    CHECK(theta(1001.0) > theta(1000.0));
}

TEST_CASE("theta rejects arguments below the expansion floor") {
    CHECK_THROWS_AS(theta(9.99), zarc::ValidationError);
    CHECK_NOTHROW(theta(10.0));
}

TEST_CASE("theta derivative tracks a central difference") {
    for (double t : {100.0, 1000.0, 1e6}) {
        const double h = 1e-4 * t;
        const double fd = (theta(t + h) - theta(t - h)) / (2.0 * h);
        // central-difference error is theta'''(t) h^2 / 6 ~ h^2 / t^2
        CHECK(theta_derivative(t) == doctest::Approx(fd).epsilon(1e-7));
        CHECK(theta_derivative(t) == doctest::Approx(0.5 * std::log(t / kTwoPi)).epsilon(1e-8));
    }
}
