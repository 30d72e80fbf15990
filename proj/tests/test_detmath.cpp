#include <doctest.h>

#include <cmath>
#include <limits>

#include "lobsim/detmath.hpp"

namespace dm = lobsim::detmath;
using dm::sincospi;

TEST_SUITE_BEGIN("detmath");

TEST_CASE("exp matches libm to ~1 ulp over the working range") {
    double worst = 0.0;
    for (double x = -700.0; x <= 700.0; x += 0.37) {
        const double got = dm::exp(x);
        const double ref = std::exp(x);
        const double rel = std::fabs(got - ref) / ref;
        worst = std::max(worst, rel);
    }
    CHECK(worst < 5e-16);
    CHECK(dm::exp(0.0) == 1.0);
    CHECK(dm::exp(-800.0) == 0.0);
    CHECK(dm::exp(800.0) == std::numeric_limits<double>::infinity());
    CHECK(std::isnan(dm::exp(std::numeric_limits<double>::quiet_NaN())));
}

TEST_CASE("log matches libm to ~1 ulp") {
    double worst = 0.0;
    for (double x = 1e-8; x < 1e8; x *= 1.37) {
        const double got = dm::log(x);
        const double ref = std::log(x);
        const double err = std::fabs(got - ref) / std::max(std::fabs(ref), 1.0);
        worst = std::max(worst, err);
    }
    CHECK(worst < 5e-16);
    CHECK(dm::log(1.0) == 0.0);
    CHECK(dm::log(0.0) == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(dm::log(-1.0)));
}

TEST_CASE("exp/log round trip") {
    for (double x = -20.0; x <= 20.0; x += 0.173)
        CHECK(dm::log(dm::exp(x)) == doctest::Approx(x).epsilon(1e-14));
}

TEST_CASE("sincospi against libm") {
    double worst = 0.0;
    for (double t = -4.0; t <= 4.0; t += 0.0137) {
        double s, c;
        sincospi(t, s, c);
        worst = std::max(worst, std::fabs(s - std::sin(M_PI * t)));
        worst = std::max(worst, std::fabs(c - std::cos(M_PI * t)));
    }
    CHECK(worst < 1e-14);
    double s, c;
    sincospi(0.5, s, c);
    CHECK(s == 1.0);
    sincospi(1.0, s, c);
    CHECK(c == -1.0);
}

TEST_SUITE_END();
