#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "magkin/kinetic2d.hpp"
#include "magkin/verify.hpp"

using namespace magkin;
using Catch::Approx;

TEST_CASE("omega2d at integer fill equals pi rho^2") {
    // b = 2 pi rho / m with rho = 1, m = 1.
    const auto r = omega2d(2.0 * std::numbers::pi, 1.0);
    CHECK(r.omega == Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(r.fractional_occupation == 0.0);
    CHECK(r.filled_levels == 1);
}

TEST_CASE("omega2d half-filled lowest level: b = 4pi, rho = 1 gives 2pi") {
    // Level-filling route: (b/4pi) eps_0 m*(0) = (4pi/4pi) * 4pi * 1/2 = 2pi.
    const auto r = omega2d(4.0 * std::numbers::pi, 1.0);
    CHECK(r.omega == Approx(2.0 * std::numbers::pi).epsilon(1e-13));
    CHECK(omega2d_bathtub(4.0 * std::numbers::pi, 1.0) ==
          Approx(2.0 * std::numbers::pi).epsilon(1e-13));
    CHECK(r.filled_levels == 0);
    CHECK(r.fractional_occupation == Approx(0.5));
}

TEST_CASE("omega2d vanishes at zero density") {
    CHECK(omega2d(0.37, 0.0).omega == 0.0);
    CHECK(omega2d_bathtub(0.37, 0.0) == 0.0);
}

TEST_CASE("omega2d rejects nonpositive field") {
    CHECK_THROWS_AS(omega2d(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(omega2d(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(omega2d_bathtub(-1.0, 1.0), std::domain_error);
}

TEST_CASE("omega2d integer fill via the bathtub route: b = 2pi, rho = 2") {
    // Two full levels: (b/4pi)(eps_0 + eps_1) = (1/2)(2pi + 6pi) = 4pi = pi rho^2.
    const double b = 2.0 * std::numbers::pi;
    CHECK(omega2d_bathtub(b, 2.0) == Approx(4.0 * std::numbers::pi).epsilon(1e-13));
    CHECK(omega2d_bathtub(b, 2.0) == Approx(std::numbers::pi * 4.0).epsilon(1e-13));
}

TEST_CASE("piecewise form: first segment is b rho / 2") {
    const double b = 1.7;
    for (double rho : {0.01, 0.1, 0.2}) {  // t = 2 pi rho / b < 1
        const auto seg = omega2d_segment(b, rho);
        CHECK(seg.segment == 0);
        const double t = 2.0 * std::numbers::pi * rho / b;
        CHECK(seg.eval_at_t(t) == Approx(b * rho / 2.0).epsilon(1e-13));
        CHECK(seg.eval_at_t(t) == Approx(omega2d(b, rho).omega).epsilon(1e-13));
    }
}

TEST_CASE("piecewise form matches the closed form on every segment") {
    const double b = 2.3;
    for (double rho = 0.05; rho < 4.0; rho += 0.173) {
        const auto seg = omega2d_segment(b, rho);
        const double t = 2.0 * std::numbers::pi * rho / b;
        CHECK(seg.eval_at_t(t) == Approx(omega2d(b, rho).omega).epsilon(1e-12).margin(1e-12));
    }
}

TEST_CASE("segment slopes (1+2m) b^2/4pi increase with m") {
    const double b = 1.1;
    double prev = -1.0;
    for (int m = 0; m < 8; ++m) {
        const double rho = (static_cast<double>(m) + 0.5) * b / (2.0 * std::numbers::pi);
        const auto seg = omega2d_segment(b, rho);
        CHECK(seg.segment == m);
        CHECK(seg.slope_t ==
              Approx((1.0 + 2.0 * m) * b * b / (4.0 * std::numbers::pi)).epsilon(1e-13));
        CHECK(seg.slope_t > prev);
        prev = seg.slope_t;
    }
}

TEST_CASE("segments join continuously at integer t") {
    const double b = 3.1;
    for (int m = 1; m <= 6; ++m) {
        // Both segments evaluated at the breakpoint t = m give (b^2/4pi) m^2.
        const double t = static_cast<double>(m);
        const double pref = b * b / (4.0 * std::numbers::pi);
        const double lower_slope = pref * (1.0 + 2.0 * (m - 1));
        const double lower_intercept = -pref * (m - 1.0) * m;
        const double upper_slope = pref * (1.0 + 2.0 * m);
        const double upper_intercept = -pref * m * (m + 1.0);
        CHECK(lower_slope * t + lower_intercept ==
              Approx(upper_slope * t + upper_intercept).epsilon(1e-13));
        CHECK(lower_slope * t + lower_intercept == Approx(pref * m * m).epsilon(1e-13));
    }
}

TEST_CASE("closed form vs bathtub sum over the acceptance grid") {
    const auto r = verify::omega2d_oracle_grid();
    INFO(r.name << ": " << r.max_deviation);
    CHECK(r.pass);
}

TEST_CASE("corollary properties: bounds, periodicity, monotonicity, minima") {
    for (const auto& r : {verify::omega2d_bounds(), verify::omega2d_periodicity(),
                          verify::omega2d_monotone(), verify::omega2d_minimizing_fields(),
                          verify::omega2d_convexity(7)}) {
        INFO(r.name << ": " << r.max_deviation);
        CHECK(r.pass);
    }
}
