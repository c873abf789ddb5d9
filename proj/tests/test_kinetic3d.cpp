#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "magkin/kinetic3d.hpp"
#include "magkin/occupation.hpp"
#include "magkin/verify.hpp"

using namespace magkin;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("fermi_level inverts g at a hand-built point") {
    // g(4) = sqrt(3) + sqrt(1) at b = 1, so rho = (sqrt3 + 1) / 2 pi^2.
    const double rho = (std::sqrt(3.0) + 1.0) / (2.0 * kPi * kPi);
    const auto sol = fermi_level(1.0, rho, 1e-13);
    CHECK(sol.delta == Approx(4.0).epsilon(1e-10));
    CHECK(sol.occupied_levels == 2);
}

TEST_CASE("fermi_level tends to b as rho -> 0") {
    const double b = 2.7;
    CHECK(fermi_level(b, 0.0).delta == b);
    CHECK(fermi_level(b, 1e-12).delta == Approx(b).epsilon(1e-10));
    CHECK(fermi_level(b, 0.0).occupied_levels == 0);
}

TEST_CASE("fermi_level round trip and constraint reproduction") {
    for (const auto& r : {verify::fermi_round_trip(), verify::fermi_constraint(11)}) {
        INFO(r.name << ": " << r.max_deviation);
        CHECK(r.pass);
    }
}

TEST_CASE("fermi_level domain errors") {
    CHECK_THROWS_AS(fermi_level(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(fermi_level(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(fermi_level(1.0, -0.5), std::domain_error);
}

TEST_CASE("fermi_level is strictly increasing in rho") {
    const double b = 1.3;
    double prev = b;
    for (int i = 1; i <= 40; ++i) {
        const double rho = 0.1 * static_cast<double>(i);
        const double delta = fermi_level(b, rho).delta;
        CHECK(delta > prev);
        prev = delta;
    }
}

TEST_CASE("fermi_level bracket: delta in (b, b + (2 pi^2 rho / b)^2]") {
    for (double b : {0.3, 1.0, 8.0}) {
        for (double rho : {0.1, 1.0, 3.0}) {
            const double delta = fermi_level(b, rho).delta;
            const double target = 2.0 * kPi * kPi * rho / b;
            CHECK(delta > b);
            CHECK(delta <= b + target * target + 1e-12);
        }
    }
}

TEST_CASE("omega3d vanishes at zero density for every route") {
    CHECK(omega3d_integral(2.0, 0.0).omega == 0.0);
    CHECK(omega3d_closed(2.0, 0.0, Omega3dVariant::prop_form).omega == 0.0);
    CHECK(omega3d_closed(2.0, 0.0, Omega3dVariant::proof_form).omega == 0.0);
    CHECK(omega3d_large_field(2.0, 0.0).omega == 0.0);
}

TEST_CASE("single-level point b = 10, rho = 1") {
    const auto r = omega3d_integral(10.0, 1.0);
    // delta = b + (2 pi^2 rho / b)^2 = 10 + 4 pi^4 / 100.
    const double delta = 10.0 + 4.0 * std::pow(kPi, 4) / 100.0;
    CHECK(r.fermi.delta == Approx(delta).epsilon(1e-12));
    CHECK(r.fermi.delta == Approx(13.8964).epsilon(1e-4));
    CHECK(r.fermi.occupied_levels == 1);
    // Golden value, frozen from the filled-integral evaluation: it equals
    // delta rho / 6 + b rho / 3 in the single-level regime.
    CHECK(r.omega == Approx(5.649393940226683).epsilon(1e-13));
    CHECK(r.omega == Approx(delta / 6.0 + 10.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("prop vs proof second term at b = 10, rho = 1") {
    const auto prop = omega3d_closed(10.0, 1.0, Omega3dVariant::prop_form);
    const auto proof = omega3d_closed(10.0, 1.0, Omega3dVariant::proof_form);
    const double delta = prop.fermi.delta;
    const double base = delta / 6.0;  // delta rho / 6 with rho = 1
    CHECK(prop.omega - base == Approx(33.333).epsilon(1e-3));
    CHECK(proof.omega - base == Approx(3.3333).epsilon(1e-3));
}

TEST_CASE("variant adjudication is unanimous for the proof form") {
    const auto report = verify::omega3d_variant_adjudication(1234);
    CHECK(report.proof_matches == report.points);
    CHECK(report.prop_matches == 0);
    CHECK(report.result.pass);
}

TEST_CASE("per-level antiderivative vs quadrature on random points") {
    // omega3d_integral throws if any level integral disagrees at 1e-10.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ub(0.2, 20.0), ur(0.05, 5.0);
    for (int i = 0; i < 50; ++i) CHECK_NOTHROW(omega3d_integral(ub(rng), ur(rng)));
}

TEST_CASE("homogeneity under (b, rho) -> (l^2 b, l^3 rho)") {
    const auto r = verify::omega3d_homogeneity();
    INFO(r.name << ": " << r.max_deviation);
    CHECK(r.pass);
}

TEST_CASE("omega3d nondecreasing in rho") {
    const auto r = verify::omega3d_monotone_in_rho();
    CHECK(r.pass);
}

TEST_CASE("large-field formula: threshold boundary and identity") {
    SECTION("just above the threshold the second level is empty") {
        const double rho = 1.0;
        const double b = single_level_threshold(rho) * (1.0 + 1e-6);
        const auto r = omega3d_large_field(b, rho);
        CHECK(r.fermi.delta - 3.0 * b < 0.0);
        CHECK(omega3d_integral(b, rho).fermi.occupied_levels == 1);
    }
    SECTION("below the threshold the precondition fails, naming it") {
        const double rho = 1.0;
        const double b = single_level_threshold(rho) * 0.99;
        CHECK_THROWS_AS(omega3d_large_field(b, rho), std::domain_error);
    }
    SECTION("agreement with the integral on 20 points") {
        const auto r = verify::omega3d_large_field_identity(4321);
        INFO(r.name << ": " << r.max_deviation);
        CHECK(r.pass);
    }
}

TEST_CASE("small-field constant converges to (3/10)(6 pi^2)^{2/3}") {
    const std::array<double, 3> bs{1e-1, 1e-2, 1e-3};
    const auto fit = omega3d_small_field_limit(1.0, bs);
    const double expected = 0.3 * std::pow(6.0 * kPi * kPi, 2.0 / 3.0);
    CHECK(fit.constant == Approx(expected).epsilon(2e-2));
    CHECK(fit.nearest == 2);
    // The candidate list itself.
    CHECK(fit.candidates[0] == Approx(3.1904).epsilon(1e-4));
    CHECK(fit.candidates[1] == Approx(2.5321).epsilon(1e-4));
    CHECK(fit.candidates[2] == Approx(4.5578).epsilon(1e-4));
}

TEST_CASE("small-field fit is rho-independent") {
    const std::array<double, 2> bs{1e-2, 1e-3};
    const double c_half = omega3d_small_field_limit(0.5, bs).constant;
    const double c_one = omega3d_small_field_limit(1.0, bs).constant;
    const double c_two = omega3d_small_field_limit(2.0, bs).constant;
    CHECK(c_half == Approx(c_one).epsilon(5e-3));
    CHECK(c_two == Approx(c_one).epsilon(5e-3));
}

TEST_CASE("small-field sequence validation") {
    const std::array<double, 3> increasing{1e-3, 1e-2, 1e-1};
    CHECK_THROWS_AS(omega3d_small_field_limit(1.0, increasing), std::domain_error);
    const std::array<double, 3> negative{1e-1, -1e-2, 1e-3};
    CHECK_THROWS_AS(omega3d_small_field_limit(1.0, negative), std::domain_error);
}

TEST_CASE("continuum fill measures summed over levels reproduce the constraint") {
    // sum_n |{k : eps_n + k^2 < delta}| = 2 g(delta) = 2 (2 pi^2 rho / b).
    const AnisotropicDispersion disp(MagneticField(0.0, 0.0, 1.3));
    const double b = 1.3, rho = 0.8;
    const auto sol = fermi_level(b, rho, 1e-13);
    double total = 0.0;
    for (unsigned n = 0; n < sol.occupied_levels; ++n)
        total += continuum_fill_measure(disp, sol.delta, n);
    CHECK(total == Approx(2.0 * 2.0 * kPi * kPi * rho / b).epsilon(1e-10));
}

TEST_CASE("level-sum split term S_b: finite small-b limit under the b/6pi^2 prefactor") {
    // omega3d = delta rho / 6 + S_b. With the canonical prefactor, S_b does
    // NOT vanish as b -> 0: it tends to 6^{5/3} pi^{4/3} / 45 * rho^{5/3},
    // while delta rho / 6 -> pi^{4/3} 6^{-1/3} rho^{5/3}.
    const double rho = 1.0;
    for (double b : {1e-3, 1e-4}) {
        const auto r = omega3d(b, rho);
        const double s_b = r.omega - r.fermi.delta * rho / 6.0;
        const double s_limit = std::pow(6.0, 5.0 / 3.0) * std::pow(kPi, 4.0 / 3.0) / 45.0;
        CHECK(s_b == Approx(s_limit).epsilon(2e-2));
        const double delta_limit = std::pow(kPi, 4.0 / 3.0) / std::cbrt(6.0);
        CHECK(r.fermi.delta * rho / 6.0 == Approx(delta_limit).epsilon(2e-2));
    }
}
