#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "magkin/occupation.hpp"

using namespace magkin;
using Catch::Approx;

namespace {

std::vector<double> landau_levels(double b, std::size_t count) {
    std::vector<double> levels(count);
    for (std::size_t n = 0; n < count; ++n) levels[n] = b * (2.0 * static_cast<double>(n) + 1.0);
    return levels;
}

}  // namespace

TEST_CASE("bathtub fill puts whole levels below and the fraction on floor(mass)") {
    const auto levels = landau_levels(1.0, 5);
    const auto fill = bathtub_fill(levels, 2.5);
    CHECK(fill.occupations[0] == 1.0);
    CHECK(fill.occupations[1] == 1.0);
    CHECK(fill.occupations[2] == Approx(0.5));
    CHECK(fill.occupations[3] == 0.0);
    REQUIRE(fill.fractional_level.has_value());
    CHECK(*fill.fractional_level == 2);
}

TEST_CASE("bathtub fill: zero mass and integer mass") {
    const auto levels = landau_levels(2.0, 5);
    const auto empty = bathtub_fill(levels, 0.0);
    for (double m : empty.occupations) CHECK(m == 0.0);
    CHECK_FALSE(empty.fractional_level.has_value());

    const auto integer = bathtub_fill(levels, 3.0);
    CHECK(integer.occupations[0] == 1.0);
    CHECK(integer.occupations[1] == 1.0);
    CHECK(integer.occupations[2] == 1.0);
    CHECK(integer.occupations[3] == 0.0);
    CHECK_FALSE(integer.fractional_level.has_value());
}

TEST_CASE("bathtub fill conserves mass to 1e-14 relative") {
    const auto levels = landau_levels(0.7, 12);
    for (double mass : {0.25, 1.0, 3.75, 7.0, 9.999}) {
        const auto fill = bathtub_fill(levels, mass);
        double total = 0.0;
        for (double m : fill.occupations) total += m;
        CHECK(total == Approx(mass).epsilon(1e-14).margin(0.0));
    }
}

TEST_CASE("bathtub fill enforces capacity ceil(mass)+1") {
    const auto levels = landau_levels(1.0, 3);
    CHECK_THROWS_AS(bathtub_fill(levels, 2.5), capacity_error);   // needs 4
    CHECK_THROWS_AS(bathtub_fill(levels, 5.0), capacity_error);
    CHECK_NOTHROW(bathtub_fill(levels, 1.5));                     // needs 3
    CHECK_THROWS_AS(bathtub_fill(levels, -1.0), std::domain_error);
}

TEST_CASE("bathtub fill rejects descending levels") {
    const std::vector<double> bad{1.0, 0.5, 2.0};
    CHECK_THROWS_AS(bathtub_fill(bad, 1.0), std::domain_error);
}

TEST_CASE("bathtub energy on the Landau ladder") {
    // eps_n = b(2n+1) with b = 4pi, half the lowest level: 4pi * 0.5 = 2pi.
    const double b = 4.0 * std::numbers::pi;
    const auto levels = landau_levels(b, 3);
    CHECK(bathtub_energy(levels, 0.5) == Approx(2.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(bathtub_energy(levels, 1.0) == Approx(b).epsilon(1e-14));  // exactly eps_0
}

TEST_CASE("threshold structure of the minimizing filling") {
    const auto levels = landau_levels(1.3, 9);
    for (double mass : {0.4, 2.0, 5.5, 7.0}) {
        const auto fill = bathtub_fill(levels, mass);
        const auto fl = static_cast<std::size_t>(std::floor(mass));
        for (std::size_t n = 0; n < levels.size(); ++n) {
            if (n < fl)
                CHECK(fill.occupations[n] == 1.0);
            else if (n == fl)
                CHECK(fill.occupations[n] == Approx(mass - std::floor(mass)).margin(1e-15));
            else
                CHECK(fill.occupations[n] == 0.0);
        }
    }
}

TEST_CASE("moving occupation to a higher empty level raises the energy") {
    const auto levels = landau_levels(0.9, 8);
    const double mass = 4.3;
    const double base = bathtub_energy(levels, mass);
    auto fill = bathtub_fill(levels, mass).occupations;
    const double dm = 0.2;
    fill[1] -= dm;
    fill[6] += dm;
    double moved = 0.0;
    for (std::size_t n = 0; n < levels.size(); ++n) moved += levels[n] * fill[n];
    CHECK(moved > base + dm * (levels[6] - levels[1]) * 0.999);
}

TEST_CASE("randomized minimality: no admissible filling beats the bathtub") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> gap(0.05, 2.0);
    std::uniform_real_distribution<double> mass_dist(0.0, 6.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int n_instances = 10000;
    const int n_fillings = 1000;
    for (int inst = 0; inst < n_instances; ++inst) {
        std::vector<double> levels(8);
        double e = gap(rng);
        for (auto& lvl : levels) {
            lvl = e;
            e += gap(rng);
        }
        const double mass = std::min(mass_dist(rng), 6.9);
        const double best = bathtub_energy(levels, mass);

        for (int trial = 0; trial < n_fillings; ++trial) {
            // Random admissible filling: spread mass over levels in random
            // order, respecting m(n) <= 1.
            std::vector<double> m(levels.size(), 0.0);
            double remaining = mass;
            std::vector<std::size_t> order(levels.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t idx : order) {
                if (remaining <= 0.0) break;
                const double take = std::min(remaining, unit(rng));
                m[idx] = take;
                remaining -= take;
            }
            // Top up deterministically if random draws did not exhaust mass.
            for (std::size_t idx : order) {
                if (remaining <= 0.0) break;
                const double take = std::min(remaining, 1.0 - m[idx]);
                m[idx] += take;
                remaining -= take;
            }
            if (remaining > 1e-12) continue;  // could not place the mass; skip
            double energy = 0.0;
            for (std::size_t n = 0; n < levels.size(); ++n) energy += levels[n] * m[n];
            CHECK(energy >= best - 1e-10);
        }
    }
}

TEST_CASE("continuum fill measure: interval lengths") {
    const AnisotropicDispersion disp(MagneticField(0.0, 0.0, 1.0));
    // eps_0 = 1, delta = 4: |(-sqrt3, sqrt3)| = 2 sqrt3.
    CHECK(continuum_fill_measure(disp, 4.0, 0) == Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));
    // Boundary: delta = eps_n gives zero measure.
    CHECK(continuum_fill_measure(disp, disp.level(2), 2) == 0.0);
    // eps_1 = 3, delta = 4: 2 sqrt(1) = 2.
    CHECK(continuum_fill_measure(disp, 4.0, 1) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("continuum fill measure requires b2 = 0") {
    const AnisotropicDispersion disp(MagneticField(0.0, 0.5, 1.0));
    CHECK_THROWS_AS(continuum_fill_measure(disp, 4.0, 0), unsupported_configuration);
    CHECK_THROWS_AS(ContinuumFilling(disp, 4.0), unsupported_configuration);
}

TEST_CASE("continuum filling indicator and interval support agree") {
    const ContinuumFilling fill(AnisotropicDispersion(MagneticField(0.0, 0.0, 1.0)), 4.0);
    // eps_0 = 1: occupied iff |k| < sqrt(3).
    const double edge = std::sqrt(3.0);
    CHECK(fill.occupied(0, 0.99 * edge));
    CHECK_FALSE(fill.occupied(0, 1.01 * edge));
    CHECK_FALSE(fill.occupied(2, 0.0));  // eps_2 = 5 > delta
    CHECK(fill.measure(0) == Approx(2.0 * edge).epsilon(1e-14));
    CHECK(fill.measure(2) == 0.0);
}
