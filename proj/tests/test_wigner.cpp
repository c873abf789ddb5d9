#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "magkin/verify.hpp"
#include "magkin/wigner.hpp"

using namespace magkin;
using Catch::Approx;

namespace {

// Smaller grids than the defaults keep the unit tests quick; the acceptance
// suite runs the full-size battery.
const verify::WignerSetup kSmall{GridSpec{24.0, 512}, GridSpec{24.0, 128}, GridSpec{24.0, 128}};

}  // namespace

TEST_CASE("grid quadrature of a unit-norm Gaussian returns 1") {
    // L = 24 is 24 standard deviations of phi_0.
    const GridFunction1D phi0 = hermite_window(0, 1.0, GridSpec{24.0, 2048});
    CHECK(phi0.norm() == Approx(1.0).margin(1e-10));
}

TEST_CASE("wigner2d of the ground-state pair has unit norm") {
    const GridFunction1D phi0 = hermite_window(0, 1.0, kSmall.window);
    const GridFunction2D w = wigner2d(phi0, phi0, 1.0, kSmall.out1, kSmall.out2);
    CHECK(w.norm() == Approx(1.0).margin(1e-6));
}

TEST_CASE("wigner2d images of orthogonal payloads/windows are orthogonal") {
    const GridFunction1D phi0 = hermite_window(0, 1.0, kSmall.window);
    const GridFunction1D phi1 = hermite_window(1, 1.0, kSmall.window);
    const GridFunction2D w00 = wigner2d(phi0, phi0, 1.0, kSmall.out1, kSmall.out2);
    const GridFunction2D w01 = wigner2d(phi0, phi1, 1.0, kSmall.out1, kSmall.out2);
    const GridFunction2D w11 = wigner2d(phi1, phi1, 1.0, kSmall.out1, kSmall.out2);
    CHECK(std::abs(inner(w00, w01)) < 1e-6);
    CHECK(std::abs(inner(w00, w11)) < 1e-6);
}

TEST_CASE("wigner2d ground-state image matches its closed form pointwise") {
    // For f = g = phi_0 the defining integral is Gaussian:
    //   W_b(phi0, phi0)(x1, x2) = (2A)^{-1/2} pi^{-1/2} exp(-x1^2/2 + B^2/(4A)),
    // with A = (1 + 1/b^2)/2 and B = x1/b - i x2.
    const GridFunction1D phi0 = hermite_window(0, 1.0, kSmall.window);
    for (double b : {1.0, 2.0}) {
        const GridFunction2D w = wigner2d(phi0, phi0, b, kSmall.out1, kSmall.out2);
        const double a = 0.5 * (1.0 + 1.0 / (b * b));
        double worst = 0.0;
        for (std::size_t i = 8; i < kSmall.out1.n; i += 23) {
            for (std::size_t j = 8; j < kSmall.out2.n; j += 23) {
                const double x1 = kSmall.out1.node(i);
                const double x2 = kSmall.out2.node(j);
                const Complex bb(x1 / b, -x2);
                const Complex expected = std::exp(-0.5 * x1 * x1 + bb * bb / (4.0 * a)) /
                                         std::sqrt(2.0 * a * std::numbers::pi);
                const Complex got =
                    w.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                worst = std::max(worst, std::abs(got - expected));
            }
        }
        INFO("b = " << b);
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("Moyal identity battery") {
    const auto r = verify::moyal_identity(kSmall);
    INFO(r.name << ": " << r.max_deviation);
    CHECK(r.pass);
}

TEST_CASE("wigner2d support guard rejects windows that spill out") {
    // A sampled box function (no evaluator, no decay) truncates visibly once
    // the shift k/b walks past its support.
    std::vector<Complex> ones(kSmall.window.n, Complex(1.0, 0.0));
    const GridFunction1D box(kSmall.window, ones);
    const GridFunction1D phi0 = hermite_window(0, 1.0, kSmall.window);
    CHECK_THROWS_AS(wigner2d(box, phi0, 0.5, kSmall.out1, kSmall.out2), std::domain_error);
}

TEST_CASE("wigner3d separable input factorizes") {
    const GridSpec s2{20.0, 48};
    const GridFunction2D f =
        GridFunction2D::sample(kSmall.window, s2, [](double x1, double x3) {
            return Complex(hermite_gauss(0, 1.0, x1) * hermite_gauss(0, 1.0, x3), 0.0);
        });
    const GridFunction1D g = hermite_window(1, 1.0, kSmall.window);
    const GridSpec out{20.0, 64};
    const GridFunction3D w3 = wigner3d(f, g, 1.0, out, out);

    const GridFunction1D phi0_1d = hermite_window(0, 1.0, kSmall.window);
    const GridFunction2D w2 = wigner2d(phi0_1d, g, 1.0, out, out);
    double worst = 0.0;
    for (std::size_t m = 0; m < s2.n; ++m) {
        const double factor = hermite_gauss(0, 1.0, s2.node(m));
        worst = std::max(worst,
                         (w3.slices[m] - factor * w2.values()).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("wigner3d is an isometry") {
    const GridSpec s2{20.0, 48};
    const GridFunction2D f =
        GridFunction2D::sample(kSmall.window, s2, [](double x1, double x3) {
            return Complex(hermite_gauss(0, 1.0, x1) * hermite_gauss(1, 1.0, x3),
                           0.3 * hermite_gauss(1, 1.0, x1) * hermite_gauss(0, 1.0, x3));
        });
    const GridFunction1D g = hermite_window(0, 1.0, kSmall.window);
    const GridSpec out{20.0, 64};
    const GridFunction3D w3 = wigner3d(f, g, 1.0, out, out);
    CHECK(w3.norm() == Approx(f.norm() * g.norm()).margin(1e-6));
}

TEST_CASE("wigner3d of a zero payload is zero") {
    const GridSpec s2{20.0, 16};
    const GridFunction2D f =
        GridFunction2D::sample(kSmall.window, s2, [](double x1, double x3) {
            return Complex(hermite_gauss(0, 1.0, x1) * hermite_gauss(0, 1.0, x3), 0.0);
        });
    std::vector<Complex> zeros(kSmall.window.n, Complex(0.0, 0.0));
    const GridFunction1D g(kSmall.window, zeros);
    const GridFunction3D w3 = wigner3d(f, g, 1.0, GridSpec{20.0, 32}, GridSpec{20.0, 32});
    CHECK(w3.norm() == 0.0);
}

TEST_CASE("magnetic translation with R1 = 0 is a plain shift") {
    const GridSpec spec{16.0, 64};
    const GridFunction2D f = GridFunction2D::sample(spec, spec, [](double x1, double x2) {
        return Complex(std::exp(-0.5 * (x1 * x1 + x2 * x2)), 0.1 * x1);
    });
    const double h = spec.spacing();
    const GridFunction2D shifted = magnetic_translate(f, 0.0, 3.0 * h, 2.0);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 3; j < spec.n; ++j) {
            CHECK(shifted.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                  f.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 3)));
        }
    }
}

TEST_CASE("magnetic translation unitarity and composition") {
    for (const auto& r : {verify::translation_unitarity(), verify::translation_composition()}) {
        INFO(r.name << ": " << r.max_deviation);
        CHECK(r.pass);
    }
}

TEST_CASE("magnetic translation rejects off-lattice shifts") {
    const GridSpec spec{16.0, 64};
    const GridFunction2D f = GridFunction2D::sample(
        spec, spec, [](double, double) { return Complex(1.0, 0.0); });
    CHECK_THROWS_AS(magnetic_translate(f, 0.3 * spec.spacing(), 0.0, 1.0), std::domain_error);
}

TEST_CASE("projector application in window coordinates") {
    const GridFunction1D phi0 = hermite_window(0, 1.0, kSmall.window);
    const GridFunction1D phi1 = hermite_window(1, 1.0, kSmall.window);
    const WindowProjector k(phi0, 1.0);

    SECTION("f = psi passes through") {
        const WindowPair out = projector_apply(k, {phi0, phi1});
        for (std::size_t i = 0; i < phi0.spec().n; i += 7)
            CHECK(std::abs(out.f[i] - phi0[i]) < 1e-10);
    }
    SECTION("f orthogonal to psi annihilates") {
        const WindowPair out = projector_apply(k, {phi1, phi0});
        for (std::size_t i = 0; i < phi0.spec().n; i += 7) CHECK(std::abs(out.f[i]) < 1e-10);
    }
    SECTION("idempotence is exact") {
        const GridFunction1D mix = lin_comb(Complex(0.6, 0.0), phi0, Complex(0.8, 0.0), phi1);
        const WindowPair once = projector_apply(k, {mix, phi0});
        const WindowPair twice = projector_apply(k, once);
        for (std::size_t i = 0; i < phi0.spec().n; i += 7)
            CHECK(std::abs(once.f[i] - twice.f[i]) < 1e-12);
    }
}

TEST_CASE("window projector requires a unit window") {
    const GridFunction1D phi0 = hermite_window(0, 1.0, kSmall.window);
    CHECK_THROWS_AS(WindowProjector(scaled(Complex(0.7, 0.0), phi0), 1.0), std::domain_error);
}

TEST_CASE("projector trace density values") {
    const GridFunction1D phi0 = hermite_window(0, 1.0, kSmall.window);
    const GridFunction1D phi1 = hermite_window(1, 1.0, kSmall.window);
    const std::vector<double> xs{-1.0, 0.0, 0.7, 1.9};
    const double b = 1.0;
    const double unit = b / (2.0 * std::numbers::pi);

    SECTION("equal windows give b/2pi") {
        for (double v : projector_trace_density(phi0, phi0, b, xs))
            CHECK(v == Approx(unit).margin(1e-8));
    }
    SECTION("orthogonal windows give 0") {
        for (double v : projector_trace_density(phi0, phi1, b, xs)) CHECK(std::abs(v) < 1e-8);
    }
    SECTION("mixed window gives (b/2pi)/2") {
        const GridFunction1D mix =
            lin_comb(Complex(1.0 / std::numbers::sqrt2, 0.0), phi0,
                     Complex(1.0 / std::numbers::sqrt2, 0.0), phi1);
        for (double v : projector_trace_density(phi0, mix, b, xs))
            CHECK(v == Approx(0.5 * unit).margin(1e-6));
    }
    SECTION("non-unit windows are rejected") {
        CHECK_THROWS_AS(
            projector_trace_density(scaled(Complex(0.5, 0.0), phi0), phi0, b, xs),
            std::domain_error);
    }
}

TEST_CASE("commutator criterion on the listed window triples") {
    const GridFunction1D phi0 = hermite_window(0, 1.0, kSmall.window);
    const GridFunction1D phi1 = hermite_window(1, 1.0, kSmall.window);
    const GridFunction1D phi2 = hermite_window(2, 1.0, kSmall.window);
    const GridFunction1D mix =
        lin_comb(Complex(1.0 / std::numbers::sqrt2, 0.0), phi0,
                 Complex(1.0 / std::numbers::sqrt2, 0.0), phi1);
    // The test set contains f0 = phi1 with <f0, phi0> = 0, <f0, mix> != 0:
    // the witness the criterion needs.
    const std::vector<WindowPair> pairs{{phi0, phi0}, {phi1, phi0}, {phi2, phi2}};

    CHECK(commutator_check(phi0, phi1, 1.0, pairs).commute);
    CHECK(commutator_check(phi0, phi0, 1.0, pairs).commute);
    const auto mixed = commutator_check(phi0, mix, 1.0, pairs);
    CHECK_FALSE(mixed.commute);
    CHECK(mixed.max_deviation > 0.1);
    CHECK_THROWS_AS(commutator_check(phi0, phi1, 1.0, std::vector<WindowPair>{}),
                    std::domain_error);
}

TEST_CASE("remaining wigner batteries") {
    for (const auto& r :
         {verify::projector_trace_formula(kSmall), verify::trace_density_flatness(kSmall),
          verify::projector_commutator(kSmall), verify::projector_algebra(kSmall),
          verify::wigner_b_scaling()}) {
        INFO(r.name << ": " << r.max_deviation);
        CHECK(r.pass);
    }
}

TEST_CASE("csv dump has the documented shape") {
    const GridSpec tiny{4.0, 4};
    const GridFunction2D f = GridFunction2D::sample(
        tiny, tiny, [](double x1, double x2) { return Complex(x1, x2); });
    std::ostringstream os;
    dump_csv(os, f);
    const std::string text = os.str();
    CHECK(text.rfind("x1,x2,re,im\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 17);  // header + 16 rows
}
