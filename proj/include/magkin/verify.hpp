#pragma once

// Property batteries behind `magkin verify`: numerical checks of the
// identities the library is built on. Each check reports its worst observed
// deviation against the tolerance it must meet.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "magkin/gridfunction.hpp"
#include "magkin/kinetic2d.hpp"
#include "magkin/kinetic3d.hpp"
#include "magkin/landau.hpp"
#include "magkin/occupation.hpp"
#include "magkin/wigner.hpp"

namespace magkin {

struct PropertyResult {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    static PropertyResult of(std::string name, double dev, double tol) {
        PropertyResult r;
        r.name = std::move(name);
        r.max_deviation = dev;
        r.tolerance = tol;
        r.pass = dev <= tol;
        return r;
    }
};

namespace verify {

/// Closed form vs level-filling sum on a 200x200 grid of
/// (b, rho) in [0.1, 50] x [0, 10]; relative deviation against 1e-12.
inline PropertyResult omega2d_oracle_grid(std::size_t nb = 200, std::size_t nrho = 200) {
    double worst = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        const double b = 0.1 + (50.0 - 0.1) * static_cast<double>(i) / static_cast<double>(nb - 1);
        for (std::size_t j = 0; j < nrho; ++j) {
            const double rho = 10.0 * static_cast<double>(j) / static_cast<double>(nrho - 1);
            const double closed = omega2d(b, rho).omega;
            const double filled = omega2d_bathtub(b, rho);
            worst = std::max(worst, std::abs(closed - filled) / (1.0 + std::abs(closed)));
        }
    }
    return PropertyResult::of("omega2d closed form vs bathtub sum", worst, 1e-12);
}

/// pi rho^2 <= omega2d <= pi rho^2 + b^2/16pi over the test grid.
inline PropertyResult omega2d_bounds() {
    double worst = 0.0;
    for (std::size_t i = 0; i < 80; ++i) {
        const double b = 0.1 + (50.0 - 0.1) * static_cast<double>(i) / 79.0;
        for (std::size_t j = 0; j < 80; ++j) {
            const double rho = 10.0 * static_cast<double>(j) / 79.0;
            const double w = omega2d(b, rho).omega;
            const double lower = std::numbers::pi * rho * rho;
            const double upper = lower + b * b / (16.0 * std::numbers::pi);
            worst = std::max({worst, lower - w, w - upper});
        }
    }
    return PropertyResult::of("omega2d bounds pi rho^2 <= w <= pi rho^2 + b^2/16pi", worst,
                              1e-12);
}

/// omega2d(b, x) - pi x^2 is (b/2pi)-periodic.
inline PropertyResult omega2d_periodicity() {
    double worst = 0.0;
    for (double b : {0.37, 1.0, 4.0, 17.3, 50.0}) {
        const double period = b / (2.0 * std::numbers::pi);
        for (std::size_t j = 0; j < 200; ++j) {
            const double x = 10.0 * static_cast<double>(j) / 199.0;
            const double p0 = omega2d(b, x).omega - std::numbers::pi * x * x;
            const double x1 = x + period;
            const double p1 = omega2d(b, x1).omega - std::numbers::pi * x1 * x1;
            worst = std::max(worst, std::abs(p1 - p0));
        }
    }
    return PropertyResult::of("omega2d - pi x^2 is (b/2pi)-periodic", worst, 1e-12);
}

/// Strict monotonicity of omega2d(b, .) via finite differences.
inline PropertyResult omega2d_monotone() {
    double worst = 0.0;  // most negative forward difference
    for (double b : {0.37, 1.0, 4.0, 17.3, 50.0}) {
        double prev = omega2d(b, 0.0).omega;
        for (std::size_t j = 1; j < 400; ++j) {
            const double rho = 10.0 * static_cast<double>(j) / 399.0;
            const double cur = omega2d(b, rho).omega;
            worst = std::max(worst, prev - cur);
            prev = cur;
        }
    }
    return PropertyResult::of("omega2d strictly increasing in rho", worst, 0.0);
}

/// omega2d(2 pi rho / m, rho) = pi rho^2 for m = 1..10, and >= elsewhere.
inline PropertyResult omega2d_minimizing_fields() {
    double worst = 0.0;
    for (double rho : {0.3, 1.0, 2.7}) {
        const double tf = std::numbers::pi * rho * rho;
        for (int m = 1; m <= 10; ++m) {
            const double b = 2.0 * std::numbers::pi * rho / static_cast<double>(m);
            worst = std::max(worst, std::abs(omega2d(b, rho).omega - tf) / (1.0 + tf));
        }
    }
    return PropertyResult::of("omega2d(2 pi rho/m, rho) = pi rho^2, m = 1..10", worst, 1e-12);
}

/// Midpoint convexity of omega2d(b, .).
inline PropertyResult omega2d_convexity(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ub(0.1, 50.0), ur(0.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double b = ub(rng);
        const double x = ur(rng), y = ur(rng);
        const double mid = omega2d(b, 0.5 * (x + y)).omega;
        const double avg = 0.5 * (omega2d(b, x).omega + omega2d(b, y).omega);
        worst = std::max(worst, mid - avg);
    }
    return PropertyResult::of("omega2d midpoint convexity in rho", worst, 1e-10);
}

/// Fermi-level round trip: delta0 -> rho = (b/2pi^2) g(delta0) -> delta0.
inline PropertyResult fermi_round_trip() {
    double worst = 0.0;
    for (double b : {0.7, 1.0, 3.2}) {
        for (double factor : {1.5, 7.3, 40.1}) {
            const double delta0 = factor * b;
            const double rho =
                b / (2.0 * std::numbers::pi * std::numbers::pi) *
                detail::fermi_count_function(b, delta0);
            const double delta = fermi_level(b, rho, 1e-13).delta;
            worst = std::max(worst, std::abs(delta - delta0) / delta0);
        }
    }
    return PropertyResult::of("fermi level round trip on delta0 in {1.5, 7.3, 40.1} b", worst,
                              1e-10);
}

/// Constraint reproduction (b/2pi^2) sum (delta - eps_n)_+^{1/2} = rho.
inline PropertyResult fermi_constraint(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ub(0.2, 20.0), ur(0.05, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
        const double b = ub(rng), rho = ur(rng);
        const auto sol = fermi_level(b, rho, 1e-13);
        const double back = b / (2.0 * std::numbers::pi * std::numbers::pi) *
                            detail::fermi_count_function(b, sol.delta);
        worst = std::max(worst, std::abs(back - rho) / rho);
    }
    return PropertyResult::of("fermi level reproduces the density constraint", worst, 1e-12);
}

struct AdjudicationReport {
    PropertyResult result;
    std::size_t proof_matches = 0;
    std::size_t prop_matches = 0;
    std::size_t points = 0;
};

/// Exactly one closed-form variant must coincide with the filled-integral
/// value on every test point.
inline AdjudicationReport omega3d_variant_adjudication(std::uint64_t seed,
                                                       std::size_t points = 50) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ub(0.2, 20.0), ur(0.05, 5.0);
    AdjudicationReport report;
    report.points = points;
    double worst_proof = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double b = ub(rng), rho = ur(rng);
        const double reference = omega3d_integral(b, rho).omega;
        const double proof = omega3d_closed(b, rho, Omega3dVariant::proof_form).omega;
        const double prop = omega3d_closed(b, rho, Omega3dVariant::prop_form).omega;
        const double dev_proof = std::abs(proof - reference) / (1.0 + std::abs(reference));
        const double dev_prop = std::abs(prop - reference) / (1.0 + std::abs(reference));
        if (dev_proof <= 1e-10) ++report.proof_matches;
        if (dev_prop <= 1e-10) ++report.prop_matches;
        worst_proof = std::max(worst_proof, dev_proof);
    }
    report.result = PropertyResult::of("omega3d variant adjudication (proof form wins)",
                                       worst_proof, 1e-10);
    report.result.pass = report.result.pass && report.proof_matches == points &&
                         report.prop_matches == 0;
    return report;
}

/// omega3d(lambda^2 b, lambda^3 rho) = lambda^5 omega3d(b, rho).
inline PropertyResult omega3d_homogeneity() {
    double worst = 0.0;
    for (double b : {0.6, 1.7, 5.0}) {
        for (double rho : {0.3, 1.0}) {
            const double base = omega3d_integral(b, rho).omega;
            for (double lambda : {1.0, 2.0, 4.0}) {
                const double scaled =
                    omega3d_integral(lambda * lambda * b, lambda * lambda * lambda * rho).omega;
                const double l5 = std::pow(lambda, 5);
                worst = std::max(worst, std::abs(scaled - l5 * base) / (l5 * base));
            }
        }
    }
    return PropertyResult::of("omega3d homogeneity under (b, rho) -> (l^2 b, l^3 rho)", worst,
                              1e-8);
}

/// Single-level closed form vs the integral above the threshold.
inline PropertyResult omega3d_large_field_identity(std::uint64_t seed, std::size_t points = 20) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(0.05, 2.0), uf(1.001, 8.0);
    double worst = 0.0;
    bool single = true;
    for (std::size_t i = 0; i < points; ++i) {
        const double rho = ur(rng);
        const double b = single_level_threshold(rho) * uf(rng);
        const auto closed = omega3d_large_field(b, rho);
        const auto reference = omega3d_integral(b, rho);
        single = single && reference.fermi.occupied_levels == 1;
        worst = std::max(worst,
                         std::abs(closed.omega - reference.omega) / (1.0 + reference.omega));
    }
    PropertyResult r = PropertyResult::of("omega3d single-level formula above the threshold",
                                          worst, 1e-12);
    r.pass = r.pass && single;
    return r;
}

/// omega3d nondecreasing in rho at fixed b.
inline PropertyResult omega3d_monotone_in_rho() {
    double worst = 0.0;
    for (double b : {0.5, 2.0, 10.0}) {
        double prev = 0.0;
        for (int j = 1; j <= 60; ++j) {
            const double rho = 3.0 * static_cast<double>(j) / 60.0;
            const double w = omega3d_integral(b, rho).omega;
            worst = std::max(worst, prev - w);
            prev = w;
        }
    }
    return PropertyResult::of("omega3d nondecreasing in rho", worst, 0.0);
}

/// Small-field constant: Cauchy tail and nearest-candidate match.
struct SmallFieldReport {
    PropertyResult result;
    SmallFieldFit fit;
};

inline SmallFieldReport omega3d_small_field(double rho = 1.0) {
    const std::array<double, 4> bs{1e-1, 1e-2, 1e-3, 1e-4};
    SmallFieldReport report;
    report.fit = omega3d_small_field_limit(rho, bs);
    double dev = report.fit.last_relative_change;
    report.result = PropertyResult::of("omega3d small-field constant is Cauchy (<0.5%)", dev,
                                       5e-3);
    // Must land on exactly one candidate within 1%.
    std::size_t within = 0;
    for (double d : report.fit.relative_distance)
        if (d < 1e-2) ++within;
    report.result.pass = report.result.pass && within == 1;
    return report;
}

// ---------------------------------------------------------------------------
// Wigner-side batteries.

struct WignerSetup {
    GridSpec window{24.0, 2048};
    GridSpec out1{24.0, 256};
    GridSpec out2{24.0, 256};
};

/// Moyal identity <W(f1,g1), W(f2,g2)> = <f1,f2> <g2,g1> over all pairs of
/// window/payload pairs from {phi_0..phi_3}^2 at b in {0.5, 1, 4}, with the
/// left side by full 2d quadrature.
inline PropertyResult moyal_identity(const WignerSetup& setup = {}) {
    double worst = 0.0;
    std::vector<GridFunction1D> phi;
    for (unsigned n = 0; n < 4; ++n) phi.push_back(hermite_window(n, 1.0, setup.window));
    for (double b : {0.5, 1.0, 4.0}) {
        std::vector<GridFunction2D> images;
        images.reserve(16);
        for (unsigned fi = 0; fi < 4; ++fi)
            for (unsigned gi = 0; gi < 4; ++gi)
                images.push_back(wigner2d(phi[fi], phi[gi], b, setup.out1, setup.out2));
        for (unsigned a = 0; a < 16; ++a) {
            for (unsigned c = 0; c < 16; ++c) {
                const Complex lhs = inner(images[a], images[c]);
                const Complex rhs = inner(phi[a / 4], phi[c / 4]) *
                                    inner(phi[c % 4], phi[a % 4]);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    return PropertyResult::of("Moyal identity over {phi_0..phi_3}^2, b in {0.5, 1, 4}", worst,
                              1e-6);
}

/// Norm preservation of magnetic translations on lattice-aligned shifts.
inline PropertyResult translation_unitarity() {
    const GridSpec spec{24.0, 256};
    GridFunction2D f = GridFunction2D::sample(spec, spec, [](double x1, double x2) {
        return Complex(std::exp(-0.5 * (x1 * x1 + x2 * x2)) * (1.0 + 0.3 * x1),
                       0.2 * std::exp(-0.5 * (x1 * x1 + x2 * x2)) * x2);
    });
    const double h = spec.spacing();
    const double norm0 = f.norm();
    double worst = 0.0;
    for (double b : {0.5, 2.0}) {
        for (auto [p, q] : {std::pair{3, 5}, std::pair{-7, 2}, std::pair{0, 11}}) {
            const GridFunction2D shifted = magnetic_translate(f, p * h, q * h, b);
            worst = std::max(worst, std::abs(shifted.norm() - norm0) / norm0);
        }
    }
    return PropertyResult::of("magnetic translation unitarity", worst, 1e-12);
}

/// Composition rule m_R m_Rt = e^{i b R2 Rt1} m_{R + Rt}, pointwise.
inline PropertyResult translation_composition() {
    const GridSpec spec{24.0, 256};
    GridFunction2D f = GridFunction2D::sample(spec, spec, [](double x1, double x2) {
        return Complex(std::exp(-0.5 * (x1 * x1 + x2 * x2)),
                       0.4 * x1 * std::exp(-0.5 * (x1 * x1 + x2 * x2)));
    });
    const double h = spec.spacing();
    double worst = 0.0;
    for (double b : {0.5, 2.0}) {
        for (auto [shift_a, shift_b] :
             {std::pair{std::pair{3, 5}, std::pair{-2, 4}},
              std::pair{std::pair{-6, 1}, std::pair{2, -3}}}) {
            const double r1 = shift_a.first * h, r2 = shift_a.second * h;
            const double t1 = shift_b.first * h, t2 = shift_b.second * h;
            const GridFunction2D lhs = magnetic_translate(magnetic_translate(f, t1, t2, b), r1,
                                                          r2, b);
            GridFunction2D rhs = magnetic_translate(f, r1 + t1, r2 + t2, b);
            const Complex phase = std::polar(1.0, b * r2 * t1);
            rhs.values() *= phase;
            worst = std::max(worst, (lhs.values() - rhs.values()).cwiseAbs().maxCoeff());
        }
    }
    return PropertyResult::of("magnetic translation composition phase", worst, 1e-12);
}

/// Trace density of K_psi K_psitilde: flat in x and equal to
/// (b/2pi) |<psi, psitilde>|^2.
inline PropertyResult projector_trace_formula(const WignerSetup& setup = {}) {
    const GridFunction1D phi0 = hermite_window(0, 1.0, setup.window);
    const GridFunction1D phi1 = hermite_window(1, 1.0, setup.window);
    const GridFunction1D mix =
        lin_comb(Complex(1.0 / std::numbers::sqrt2, 0.0), phi0,
                 Complex(1.0 / std::numbers::sqrt2, 0.0), phi1);
    const std::vector<double> xs{-1.7, -0.4, 0.0, 0.9, 2.3};
    double worst = 0.0;
    for (double b : {0.5, 1.0, 4.0}) {
        const double unit = b / (2.0 * std::numbers::pi);
        struct Case {
            const GridFunction1D* a;
            const GridFunction1D* bb;
        };
        for (const auto& cs : {Case{&phi0, &phi0}, Case{&phi0, &phi1}, Case{&phi0, &mix}}) {
            std::vector<double> values;
            try {
                values = projector_trace_density(*cs.a, *cs.bb, b, xs);
            } catch (const std::runtime_error&) {
                worst = std::max(worst, 1e6);
                continue;
            }
            const double expected = unit * std::norm(inner(*cs.a, *cs.bb));
            for (double v : values) worst = std::max(worst, std::abs(v - expected));
        }
    }
    return PropertyResult::of("projector trace density equals (b/2pi) |<psi,psit>|^2", worst,
                              1e-6);
}

/// Commutator criterion: [K_psi, K_psitilde] = 0 iff psi _|_ psitilde or
/// psi = +- psitilde, witnessed on a test set containing the constructed f0.
inline PropertyResult projector_commutator(const WignerSetup& setup = {}) {
    const GridFunction1D phi0 = hermite_window(0, 1.0, setup.window);
    const GridFunction1D phi1 = hermite_window(1, 1.0, setup.window);
    const GridFunction1D phi2 = hermite_window(2, 1.0, setup.window);
    const GridFunction1D mix =
        lin_comb(Complex(1.0 / std::numbers::sqrt2, 0.0), phi0,
                 Complex(1.0 / std::numbers::sqrt2, 0.0), phi1);
    const std::vector<WindowPair> pairs{{phi0, phi0}, {phi1, phi0}, {phi2, phi1}, {mix, phi2}};
    const double b = 1.0;

    double worst = 0.0;
    const auto expect = [&](const GridFunction1D& a, const GridFunction1D& t, bool commute) {
        const auto report = commutator_check(a, t, b, pairs);
        if (report.commute != commute)
            worst = std::max(worst, commute ? report.max_deviation : 1.0);
    };
    expect(phi0, phi1, true);                      // orthogonal windows
    expect(phi0, phi0, true);                      // equal windows
    expect(phi0, scaled(Complex(-1.0, 0.0), phi0), true);  // sign flip
    expect(phi0, mix, false);                      // overlapping, distinct
    return PropertyResult::of("commutator vanishes iff windows orthogonal or equal", worst,
                              1e-8);
}

/// Projector idempotence and self-adjointness in window coordinates,
/// with inner products reduced through the Moyal identity.
inline PropertyResult projector_algebra(const WignerSetup& setup = {}) {
    const GridFunction1D phi0 = hermite_window(0, 1.0, setup.window);
    const GridFunction1D phi1 = hermite_window(1, 1.0, setup.window);
    const GridFunction1D mix =
        lin_comb(Complex(0.6, 0.0), phi0, Complex(0.8, 0.0), phi1);
    const WindowProjector k(phi0, 1.0);

    double worst = 0.0;
    // Idempotence: K(K(F)) = K(F), exactly, in window coordinates.
    for (const auto& pair : {WindowPair{mix, phi1}, WindowPair{phi1, phi0}}) {
        const WindowPair once = projector_apply(k, pair);
        const WindowPair twice = projector_apply(k, once);
        for (std::size_t i = 0; i < once.f.spec().n; ++i)
            worst = std::max(worst, std::abs(once.f[i] - twice.f[i]));
    }
    // Self-adjointness: <K F1, F2> = <F1, K F2> with Moyal-reduced products:
    // <W(a1,g1), W(a2,g2)> = <a1,a2> <g2,g1>.
    const auto moyal_inner = [](const WindowPair& u, const WindowPair& v) {
        return inner(u.f, v.f) * inner(v.g, u.g);
    };
    const GridFunction1D mixc =
        lin_comb(Complex(0.6, 0.0), phi0, Complex(0.0, 0.8), phi1);
    const GridFunction1D mix2 = lin_comb(Complex(0.8, 0.0), phi0, Complex(0.6, 0.0), phi1);
    for (const auto& [f1, f2] : {std::pair{WindowPair{mix, phi1}, WindowPair{mix2, phi1}},
                                 std::pair{WindowPair{mixc, phi0}, WindowPair{mix2, phi0}}}) {
        const Complex lhs = moyal_inner(projector_apply(k, f1), f2);
        const Complex rhs = moyal_inner(f1, projector_apply(k, f2));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return PropertyResult::of("projector idempotent and self-adjoint", worst, 1e-10);
}

/// Doubling b halves the x1-spread of W_b(f, g) (narrow window, wide
/// payload; second moments of |W|^2).
inline PropertyResult wigner_b_scaling() {
    const GridSpec window{24.0, 1024};
    const GridSpec out{16.0, 192};
    const GridFunction1D f = hermite_window(0, 64.0, window);  // narrow
    const GridFunction1D g = hermite_window(0, 1.0, window);   // wide
    const auto spread = [&](double b) {
        const GridFunction2D w = wigner2d(f, g, b, out, out);
        double mass = 0.0, second = 0.0;
        for (std::size_t i = 0; i < out.n; ++i) {
            const double x1 = out.node(i);
            for (std::size_t j = 0; j < out.n; ++j) {
                const double m = std::norm(
                    w.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
                mass += m;
                second += x1 * x1 * m;
            }
        }
        return std::sqrt(second / mass);
    };
    const double ratio = spread(1.0) / spread(2.0);
    return PropertyResult::of("doubling b halves the x1-spread of W_b(f, g)",
                              std::abs(ratio - 2.0) / 2.0, 5e-2);
}

/// Flatness of the trace density across x1 samples (std against the level).
inline PropertyResult trace_density_flatness(const WignerSetup& setup = {}) {
    const GridFunction1D phi0 = hermite_window(0, 1.0, setup.window);
    const std::vector<double> xs{-2.0, -1.0, -0.3, 0.0, 0.6, 1.4, 2.2};
    double worst = 0.0;
    for (double b : {0.5, 1.0, 4.0}) {
        std::vector<double> values;
        try {
            values = projector_trace_density(phi0, phi0, b, xs);
        } catch (const std::runtime_error&) {
            // The routine itself rejects non-flat values.
            worst = std::max(worst, 1e6);
            continue;
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        const double stddev = std::sqrt(var / static_cast<double>(values.size()));
        worst = std::max(worst, stddev / (1e-8 * b / (2.0 * std::numbers::pi)));
    }
    // Normalized: must be <= 1 to satisfy std <= 1e-8 b/2pi.
    return PropertyResult::of("trace density flat across x1 (std / (1e-8 b/2pi))", worst, 1.0);
}

}  // namespace verify

/// The kinetic suite of `magkin verify`.
inline std::vector<PropertyResult> verify_kinetic(std::uint64_t seed) {
    std::vector<PropertyResult> out;
    out.push_back(verify::omega2d_oracle_grid());
    out.push_back(verify::omega2d_bounds());
    out.push_back(verify::omega2d_periodicity());
    out.push_back(verify::omega2d_monotone());
    out.push_back(verify::omega2d_minimizing_fields());
    out.push_back(verify::omega2d_convexity(seed));
    out.push_back(verify::fermi_round_trip());
    out.push_back(verify::fermi_constraint(seed + 1));
    out.push_back(verify::omega3d_variant_adjudication(seed + 2).result);
    out.push_back(verify::omega3d_homogeneity());
    out.push_back(verify::omega3d_large_field_identity(seed + 3));
    out.push_back(verify::omega3d_monotone_in_rho());
    out.push_back(verify::omega3d_small_field().result);
    return out;
}

/// The wigner suite of `magkin verify`.
inline std::vector<PropertyResult> verify_wigner(std::uint64_t seed) {
    (void)seed;  // the wigner batteries are deterministic
    std::vector<PropertyResult> out;
    out.push_back(verify::moyal_identity());
    out.push_back(verify::translation_unitarity());
    out.push_back(verify::translation_composition());
    out.push_back(verify::projector_trace_formula());
    out.push_back(verify::trace_density_flatness());
    out.push_back(verify::projector_commutator());
    out.push_back(verify::projector_algebra());
    out.push_back(verify::wigner_b_scaling());
    return out;
}

}  // namespace magkin
