#pragma once

// Landau-level building blocks: the magnetic field triple, harmonic
// oscillator spectra eps_n = (2n+1)*alpha with Hermite-Gauss eigenfunctions,
// and the anisotropic dispersion
//
//     eps_n(k) = |B|(2n+1) + (1 - b2^2/|B|^2) k^2,   B = (0, b2, b3),
//
// which is the fiber spectrum of the Landau operator for a field with no
// x1-component. Everything here is a pure function of its arguments.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "magkin/errors.hpp"
#include "magkin/grid.hpp"

namespace magkin {

/// Uniform magnetic field (b1, b2, b3) with cached magnitude.
class MagneticField {
  public:
    MagneticField(double b1, double b2, double b3)
        : b1_(b1), b2_(b2), b3_(b3), magnitude_(std::hypot(b1, b2, b3)) {}

    double b1() const { return b1_; }
    double b2() const { return b2_; }
    double b3() const { return b3_; }
    double magnitude() const { return magnitude_; }

  private:
    double b1_, b2_, b3_;
    double magnitude_;
};

/// eps_n = (2n+1) * alpha.
inline double oscillator_eigenvalue(unsigned n, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("oscillator_eigenvalue: alpha must be > 0");
    return (2.0 * static_cast<double>(n) + 1.0) * alpha;
}

/// Normalized Hermite-Gauss function of the oscillator -d^2/dx^2 + alpha^2 x^2:
/// returns alpha^{1/4} phi_n(sqrt(alpha) x). Evaluated with the three-term
/// recurrence on the normalized functions; the explicit H_n formula overflows
/// long before n ~ 150 and is never used here.
inline double hermite_gauss(unsigned n, double alpha, double x) {
    if (!(alpha > 0.0)) throw std::domain_error("hermite_gauss: alpha must be > 0");
    const double u = std::sqrt(alpha) * x;
    double prev = 0.0;
    double phi = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
    for (unsigned k = 0; k < n; ++k) {
        const double kd = static_cast<double>(k);
        const double next =
            u * std::sqrt(2.0 / (kd + 1.0)) * phi - std::sqrt(kd / (kd + 1.0)) * prev;
        prev = phi;
        phi = next;
    }
    return std::pow(alpha, 0.25) * phi;
}

/// Oscillator spectrum at frequency alpha.
class OscillatorSpectrum {
  public:
    explicit OscillatorSpectrum(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0)) throw std::domain_error("OscillatorSpectrum: alpha must be > 0");
    }
    double alpha() const { return alpha_; }
    double eigenvalue(unsigned n) const { return oscillator_eigenvalue(n, alpha_); }
    double eigenfunction(unsigned n, double x) const { return hermite_gauss(n, alpha_, x); }

  private:
    double alpha_;
};

/// Fibered dispersion of the Landau operator for B = (0, b2, b3).
class AnisotropicDispersion {
  public:
    explicit AnisotropicDispersion(const MagneticField& field) : field_(field) {
        if (field.b1() != 0.0)
            throw unsupported_configuration(
                "AnisotropicDispersion: requires b1 = 0 (normal form (0, b2, b3))");
        // b3 = 0 flattens every band; the dispersion is defined for b3 != 0.
        if (field.b3() == 0.0)
            throw unsupported_configuration("AnisotropicDispersion: requires b3 != 0");
        if (!(field.magnitude() > 0.0))
            throw std::domain_error("AnisotropicDispersion: |B| must be > 0");
    }

    const MagneticField& field() const { return field_; }

    /// |B|(2n+1) + (1 - b2^2/|B|^2) k^2. At b2 = 0 this is b3(2n+1) + k^2.
    double value(unsigned n, double k) const {
        const double B = field_.magnitude();
        const double r = field_.b2() / B;
        return B * (2.0 * static_cast<double>(n) + 1.0) + (1.0 - r * r) * k * k;
    }

    /// Transverse level energy |B|(2n+1) (the k = 0 value).
    double level(unsigned n) const { return field_.magnitude() * (2.0 * n + 1.0); }

  private:
    MagneticField field_;
};

/// Default box for sampling phi_n^alpha: [-c, c]/sqrt(alpha). c = 12 keeps
/// the truncated Gaussian mass below 1e-30 for n <= 12.
inline GridSpec oscillator_grid(double alpha, double c = 12.0, std::size_t n = 4096) {
    if (!(alpha > 0.0)) throw std::domain_error("oscillator_grid: alpha must be > 0");
    return GridSpec(2.0 * c / std::sqrt(alpha), n);
}

/// Self-check: assembles the 3-point finite-difference operator
/// -d^2/dx^2 + alpha^2 x^2 on the grid (Dirichlet ends) and returns
/// ||(H - eps_n) phi_n|| / ||phi_n||. Second order in the spacing.
inline double oscillator_eigen_residual(unsigned n, double alpha, const GridSpec& grid) {
    if (!(alpha > 0.0)) throw std::domain_error("oscillator_eigen_residual: alpha must be > 0");
    if (grid.n < 8) throw std::domain_error("oscillator_eigen_residual: grid too small");
    const std::size_t n_points = grid.n;
    const double h = grid.spacing();
    std::vector<double> x(n_points), phi(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        x[i] = grid.node(i);
        phi[i] = hermite_gauss(n, alpha, x[i]);
    }
    // Truncated mass beyond the box must be negligible before the residual
    // means anything.
    double mass = 0.0;
    for (double v : phi) mass += v * v;
    mass *= h;
    if (std::abs(1.0 - mass) > 1e-8)
        throw std::domain_error("oscillator_eigen_residual: grid truncates " +
                                std::to_string(std::abs(1.0 - mass)) + " of the state's mass");

    const double eps = oscillator_eigenvalue(n, alpha);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n_points; ++i) {
        const double left = (i > 0) ? phi[i - 1] : 0.0;
        const double right = (i + 1 < n_points) ? phi[i + 1] : 0.0;
        const double lap = (2.0 * phi[i] - left - right) / (h * h);
        const double r = lap + alpha * alpha * x[i] * x[i] * phi[i] - eps * phi[i];
        num += r * r;
        den += phi[i] * phi[i];
    }
    return std::sqrt(num / den);
}

}  // namespace magkin
