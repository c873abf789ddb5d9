#pragma once

// Sampled complex functions on uniform grids. A GridFunction carries its
// samples plus, when the function came from an analytic recipe (Hermite-Gauss
// windows and their combinations), an evaluator usable at arbitrary points.
// Off-grid evaluation falls back to 4-point Lagrange interpolation and to 0
// outside the box.
//
// Inner products conjugate the SECOND argument: <u, v> = h sum u_i conj(v_i).
// With this convention the Moyal identity reads
// <W(f1,g1), W(f2,g2)> = <f1,f2> <g2,g1> and the window projector acts as
// K_psi W(f,g) = <f,psi> W(psi,g).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "magkin/grid.hpp"
#include "magkin/landau.hpp"

namespace magkin {

using Complex = std::complex<double>;

class GridFunction1D {
  public:
    using Evaluator = std::function<Complex(double)>;

    GridFunction1D(GridSpec spec, std::vector<Complex> samples, Evaluator evaluator = {})
        : spec_(spec), samples_(std::move(samples)), evaluator_(std::move(evaluator)) {
        if (samples_.size() != spec_.n)
            throw std::invalid_argument("GridFunction1D: sample count does not match grid");
    }

    static GridFunction1D sample(GridSpec spec, Evaluator evaluator) {
        std::vector<Complex> samples(spec.n);
        for (std::size_t i = 0; i < spec.n; ++i) samples[i] = evaluator(spec.node(i));
        return GridFunction1D(spec, std::move(samples), std::move(evaluator));
    }

    const GridSpec& spec() const { return spec_; }
    const std::vector<Complex>& samples() const { return samples_; }
    Complex operator[](std::size_t i) const { return samples_[i]; }
    bool has_evaluator() const { return static_cast<bool>(evaluator_); }

    /// Value at an arbitrary point: analytic evaluator when available,
    /// otherwise centered cubic Lagrange interpolation, 0 outside the box.
    Complex eval(double x) const {
        if (evaluator_) return evaluator_(x);
        const double h = spec_.spacing();
        const double u = (x - spec_.left()) / h;
        if (u < 0.0 || u > static_cast<double>(spec_.n - 1)) return {0.0, 0.0};
        auto i1 = static_cast<std::ptrdiff_t>(std::floor(u));
        const auto n = static_cast<std::ptrdiff_t>(spec_.n);
        if (i1 < 1) i1 = 1;
        if (i1 > n - 3) i1 = n - 3;
        const double s = u - static_cast<double>(i1);
        const double w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        const double w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        const double w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        const double w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        return w0 * samples_[i1 - 1] + w1 * samples_[i1] + w2 * samples_[i1 + 1] +
               w3 * samples_[i1 + 2];
    }

    double norm() const {
        double acc = 0.0;
        for (const Complex& v : samples_) acc += std::norm(v);
        return std::sqrt(acc * spec_.spacing());
    }

    /// Fraction of |f|^2 quadrature mass in the outermost `fraction` of the
    /// box on each side. Used by the transform support guards.
    double edge_mass_fraction(double fraction = 0.02) const {
        const auto margin = static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(spec_.n)));
        double edge = 0.0, total = 0.0;
        for (std::size_t i = 0; i < spec_.n; ++i) {
            const double m = std::norm(samples_[i]);
            total += m;
            if (i < margin || i + margin >= spec_.n) edge += m;
        }
        return total > 0.0 ? edge / total : 0.0;
    }

  private:
    GridSpec spec_;
    std::vector<Complex> samples_;
    Evaluator evaluator_;
};

/// <u, v> = h sum u_i conj(v_i); both functions must share a grid.
inline Complex inner(const GridFunction1D& u, const GridFunction1D& v) {
    if (!(u.spec() == v.spec()))
        throw std::invalid_argument("inner: grid functions live on different grids");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < u.spec().n; ++i) acc += u[i] * std::conj(v[i]);
    return acc * u.spec().spacing();
}

/// a*f + b*g on a shared grid; evaluators compose when both inputs have one.
inline GridFunction1D lin_comb(Complex a, const GridFunction1D& f, Complex b,
                               const GridFunction1D& g) {
    if (!(f.spec() == g.spec()))
        throw std::invalid_argument("lin_comb: grid functions live on different grids");
    std::vector<Complex> samples(f.spec().n);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = a * f[i] + b * g[i];
    GridFunction1D::Evaluator ev;
    if (f.has_evaluator() && g.has_evaluator()) {
        ev = [a, f, b, g](double x) { return a * f.eval(x) + b * g.eval(x); };
    }
    return GridFunction1D(f.spec(), std::move(samples), std::move(ev));
}

inline GridFunction1D scaled(Complex a, const GridFunction1D& f) {
    std::vector<Complex> samples(f.spec().n);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = a * f[i];
    GridFunction1D::Evaluator ev;
    if (f.has_evaluator()) ev = [a, f](double x) { return a * f.eval(x); };
    return GridFunction1D(f.spec(), std::move(samples), std::move(ev));
}

/// Hermite-Gauss window phi_n^alpha sampled with its analytic evaluator.
inline GridFunction1D hermite_window(unsigned n, double alpha, GridSpec spec) {
    return GridFunction1D::sample(
        spec, [n, alpha](double x) { return Complex(hermite_gauss(n, alpha, x), 0.0); });
}

class GridFunction2D {
  public:
    using Evaluator = std::function<Complex(double, double)>;

    GridFunction2D(GridSpec spec1, GridSpec spec2, Eigen::MatrixXcd values,
                   Evaluator evaluator = {})
        : spec1_(spec1), spec2_(spec2), values_(std::move(values)),
          evaluator_(std::move(evaluator)) {
        if (values_.rows() != static_cast<Eigen::Index>(spec1_.n) ||
            values_.cols() != static_cast<Eigen::Index>(spec2_.n))
            throw std::invalid_argument("GridFunction2D: value shape does not match grids");
    }

    static GridFunction2D sample(GridSpec spec1, GridSpec spec2, Evaluator evaluator) {
        Eigen::MatrixXcd values(spec1.n, spec2.n);
        for (std::size_t i = 0; i < spec1.n; ++i)
            for (std::size_t j = 0; j < spec2.n; ++j)
                values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    evaluator(spec1.node(i), spec2.node(j));
        return GridFunction2D(spec1, spec2, std::move(values), std::move(evaluator));
    }

    const GridSpec& spec1() const { return spec1_; }
    const GridSpec& spec2() const { return spec2_; }
    const Eigen::MatrixXcd& values() const { return values_; }
    Eigen::MatrixXcd& values() { return values_; }
    bool has_evaluator() const { return static_cast<bool>(evaluator_); }
    Complex eval(double x1, double x2) const {
        if (!evaluator_)
            throw std::logic_error("GridFunction2D: no evaluator attached");
        return evaluator_(x1, x2);
    }

    /// Row i as a 1d function of the second coordinate (used for slicing).
    GridFunction1D row(std::size_t i) const {
        std::vector<Complex> samples(spec2_.n);
        for (std::size_t j = 0; j < spec2_.n; ++j)
            samples[j] = values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        return GridFunction1D(spec2_, std::move(samples));
    }

    double norm() const {
        return std::sqrt(values_.squaredNorm() * spec1_.spacing() * spec2_.spacing());
    }

  private:
    GridSpec spec1_, spec2_;
    Eigen::MatrixXcd values_;
    Evaluator evaluator_;
};

/// <U, V> = h1 h2 sum U_ij conj(V_ij) on a shared pair of grids.
inline Complex inner(const GridFunction2D& u, const GridFunction2D& v) {
    if (!(u.spec1() == v.spec1()) || !(u.spec2() == v.spec2()))
        throw std::invalid_argument("inner: grid functions live on different grids");
    const Complex acc = (u.values().array() * v.values().array().conjugate()).sum();
    return acc * u.spec1().spacing() * u.spec2().spacing();
}

/// Stack of x3-slices W(.,.,x3_m): the image of the 3d transform.
struct GridFunction3D {
    GridSpec spec1, spec2, spec3;
    std::vector<Eigen::MatrixXcd> slices;  // slices[m](i, j) = W(x1_i, x2_j, x3_m)

    double norm() const {
        double acc = 0.0;
        for (const auto& s : slices) acc += s.squaredNorm();
        return std::sqrt(acc * spec1.spacing() * spec2.spacing() * spec3.spacing());
    }
};

}  // namespace magkin
