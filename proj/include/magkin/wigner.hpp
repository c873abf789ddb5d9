#pragma once

// Windowed (Fourier-Wigner) transform at field strength b,
//
//     W_b(f, g)(x1, x2) = (2pi)^{-1/2} int f(x1 - k/b) conj(g(k)) e^{-i k x2} dk,
//
// its 3d slice-wise extension, magnetic translations on grids, and the window
// projectors K_psi acting in window coordinates. The Moyal identity
// <W(f1,g1), W(f2,g2)> = <f1,f2> <g2,g1> makes W an isometry; it also reduces
// every inner product among transform images to cheap 1d quadratures, which
// is how the projector algebra below is evaluated. Full 2d quadrature is kept
// for cross-validation tests only.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "magkin/gridfunction.hpp"

namespace magkin {

namespace detail {

inline void check_window_support(const GridFunction1D& f, double need_lo, double need_hi,
                                 const char* who) {
    const double lo = f.spec().left();
    const double hi = f.spec().right();
    if (need_lo >= lo && need_hi <= hi) return;
    if (f.edge_mass_fraction() > 1e-8)
        throw std::domain_error(std::string(who) +
                                ": window support truncated; needs [" + std::to_string(need_lo) +
                                ", " + std::to_string(need_hi) + "] but the window box is [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace detail

/// W_b(f, g) on the requested output grids, by trapezoidal quadrature over
/// g's grid at every output point. Assembled as a complex matrix product:
/// A(i,j) = f(x1_i - k_j/b) conj(g_j) h_k against E(j,l) = e^{-i k_j x2_l}.
inline GridFunction2D wigner2d(const GridFunction1D& f, const GridFunction1D& g, double b,
                               GridSpec out1, GridSpec out2) {
    if (!(b > 0.0)) throw std::domain_error("wigner2d: b must be > 0");
    const GridSpec& kg = g.spec();
    detail::check_window_support(f, out1.left() - kg.right() / b, out1.right() - kg.left() / b,
                                 "wigner2d");

    const auto n1 = static_cast<Eigen::Index>(out1.n);
    const auto n2 = static_cast<Eigen::Index>(out2.n);
    const auto nk = static_cast<Eigen::Index>(kg.n);
    const double hk = kg.spacing();

    Eigen::MatrixXcd a(n1, nk);
    for (Eigen::Index i = 0; i < n1; ++i) {
        const double x1 = out1.node(static_cast<std::size_t>(i));
        for (Eigen::Index j = 0; j < nk; ++j) {
            const double k = kg.node(static_cast<std::size_t>(j));
            a(i, j) = f.eval(x1 - k / b) * std::conj(g[static_cast<std::size_t>(j)]) * hk;
        }
    }
    Eigen::MatrixXcd e(nk, n2);
    for (Eigen::Index j = 0; j < nk; ++j) {
        const double k = kg.node(static_cast<std::size_t>(j));
        for (Eigen::Index l = 0; l < n2; ++l) {
            const double x2 = out2.node(static_cast<std::size_t>(l));
            e(j, l) = std::polar(1.0, -k * x2);
        }
    }
    Eigen::MatrixXcd w = a * e;
    w *= 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return GridFunction2D(out1, out2, std::move(w));
}

/// 3d transform: W3(f, g)(x1, x2, x3) = W2(f(., x3), g)(x1, x2), applied
/// slice by slice over f's second axis.
inline GridFunction3D wigner3d(const GridFunction2D& f, const GridFunction1D& g, double b,
                               GridSpec out1, GridSpec out2) {
    if (!(b > 0.0)) throw std::domain_error("wigner3d: b must be > 0");
    GridFunction3D out;
    out.spec1 = out1;
    out.spec2 = out2;
    out.spec3 = f.spec2();
    out.slices.reserve(f.spec2().n);
    for (std::size_t m = 0; m < f.spec2().n; ++m) {
        const double x3 = f.spec2().node(m);
        GridFunction1D::Evaluator slice_ev;
        if (f.has_evaluator()) slice_ev = [&f, x3](double x1) { return f.eval(x1, x3); };
        std::vector<Complex> samples(f.spec1().n);
        for (std::size_t i = 0; i < f.spec1().n; ++i)
            samples[i] = f.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
        GridFunction1D slice(f.spec1(), std::move(samples), std::move(slice_ev));
        out.slices.push_back(wigner2d(slice, g, b, out1, out2).values());
    }
    return out;
}

/// Magnetic translation m_R f = e^{-i b R1 x2} f(. - R) on a 2d grid.
/// R must be lattice-aligned; the translate is zero-padded, never wrapped
/// (cyclic wrap would fabricate overlap across the box).
inline GridFunction2D magnetic_translate(const GridFunction2D& f, double r1, double r2,
                                         double b) {
    const double h1 = f.spec1().spacing();
    const double h2 = f.spec2().spacing();
    const double p_real = r1 / h1;
    const double q_real = r2 / h2;
    const auto p = static_cast<long long>(std::llround(p_real));
    const auto q = static_cast<long long>(std::llround(q_real));
    if (std::abs(p_real - static_cast<double>(p)) > 1e-9 ||
        std::abs(q_real - static_cast<double>(q)) > 1e-9)
        throw std::domain_error("magnetic_translate: R must be an integer multiple of the "
                                "grid spacing (no interpolation)");

    const auto n1 = static_cast<long long>(f.spec1().n);
    const auto n2 = static_cast<long long>(f.spec2().n);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n1, n2);
    for (long long i = 0; i < n1; ++i) {
        const long long si = i - p;
        if (si < 0 || si >= n1) continue;
        for (long long j = 0; j < n2; ++j) {
            const long long sj = j - q;
            if (sj < 0 || sj >= n2) continue;
            const double x2 = f.spec2().node(static_cast<std::size_t>(j));
            out(i, j) = std::polar(1.0, -b * r1 * x2) * f.values()(si, sj);
        }
    }
    return GridFunction2D(f.spec1(), f.spec2(), std::move(out));
}

/// Orthogonal projector onto span{ W_b(psi, g) : g }, handled in window
/// coordinates.
class WindowProjector {
  public:
    WindowProjector(GridFunction1D window, double b)
        : window_(std::move(window)), b_(b) {
        if (!(b > 0.0)) throw std::domain_error("WindowProjector: b must be > 0");
        if (std::abs(window_.norm() - 1.0) > 1e-10)
            throw std::domain_error("WindowProjector: window must be unit norm");
    }
    const GridFunction1D& window() const { return window_; }
    double b() const { return b_; }

  private:
    GridFunction1D window_;
    double b_;
};

/// Window-coordinate representation of F = W_b(f, g).
struct WindowPair {
    GridFunction1D f;
    GridFunction1D g;
};

/// K_psi W(f, g) = <f, psi> W(psi, g): the projector touches only the window
/// coordinate.
inline WindowPair projector_apply(const WindowProjector& k, const WindowPair& pair) {
    const Complex c = inner(pair.f, k.window());
    return WindowPair{scaled(c, k.window()), pair.g};
}

/// Density of K_psi K_psitilde at positions x_samples:
///
///   rho(x) = <psi, psitilde> (1/2pi) int conj(psitilde)(x - k/b) psi(x - k/b) dk,
///
/// which must be x-independent with common value (b/2pi) |<psi, psitilde>|^2.
/// Throws if the sampled values are not flat to 1e-8 * (b/2pi).
inline std::vector<double> projector_trace_density(const GridFunction1D& psi,
                                                   const GridFunction1D& psi_tilde, double b,
                                                   std::span<const double> x_samples) {
    if (!(b > 0.0)) throw std::domain_error("projector_trace_density: b must be > 0");
    if (std::abs(psi.norm() - 1.0) > 1e-10 || std::abs(psi_tilde.norm() - 1.0) > 1e-10)
        throw std::domain_error("projector_trace_density: windows must be unit norm");
    if (x_samples.empty())
        throw std::domain_error("projector_trace_density: no sample positions");

    double x_max = 0.0;
    for (double x : x_samples) x_max = std::max(x_max, std::abs(x));
    const double half_support =
        0.5 * std::max(psi.spec().length, psi_tilde.spec().length);
    // One fixed k-grid for every x, sized so u = x - k/b sweeps the whole
    // window support at the windows' native resolution.
    const double k_half = b * (x_max + half_support);
    const double dk = b * std::min(psi.spec().spacing(), psi_tilde.spec().spacing());
    const auto nk = static_cast<std::size_t>(std::ceil(2.0 * k_half / dk)) + 1;
    const GridSpec kg(2.0 * k_half, nk);

    const Complex overlap = inner(psi, psi_tilde);
    std::vector<double> values;
    values.reserve(x_samples.size());
    for (double x : x_samples) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < kg.n; ++j) {
            const double u = x - kg.node(j) / b;
            acc += std::conj(psi_tilde.eval(u)) * psi.eval(u);
        }
        acc *= kg.spacing() / (2.0 * std::numbers::pi);
        // acc -> (b/2pi) <psi, psitilde>, so the prefactor enters conjugated.
        values.push_back(std::real(std::conj(overlap) * acc));
    }

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stddev = std::sqrt(var / static_cast<double>(values.size()));
    if (stddev > 1e-8 * b / (2.0 * std::numbers::pi))
        throw std::runtime_error("projector_trace_density: values are not x-independent "
                                 "(std = " + std::to_string(stddev) + ")");
    return values;
}

struct CommutatorReport {
    bool commute = false;
    double max_deviation = 0.0;
};

/// Compares K_psi K_psitilde F against K_psitilde K_psi F on the given test
/// pairs, with norms reduced through the Moyal identity. Reports commuting
/// iff the windows are orthogonal or equal up to sign, provided the test set
/// contains an f with <f, psi> = 0 and <f, psitilde> != 0.
inline CommutatorReport commutator_check(const GridFunction1D& psi,
                                         const GridFunction1D& psi_tilde, double b,
                                         std::span<const WindowPair> test_pairs,
                                         double tol = 1e-8) {
    if (!(b > 0.0)) throw std::domain_error("commutator_check: b must be > 0");
    if (std::abs(psi.norm() - 1.0) > 1e-10 || std::abs(psi_tilde.norm() - 1.0) > 1e-10)
        throw std::domain_error("commutator_check: windows must be unit norm");
    if (test_pairs.empty()) throw std::domain_error("commutator_check: empty test set");

    const Complex overlap = inner(psi, psi_tilde);  // <psi, psitilde>
    CommutatorReport report;
    const double h = psi.spec().spacing();
    for (const WindowPair& pair : test_pairs) {
        // K_psi K_pt F = c1 W(psi, g); K_pt K_psi F = c2 W(psitilde, g).
        // Their difference is W(c1 psi - c2 psitilde, g), so by Moyal its
        // norm is |c1 psi - c2 psitilde| |g|. The window difference is
        // evaluated pointwise: forming it from O(1) inner products instead
        // would put a sqrt(eps) floor under an exactly-zero commutator.
        const Complex c1 = inner(pair.f, psi_tilde) * std::conj(overlap);
        const Complex c2 = inner(pair.f, psi) * overlap;
        double acc = 0.0;
        for (std::size_t i = 0; i < psi.spec().n; ++i)
            acc += std::norm(c1 * psi[i] - c2 * psi_tilde[i]);
        const double scale = pair.f.norm() * pair.g.norm();
        const double dev =
            std::sqrt(acc * h) * pair.g.norm() / (scale > 0.0 ? scale : 1.0);
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    report.commute = report.max_deviation <= tol;
    return report;
}

/// CSV dump (x1, x2, re, im) of a 2d grid function, for plotting.
inline void dump_csv(std::ostream& os, const GridFunction2D& f) {
    os << "x1,x2,re,im\n";
    for (std::size_t i = 0; i < f.spec1().n; ++i) {
        for (std::size_t j = 0; j < f.spec2().n; ++j) {
            const Complex v =
                f.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            os << f.spec1().node(i) << ',' << f.spec2().node(j) << ',' << std::real(v) << ','
               << std::imag(v) << '\n';
        }
    }
}

}  // namespace magkin
