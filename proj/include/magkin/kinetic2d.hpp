#pragma once

// Kinetic energy per unit surface of the 2d homogeneous electron gas in a
// perpendicular field b:
//
//     omega2d(b, rho) = pi rho^2 + (b^2 / 4pi) {t} (1 - {t}),   t = 2 pi rho / b.
//
// The closed form is cross-checked against the level-filling sum
// (b / 4pi) sum_n eps_n m*(n) with mass t, which is kept here as an
// independent evaluation route. omega2d is increasing, convex and piecewise
// linear in rho, with omega2d - pi rho^2 periodic of period b / 2pi.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "magkin/numerics.hpp"
#include "magkin/occupation.hpp"

namespace magkin {

struct Kinetic2dResult {
    double omega = 0.0;
    double b = 0.0;
    double rho = 0.0;
    long long filled_levels = 0;        // floor(2 pi rho / b)
    double fractional_occupation = 0.0;  // {2 pi rho / b}
};

namespace detail {

inline void check_omega2d_inputs(double b, double rho) {
    if (!(b > 0.0)) throw std::domain_error("omega2d: b must be > 0");
    if (!(rho >= 0.0)) throw std::domain_error("omega2d: rho must be >= 0");
}

}  // namespace detail

/// Closed form of omega2d.
inline Kinetic2dResult omega2d(double b, double rho) {
    detail::check_omega2d_inputs(b, rho);
    Kinetic2dResult out;
    out.b = b;
    out.rho = rho;
    if (rho == 0.0) return out;
    const double t = 2.0 * std::numbers::pi * rho / b;
    const FillSplit split = split_fill(t);
    out.filled_levels = split.whole;
    out.fractional_occupation = split.frac;
    out.omega = std::numbers::pi * rho * rho +
                b * b / (4.0 * std::numbers::pi) * split.frac * (1.0 - split.frac);
    return out;
}

/// Independent route: fill the Landau levels eps_n = b(2n+1) with mass
/// 2 pi rho / b and return (b / 4pi) sum eps_n m*(n).
inline double omega2d_bathtub(double b, double rho) {
    detail::check_omega2d_inputs(b, rho);
    if (rho == 0.0) return 0.0;
    const double mass = 2.0 * std::numbers::pi * rho / b;
    const auto n_levels = static_cast<std::size_t>(std::ceil(mass)) + 1;
    std::vector<double> levels(n_levels);
    for (std::size_t n = 0; n < n_levels; ++n)
        levels[n] = b * (2.0 * static_cast<double>(n) + 1.0);
    return b / (4.0 * std::numbers::pi) * bathtub_energy(levels, mass);
}

/// Affine representation on the segment m = floor(2 pi rho / b):
///     omega2d = (b^2/4pi) [ t (1 + 2m) - m (1 + m) ],  t = 2 pi rho / b.
struct Omega2dSegment {
    double slope_t = 0.0;    // d omega / dt on this segment
    double intercept = 0.0;  // omega at t = 0 extrapolated along the segment
    long long segment = 0;   // m

    double eval_at_t(double t) const { return slope_t * t + intercept; }
};

inline Omega2dSegment omega2d_segment(double b, double rho) {
    detail::check_omega2d_inputs(b, rho);
    const double t = 2.0 * std::numbers::pi * rho / b;
    const FillSplit split = split_fill(t);
    const double m = static_cast<double>(split.whole);
    const double pref = b * b / (4.0 * std::numbers::pi);
    Omega2dSegment seg;
    seg.segment = split.whole;
    seg.slope_t = pref * (1.0 + 2.0 * m);
    seg.intercept = -pref * m * (1.0 + m);
    return seg;
}

/// Right derivative d omega2d / d rho' at occupation mu (slope of the upper
/// segment at kinks): b (2m + 1) / 2 with m = floor(2 pi mu / b).
inline double omega2d_right_slope(double b, double mu) {
    if (!(b > 0.0)) throw std::domain_error("omega2d_right_slope: b must be > 0");
    if (mu < 0.0) mu = 0.0;
    const FillSplit split = split_fill(2.0 * std::numbers::pi * mu / b);
    return b * (2.0 * static_cast<double>(split.whole) + 1.0) / 2.0;
}

}  // namespace magkin
