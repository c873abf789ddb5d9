#pragma once

// Kinetic energy per unit volume of the 3d homogeneous electron gas in a
// field of strength b. The Fermi level delta solves
//
//     g(delta) = sum_n (delta - eps_n)_+^{1/2} = 2 pi^2 rho / b,  eps_n = b(2n+1),
//
// with g strictly increasing and coercive. The defining value is the filled
// phase-space integral
//
//     omega3d = (b / 8 pi^2) sum_n [ 2 eps_n s_n + (2/3) s_n^3 ],
//     s_n = (delta - eps_n)_+^{1/2},
//
// i.e. (b / 2(2pi)^2) int sum_n (eps_n + k^2) 1{eps_n + k^2 < delta} dk with
// each level integral done in closed form and cross-checked by quadrature.
// Two rearranged closed forms circulate, differing in the prefactor of the
// level sum:
//
//     omega3d = delta rho / 6 + C sum_n eps_n s_n,   C = b^2/6pi^2 or b/6pi^2.
//
// Only the b/6pi^2 variant agrees with the integral (see the adjudication
// tests); it is the canonical one used everywhere downstream.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "magkin/numerics.hpp"

namespace magkin {

struct FermiLevelSolution {
    double delta = 0.0;
    std::size_t occupied_levels = 0;  // #{n : eps_n < delta}
    double residual = 0.0;            // |g(delta) - 2 pi^2 rho / b|
};

namespace detail {

/// g(delta) = sum over occupied levels of sqrt(delta - eps_n), compensated.
inline double fermi_count_function(double b, double delta) {
    KahanSum sum;
    const double top = (delta / b - 1.0) / 2.0;
    const auto n_max = static_cast<long long>(std::floor(top));
    for (long long n = 0; n <= n_max; ++n) {
        const double gap = delta - b * (2.0 * static_cast<double>(n) + 1.0);
        if (gap > 0.0) sum.add(std::sqrt(gap));
    }
    return sum.value();
}

}  // namespace detail

/// Solves g(delta) = 2 pi^2 rho / b by bisection. g has square-root kinks at
/// every eps_n, so bisection (never Newton) is used; it is unconditionally
/// convergent on the bracket.
///
/// Bracket: lower end b; upper end b + min(target^2, (3 b target)^{2/3}),
/// both valid since g(delta) >= (delta-b)^{1/2} and
/// g(delta) >= (delta-b)^{3/2} / 3b. The second bound keeps the bracket
/// tight when many levels are occupied (small b), where target^2 alone
/// would be astronomically loose.
inline FermiLevelSolution fermi_level(double b, double rho, double tol = 1e-12) {
    if (!(b > 0.0)) throw std::domain_error("fermi_level: b must be > 0");
    if (!(rho >= 0.0)) throw std::domain_error("fermi_level: rho must be >= 0");
    if (rho == 0.0) return {b, 0, 0.0};

    const double target = 2.0 * std::numbers::pi * std::numbers::pi * rho / b;
    double lo = b;
    double hi = b + std::min(target * target, std::pow(3.0 * b * target, 2.0 / 3.0));
    double delta = hi;
    for (int iter = 0; iter < 200; ++iter) {
        delta = 0.5 * (lo + hi);
        const double g = detail::fermi_count_function(b, delta);
        if (g < target)
            lo = delta;
        else
            hi = delta;
        if (hi - lo <= tol * delta && std::abs(g - target) <= tol * target) break;
    }
    delta = 0.5 * (lo + hi);
    FermiLevelSolution out;
    out.delta = delta;
    out.residual = std::abs(detail::fermi_count_function(b, delta) - target);
    out.occupied_levels =
        static_cast<std::size_t>(std::max(0.0, std::floor((delta / b - 1.0) / 2.0))) + 1;
    return out;
}

enum class Omega3dVariant { prop_form, proof_form };

struct Kinetic3dResult {
    double omega = 0.0;
    FermiLevelSolution fermi;
    std::string method;              // "integral", "prop_form", "proof_form", "large_field"
    std::vector<double> per_level;   // per-level contribution to the level sum
};

/// Defining value of omega3d: the filled phase-space integral. Each level
/// integral int (eps_n + k^2) dk over {k^2 < delta - eps_n} has the closed
/// form 2 eps_n s + (2/3) s^3; it is re-evaluated by adaptive quadrature and
/// any disagreement beyond 1e-10 throws.
inline Kinetic3dResult omega3d_integral(double b, double rho, double fermi_tol = 1e-13) {
    if (!(b > 0.0)) throw std::domain_error("omega3d: b must be > 0");
    if (!(rho >= 0.0)) throw std::domain_error("omega3d: rho must be >= 0");
    Kinetic3dResult out;
    out.method = "integral";
    if (rho == 0.0) {
        out.fermi = {b, 0, 0.0};
        return out;
    }
    out.fermi = fermi_level(b, rho, fermi_tol);
    const double delta = out.fermi.delta;
    KahanSum sum;
    out.per_level.reserve(out.fermi.occupied_levels);
    for (std::size_t n = 0; n < out.fermi.occupied_levels; ++n) {
        const double eps = b * (2.0 * static_cast<double>(n) + 1.0);
        const double gap = delta - eps;
        if (gap <= 0.0) break;
        const double s = std::sqrt(gap);
        const double exact = 2.0 * eps * s + (2.0 / 3.0) * s * s * s;
        const double quad = adaptive_simpson(
            [eps](double k) { return eps + k * k; }, -s, s, 1e-13 * (1.0 + exact));
        if (std::abs(quad - exact) > 1e-10 * (1.0 + std::abs(exact)))
            throw std::runtime_error(
                "omega3d_integral: level integral and antiderivative disagree at n = " +
                std::to_string(n) + " (" + std::to_string(quad - exact) + ")");
        out.per_level.push_back(exact);
        sum.add(exact);
    }
    out.omega = b / (8.0 * std::numbers::pi * std::numbers::pi) * sum.value();
    return out;
}

/// Rearranged closed forms: delta rho / 6 + C sum eps_n (delta - eps_n)_+^{1/2}
/// with C = b^2/6pi^2 (prop_form) or C = b/6pi^2 (proof_form).
inline Kinetic3dResult omega3d_closed(double b, double rho, Omega3dVariant variant,
                                      double fermi_tol = 1e-13) {
    if (!(b > 0.0)) throw std::domain_error("omega3d: b must be > 0");
    if (!(rho >= 0.0)) throw std::domain_error("omega3d: rho must be >= 0");
    Kinetic3dResult out;
    out.method = variant == Omega3dVariant::prop_form ? "prop_form" : "proof_form";
    if (rho == 0.0) {
        out.fermi = {b, 0, 0.0};
        return out;
    }
    out.fermi = fermi_level(b, rho, fermi_tol);
    const double delta = out.fermi.delta;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double c = (variant == Omega3dVariant::prop_form ? b * b : b) / (6.0 * pi2);
    KahanSum sum;
    for (std::size_t n = 0; n < out.fermi.occupied_levels; ++n) {
        const double eps = b * (2.0 * static_cast<double>(n) + 1.0);
        const double gap = delta - eps;
        if (gap <= 0.0) break;
        const double term = eps * std::sqrt(gap);
        out.per_level.push_back(term);
        sum.add(term);
    }
    out.omega = delta * rho / 6.0 + c * sum.value();
    return out;
}

/// Canonical closed form: the proof_form variant, the one that matches the
/// integral to rounding.
inline Kinetic3dResult omega3d(double b, double rho, double fermi_tol = 1e-13) {
    Kinetic3dResult out = omega3d_closed(b, rho, Omega3dVariant::proof_form, fermi_tol);
    out.method = "canonical";
    return out;
}

/// Threshold above which only the lowest level is occupied.
inline double single_level_threshold(double rho) {
    const double pi4 = std::pow(std::numbers::pi, 4);
    return std::cbrt(2.0 * pi4 * rho * rho);
}

/// Single-level regime b > (2 pi^4 rho^2)^{1/3}: delta = b + (2 pi^2 rho / b)^2
/// in closed form, omega = delta rho / 6 + b rho / 3. Identical finite sum as
/// the integral, so the two agree to rounding.
inline Kinetic3dResult omega3d_large_field(double b, double rho) {
    if (!(b > 0.0)) throw std::domain_error("omega3d_large_field: b must be > 0");
    if (!(rho >= 0.0)) throw std::domain_error("omega3d_large_field: rho must be >= 0");
    const double threshold = single_level_threshold(rho);
    if (rho > 0.0 && !(b > threshold))
        throw std::domain_error("omega3d_large_field: requires b > (2 pi^4 rho^2)^{1/3} = " +
                                std::to_string(threshold));
    Kinetic3dResult out;
    out.method = "large_field";
    if (rho == 0.0) {
        out.fermi = {b, 0, 0.0};
        return out;
    }
    const double s = 2.0 * std::numbers::pi * std::numbers::pi * rho / b;
    const double delta = b + s * s;
    out.fermi.delta = delta;
    out.fermi.occupied_levels = 1;
    out.fermi.residual = 0.0;
    out.per_level = {b * s};
    out.omega = delta * rho / 6.0 + b * rho / 3.0;
    return out;
}

/// Small-field behavior of omega3d(b, rho) / rho^{5/3} along a decreasing
/// b-sequence: reports the converged constant and its distance to the three
/// circulating candidates. The filled-integral value converges to
/// (3/10) (6 pi^2)^{2/3} ~ 4.5578 (the spinless gas constant); the other two
/// appear in rearrangements that drop a factor along the way.
struct SmallFieldFit {
    std::vector<double> estimates;          // omega / rho^{5/3} per b
    double constant = 0.0;                  // last estimate
    double last_relative_change = 0.0;      // Cauchy increment of the tail
    std::array<double, 3> candidates{};     // the three candidate constants
    std::array<double, 3> relative_distance{};
    std::size_t nearest = 0;
};

inline std::array<double, 3> small_field_candidates() {
    const double pi = std::numbers::pi;
    return {std::pow(3.0 * pi * pi, 2.0 / 3.0) / 3.0,     // ~3.1904
            std::pow(pi, 4.0 / 3.0) / std::cbrt(6.0),     // ~2.5321
            0.3 * std::pow(6.0 * pi * pi, 2.0 / 3.0)};    // ~4.5578
}

inline SmallFieldFit omega3d_small_field_limit(double rho, std::span<const double> b_sequence) {
    if (!(rho > 0.0)) throw std::domain_error("omega3d_small_field_limit: rho must be > 0");
    if (b_sequence.size() < 2)
        throw std::domain_error("omega3d_small_field_limit: need at least two field values");
    for (std::size_t i = 0; i < b_sequence.size(); ++i) {
        if (!(b_sequence[i] > 0.0) || (i > 0 && !(b_sequence[i] < b_sequence[i - 1])))
            throw std::domain_error(
                "omega3d_small_field_limit: b_sequence must be positive and strictly decreasing");
    }
    SmallFieldFit fit;
    const double scale = std::pow(rho, 5.0 / 3.0);
    for (double b : b_sequence)
        fit.estimates.push_back(omega3d_integral(b, rho).omega / scale);
    fit.constant = fit.estimates.back();
    const double prev = fit.estimates[fit.estimates.size() - 2];
    fit.last_relative_change = std::abs(fit.constant - prev) / std::abs(fit.constant);
    fit.candidates = small_field_candidates();
    for (std::size_t i = 0; i < 3; ++i) {
        fit.relative_distance[i] = std::abs(fit.constant - fit.candidates[i]) / fit.candidates[i];
        if (fit.relative_distance[i] < fit.relative_distance[fit.nearest]) fit.nearest = i;
    }
    return fit;
}

}  // namespace magkin
