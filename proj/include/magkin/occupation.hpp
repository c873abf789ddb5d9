#pragma once

// Bathtub fillings. Given ascending level energies eps_0 < eps_1 < ... and a
// total mass M, the minimizer of sum eps_n m(n) over 0 <= m(n) <= 1 with
// sum m(n) = M fills whole levels from the bottom and puts the fractional
// part {M} on level floor(M). The continuum variant fills the indicator set
// {eps_n + k^2 < delta} in momentum.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "magkin/errors.hpp"
#include "magkin/landau.hpp"
#include "magkin/numerics.hpp"

namespace magkin {

struct OccupationFilling {
    std::vector<double> occupations;            // m(n) in [0, 1]
    std::optional<std::size_t> fractional_level;  // the single level with 0 < m < 1
    double mass = 0.0;
};

namespace detail {

inline void check_bathtub_inputs(std::span<const double> levels, double mass) {
    if (!(mass >= 0.0)) throw std::domain_error("bathtub: mass must be >= 0");
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (levels[i] < levels[i - 1])
            throw std::domain_error("bathtub: level energies must be ascending");
    }
    const auto needed = static_cast<std::size_t>(std::ceil(mass)) + 1;
    if (levels.size() < needed)
        throw capacity_error("bathtub: needs at least ceil(mass)+1 = " + std::to_string(needed) +
                             " levels, got " + std::to_string(levels.size()));
}

}  // namespace detail

/// Minimizing filling m* for the given mass. Integer masses leave the
/// boundary level empty ({M} = 0), matching {x} = x - floor(x).
inline OccupationFilling bathtub_fill(std::span<const double> levels, double mass) {
    detail::check_bathtub_inputs(levels, mass);
    OccupationFilling out;
    out.occupations.assign(levels.size(), 0.0);
    out.mass = mass;
    const auto full = static_cast<std::size_t>(std::floor(mass));
    const double frac = mass - std::floor(mass);
    for (std::size_t n = 0; n < full && n < levels.size(); ++n) out.occupations[n] = 1.0;
    if (frac > 0.0) {
        out.occupations[full] = frac;
        out.fractional_level = full;
    }
    return out;
}

/// sum eps_n m*(n): the minimum of the linear energy at the given mass.
inline double bathtub_energy(std::span<const double> levels, double mass) {
    const OccupationFilling fill = bathtub_fill(levels, mass);
    KahanSum sum;
    for (std::size_t n = 0; n < levels.size(); ++n) {
        if (fill.occupations[n] != 0.0) sum.add(levels[n] * fill.occupations[n]);
    }
    return sum.value();
}

/// Length of the occupied momentum interval {k : eps_n + k^2 < delta} for a
/// b2 = 0 dispersion: 2 sqrt((delta - eps_n)_+).
inline double continuum_fill_measure(const AnisotropicDispersion& dispersion, double delta,
                                     unsigned n) {
    if (dispersion.field().b2() != 0.0)
        throw unsupported_configuration("continuum_fill_measure: requires b2 = 0");
    const double gap = delta - dispersion.level(n);
    return gap > 0.0 ? 2.0 * std::sqrt(gap) : 0.0;
}

/// Indicator filling m*(n, k) = 1{eps_n + k^2 < delta} below a threshold
/// energy, for a b2 = 0 dispersion. The support in k at each occupied level
/// is the interval (-sqrt(delta - eps_n), sqrt(delta - eps_n)).
class ContinuumFilling {
  public:
    ContinuumFilling(AnisotropicDispersion dispersion, double delta)
        : dispersion_(std::move(dispersion)), delta_(delta) {
        if (dispersion_.field().b2() != 0.0)
            throw unsupported_configuration("ContinuumFilling: requires b2 = 0");
    }

    double delta() const { return delta_; }
    const AnisotropicDispersion& dispersion() const { return dispersion_; }

    bool occupied(unsigned n, double k) const { return dispersion_.value(n, k) < delta_; }
    double measure(unsigned n) const { return continuum_fill_measure(dispersion_, delta_, n); }

  private:
    AnisotropicDispersion dispersion_;
    double delta_;
};

}  // namespace magkin
