#pragma once

// Small numerical helpers shared across the library: compensated summation
// and an adaptive Simpson quadrature used for cross-checks.

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace magkin {

/// Kahan compensated accumulator. Level sums reach ~1e5 terms at small
/// fields, where plain summation would eat into the 1e-12 tolerances.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 40) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Splits t >= 0 into (integer part, fractional part) with a snap guard:
/// fractional parts within 1e-12 of 0 or 1 collapse to the nearest integer.
/// Keeps integer fills exact instead of leaving O(eps) occupations behind.
struct FillSplit {
    long long whole;
    double frac;
};

inline FillSplit split_fill(double t) {
    double fl = std::floor(t);
    double fr = t - fl;
    constexpr double snap = 1e-12;
    if (fr < snap) {
        fr = 0.0;
    } else if (fr > 1.0 - snap) {
        fr = 0.0;
        fl += 1.0;
    }
    return {static_cast<long long>(fl), fr};
}

}  // namespace magkin
