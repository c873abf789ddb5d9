#pragma once

// Uniform sampling grids. A GridSpec covers [-L/2, L/2) with N nodes
// x_i = -L/2 + i h, h = L/N. Quadrature is trapezoidal; since every sampled
// function here decays to ~0 well inside the box, the weights degenerate to
// a uniform h.

#include <cstddef>
#include <stdexcept>

namespace magkin {

struct GridSpec {
    double length = 24.0;
    std::size_t n = 2048;

    GridSpec() = default;
    GridSpec(double length_, std::size_t n_) : length(length_), n(n_) {
        if (!(length > 0.0) || n < 2) throw std::domain_error("GridSpec: need length > 0, n >= 2");
    }

    double spacing() const { return length / static_cast<double>(n); }
    double node(std::size_t i) const {
        return -0.5 * length + spacing() * static_cast<double>(i);
    }
    double left() const { return -0.5 * length; }
    double right() const { return node(n - 1); }

    bool operator==(const GridSpec&) const = default;
};

}  // namespace magkin
