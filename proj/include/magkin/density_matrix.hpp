#pragma once

// Discretized 1d density matrices. The kernel convention is
//
//     K(i, j) = h * G(x_i, x_j),
//
// so the matrix acts on sample vectors exactly as the operator acts on
// functions: matrix eigenvalues ARE occupation numbers (grid-independent),
// matrix trace = operator trace = h * sum of the pointwise density
// rho_G(x_i) = K(i, i) / h. This matters because the spectral energy below
// feeds eigenvalues through the nonlinear omega2d; grid-scaled eigenvalues
// would change physics with resolution.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "magkin/grid.hpp"

namespace magkin {

enum class BoundaryCondition { dirichlet, periodic };

struct DensityMatrix1D {
    GridSpec grid;
    Eigen::MatrixXd kernel;  // K(i,j) = h G(x_i, x_j), symmetric PSD

    DensityMatrix1D(GridSpec grid_, Eigen::MatrixXd kernel_)
        : grid(grid_), kernel(std::move(kernel_)) {
        if (kernel.rows() != static_cast<Eigen::Index>(grid.n) || kernel.rows() != kernel.cols())
            throw std::invalid_argument("DensityMatrix1D: kernel shape does not match grid");
        const double scale = kernel.cwiseAbs().maxCoeff();
        if (scale > 0.0) {
            if ((kernel - kernel.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
                throw std::invalid_argument("DensityMatrix1D: kernel is not symmetric");
            const double min_eig = eigenvalues().minCoeff();
            if (min_eig < -1e-10 * kernel.norm())
                throw std::invalid_argument(
                    "DensityMatrix1D: kernel is not positive semidefinite (min eigenvalue " +
                    std::to_string(min_eig) + ")");
        }
    }

    static DensityMatrix1D zero(GridSpec grid) {
        return DensityMatrix1D(grid, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.n),
                                                           static_cast<Eigen::Index>(grid.n)));
    }

    /// Diagonal state with prescribed density: K = diag(h rho).
    static DensityMatrix1D diagonal(GridSpec grid, const Eigen::VectorXd& rho) {
        if (rho.size() != static_cast<Eigen::Index>(grid.n))
            throw std::invalid_argument("DensityMatrix1D: density size does not match grid");
        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(rho.size(), rho.size());
        k.diagonal() = grid.spacing() * rho;
        return DensityMatrix1D(grid, std::move(k));
    }

    double mass() const { return kernel.trace(); }

    Eigen::VectorXd density() const { return kernel.diagonal() / grid.spacing(); }

    /// Occupation numbers, ascending.
    Eigen::VectorXd eigenvalues() const {
        return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(kernel,
                                                              Eigen::EigenvaluesOnly)
            .eigenvalues();
    }
};

/// 3-point finite-difference matrix of -d^2/dx^2 on the grid.
inline Eigen::MatrixXd laplacian_matrix(const GridSpec& grid, BoundaryCondition bc) {
    const auto n = static_cast<Eigen::Index>(grid.n);
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        lap(i, i) = 2.0 * inv_h2;
        if (i > 0) lap(i, i - 1) = -inv_h2;
        if (i + 1 < n) lap(i, i + 1) = -inv_h2;
    }
    if (bc == BoundaryCondition::periodic) {
        lap(0, n - 1) = -inv_h2;
        lap(n - 1, 0) = -inv_h2;
    }
    return lap;
}

}  // namespace magkin
