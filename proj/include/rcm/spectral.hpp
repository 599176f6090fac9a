#pragma once

#include <Eigen/Dense>

namespace rcm {

/// Center/stable decomposition A = A^c ⊕ A^s of a diagonalizable real matrix.
struct SpectralSplit {
    Eigen::MatrixXd Ac;  ///< center block in the orthonormal basis Bc
    Eigen::MatrixXd As;  ///< stable block in the orthonormal basis Bs
    Eigen::MatrixXd Bc;  ///< n × center_dim orthonormal basis of the center subspace
    Eigen::MatrixXd Bs;  ///< n × stable_dim orthonormal basis of the stable subspace
    Eigen::MatrixXd Pc;  ///< spectral projection onto the center subspace
    Eigen::MatrixXd Ps;  ///< spectral projection onto the stable subspace
    double nu = 0.0;     ///< growth exponent of the center block backwards in time
    double beta = 0.0;   ///< decay exponent of the stable block
    double Mc = 1.0;
    double Ms = 1.0;
    int center_dim = 0;
    int stable_dim = 0;
    bool center_unstable = false;  ///< some center eigenvalue has Re > tol
    double gap = 0.0;              ///< ν + β, reported only
};

/// Splits by Re λ < -tol (stable) versus the rest (center, flagged center-unstable
/// when Re λ > tol). Throws for matrices whose eigenvector basis is numerically
/// singular (defect above 1e-8).
SpectralSplit split(const Eigen::MatrixXd& a, double tol = 1e-9);

}  // namespace rcm
