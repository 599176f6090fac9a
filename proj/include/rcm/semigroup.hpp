#pragma once

#include <Eigen/Dense>

namespace rcm {

Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

/// Exact one-cell weights of the semigroup e^{At} over a step h:
/// E = e^{Ah}, P1 = φ1(Ah), P2 = φ2(Ah) with φ1(z) = (e^z - 1)/z and
/// φ2(z) = (e^z - 1 - z)/z², obtained from one augmented exponential.
struct CellWeights {
    CellWeights(const Eigen::MatrixXd& a, double h);

    double h;
    Eigen::MatrixXd E;
    Eigen::MatrixXd P1;
    Eigen::MatrixXd P2;

    /// ∫_0^h e^{A(h-r)} f(r) dr for f linear between f0 and f1.
    Eigen::VectorXd drift(const Eigen::VectorXd& f0, const Eigen::VectorXd& f1) const {
        return h * (P1 * f0 + P2 * (f1 - f0));
    }
    /// ∫ e^{A(h-r)} (g0 + g1 r/h) dr/h for the controlled increments g0 = G_u W_{u,v}
    /// and g1 = 2 G′_u 𝕎_{u,v}; exact for piecewise-linear drivers.
    Eigen::VectorXd diffusion(const Eigen::VectorXd& g0, const Eigen::VectorXd& g1) const {
        return P1 * g0 + P2 * g1;
    }
};

}  // namespace rcm
