#pragma once

#include <Eigen/Dense>

#include "rcm/controlled_path.hpp"

namespace rcm {

/// Integrands of dimension m·d are read as m × d matrices (entry i·d + a).

/// Compound sum Σ Y_u W_{u,v} + Y′_u 𝕎_{u,v} over the cells of [s, t].
Eigen::VectorXd rough_integral(const ControlledPath& integrand, int s, int t);

/// Running integral from the first node, with the integrand as its Gubinelli derivative.
ControlledPath rough_integral_path(const ControlledPath& integrand);

/// One-cell pieces of the compound sum on cell k: G_u W_{u,v} and 2 G′_u 𝕎_{u,v}.
void cell_pieces(const ControlledPath& integrand, int k, Eigen::VectorXd& g0, Eigen::VectorXd& g1);

/// t ↦ ∫_{t0}^t e^{A(t-r)} f_r dr with f linear between nodes, integrated exactly per cell.
Eigen::MatrixXd convolve_drift_values(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f, const Grid& grid);

/// Drift convolution as a controlled path with zero Gubinelli derivative.
ControlledPath convolve_drift(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f, RoughPathPtr ref);

/// ∫_{t0}^t e^{A(t-r)} G_r dW_r at node t: rough integral of r ↦ (e^{A(t-r)} G_r, e^{A(t-r)} G′_r)
/// with the semigroup integrated exactly inside each cell.
Eigen::VectorXd convolve_diffusion(const Eigen::MatrixXd& a, const ControlledPath& integrand, int t_node);

/// convolve_diffusion at every node, by the one-step recursion I_{k+1} = e^{Ah} I_k + cell term.
Eigen::MatrixXd convolve_diffusion_values(const Eigen::MatrixXd& a, const ControlledPath& integrand);

}  // namespace rcm
