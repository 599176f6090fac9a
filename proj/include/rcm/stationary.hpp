#pragma once

#include <Eigen/Dense>

#include <vector>

#include "rcm/controlled_path.hpp"
#include "rcm/invariance.hpp"

namespace rcm {

/// z_t = ∫_{t0}^t e^{-(t-s)} dW_s componentwise, with Gubinelli derivative Id.
/// The grid must span at least 5 time units. `tail_bound` receives e^{-T}·sup|W|.
ControlledPath ou_stationary(RoughPathPtr rp, double* tail_bound = nullptr);

/// Stable decay rate δ = -max Re λ(A); throws std::domain_error when δ <= 0.
double decay_rate(const Eigen::MatrixXd& a);

/// Truncated stationary solution started from 0 at the first node:
/// α_t = ∫_{t0}^t e^{A(t-r)} f_r dr + ∫_{t0}^t e^{A(t-r)} g_r dW_r. Throws std::domain_error
/// when A is not exponentially stable.
ControlledPath stationary_affine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f, const ControlledPath& g,
                                 double* tail_bound = nullptr);

struct HierarchyOptions {
    int max_picard = 200;
    double picard_tol = 1e-13;
};

/// Stationary α paths of a coefficient system along one rough path.
struct HierarchyResult {
    RoughPathPtr rp;
    int q = 0;
    Eigen::MatrixXd alpha;                 ///< nodes × (q+1); column i holds α_i, column 0 unused
    std::vector<Eigen::MatrixXd> alpha_p;  ///< Gubinelli derivatives (nodes × d), index i
    std::vector<Eigen::MatrixXd> drift;    ///< f_i along the path (nodes × 1), index i
    std::vector<double> alpha0;            ///< α_i at the terminal node
    std::vector<double> d2g_norm;          ///< ‖α_i‖ in D^{2γ}
    std::vector<int> picard_iterations;    ///< 0 unless α_i forces itself
    std::vector<double> tail_bound;        ///< e^{-δ_i T}

    ControlledPath path(int i) const;
    /// g_i as a controlled path with m = 1 and d noise channels.
    ControlledPath diffusion(int i) const;
    std::vector<ControlledPath> diffusions;
};

/// Solves the coefficient RDEs in increasing order. Flagged orders give the zero path;
/// linear constant self-dependence of f_i is moved into the generator and any other
/// self-dependence is resolved by Picard iteration.
HierarchyResult solve_hierarchy(const CoefficientSystem& cs, RoughPathPtr rp, const HierarchyOptions& opts = {});

/// Evolves α(-s) forward to the terminal node by the affine solver over the last
/// `s_nodes` cells and returns |result - α(0)|.
double stationarity_check(const HierarchyResult& h, const CoefficientSystem& cs, int i, int s_nodes);

}  // namespace rcm
