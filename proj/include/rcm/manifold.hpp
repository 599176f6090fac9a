#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcm/controlled_path.hpp"
#include "rcm/invariance.hpp"
#include "rcm/stationary.hpp"

namespace rcm {

/// Taylor approximation φ(ξ) = Σ_i α_i(W) ξ^i of the random center manifold.
struct ManifoldApproximation {
    int q = 0;
    std::vector<double> alpha0;  ///< index i holds α_i at the terminal node
    std::uint64_t seed = 0;
    double horizon = 0.0;
    int cells_per_unit = 0;
};

ManifoldApproximation make_approximation(const HierarchyResult& h, std::uint64_t seed);
ManifoldApproximation make_approximation(const std::vector<Rational>& alpha);

double evaluate_phi(const ManifoldApproximation& ma, double xi);

/// C¹ ramp: 1 on [0, ½], 0 on [1, ∞), cubic smoothstep in between.
double cutoff_ramp(double u);

/// Path scaled by cutoff_ramp(‖cp‖_{D^{2γ}} / R).
ControlledPath cutoff_apply(const ControlledPath& cp, double r);

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;
    int used = 0;
    int excluded = 0;  ///< non-positive errors left out of the fit
};

/// Least-squares slope of log(error) against log|ξ|; needs at least 4 positive errors.
OrderFit order_fit(const std::vector<double>& xis, const std::vector<double>& errors);

/// Leading-order approximation: with U_t = (e^{A^c t} ξ, 0) on the window [t0, 0],
/// h^app = ∫ e^{A^s(-r)} F^s_l(U_r) dr + ∫ e^{A^s(-r)} G^s_l(U_r) dW_r.
double leading_order_happ(const SystemSpec& sys, int l, double xi, RoughPathPtr rp);

struct LPConfig {
    double eta = 0.0;        ///< weight exponent in (-β, 0); 0 selects -β/2
    double cutoff_r = 0.5;
    int max_iters = 200;
    double fp_tol = 1e-8;
};

struct LPResult {
    double hc = 0.0;                     ///< stable coordinate at the terminal node
    int iterations = 0;
    double contraction_rate = 0.0;       ///< largest ratio of successive distances
    std::vector<double> distances;       ///< successive weighted distances
    double tail_bound = 0.0;             ///< e^{-β N} for the truncated window
    double fixed_point_defect = 0.0;     ///< distance moved by one more application
    int cutoff_active_blocks = 0;        ///< unit blocks whose norm exceeded R/2
    bool rounding_floor = false;         ///< stopped at the rounding floor above fp_tol
    std::vector<double> x, y;            ///< converged sequence on the window nodes
};

/// Raised when successive distances fail to shrink for 5 consecutive iterations.
class NonContraction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed point of the discretized Lyapunov–Perron map on the window [-N, 0] of `rp`
/// (integer length, unit blocks). The center coordinate is integrated backwards from
/// x(0) = ξ, the stable coordinate forwards from y(-N) = 0, with the fields cut off
/// blockwise by χ_R.
LPResult lyapunov_perron_hc(const SystemSpec& sys, double xi, RoughPathPtr rp, const LPConfig& cfg = {});

}  // namespace rcm
