#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

#include "rcm/controlled_path.hpp"

namespace rcm {

using DriftField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Raised when a solution leaves the configured bound.
class BlowUp : public std::runtime_error {
public:
    BlowUp(int node, double norm)
        : std::runtime_error("solution norm " + std::to_string(norm) + " exceeds the blow-up bound at node " +
                             std::to_string(node)),
          node_(node) {}
    int node() const { return node_; }

private:
    int node_;
};

struct RdeOptions {
    double blowup_bound = 1e6;
};

/// Solves dY = (AY + F(Y)) dt + G(Y) dW along `rp` from y0 at the first node.
///
/// G maps R^m to R^{m·d} (entry i·d + a), and its Jacobian is (m·d) × m.
/// Each cell [u, v] takes the level-2 step
///   Y_v = e^{Ah} Y_u + h φ1(Ah) F(Y_u) + φ1(Ah) G(Y_u) W_{u,v} + 2 φ2(Ah) (DG·G)(Y_u) 𝕎_{u,v},
/// which is the plain Davie step when A = 0. The Gubinelli derivative is G(Y).
ControlledPath solve_rde(const Eigen::MatrixXd& a, const DriftField& f, const SmoothMap& g, RoughPathPtr rp,
                         const Eigen::VectorXd& y0, const RdeOptions& opts = {});

/// Variation of constants Y_t = e^{A(t-t0)} y0 + ∫ e^{A(t-r)} f_r dr + ∫ e^{A(t-r)} g_r dW_r,
/// with Gubinelli derivative g. f holds node values (m columns), g has m·d components.
ControlledPath solve_affine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f, const ControlledPath& g,
                            const Eigen::VectorXd& y0, const RdeOptions& opts = {});

}  // namespace rcm
