#pragma once

#include <Eigen/Dense>

#include <functional>

#include "rcm/rough_path.hpp"

namespace rcm {

/// Path (Y, Y′) controlled by a rough path W in R^d.
///
/// Y has one row per node and m columns. Y′ has one row per node and m·d
/// columns; entry i·d + b is the derivative of Y^i in the direction W^b.
class ControlledPath {
public:
    ControlledPath(RoughPathPtr ref, Eigen::MatrixXd y, Eigen::MatrixXd yp);

    /// Zero path of dimension m.
    static ControlledPath zero(RoughPathPtr ref, int m);
    /// Path with zero Gubinelli derivative.
    static ControlledPath deterministic(RoughPathPtr ref, Eigen::MatrixXd y);
    /// The driving path itself, (W, Id).
    static ControlledPath identity(RoughPathPtr ref);

    const RoughPath& ref() const { return *ref_; }
    const RoughPathPtr& ref_ptr() const { return ref_; }
    int dim() const { return static_cast<int>(y_.cols()); }
    int noise_dim() const { return ref_->dim(); }
    int nodes() const { return static_cast<int>(y_.rows()); }

    const Eigen::MatrixXd& y() const { return y_; }
    const Eigen::MatrixXd& yp() const { return yp_; }
    Eigen::VectorXd value(int k) const { return y_.row(k).transpose(); }
    /// Y′ at node k as an m × d matrix.
    Eigen::MatrixXd derivative(int k) const;

private:
    RoughPathPtr ref_;
    Eigen::MatrixXd y_;
    Eigen::MatrixXd yp_;
};

/// R^Y_{s,t} = Y_t - Y_s - Y′_s W_{s,t}.
Eigen::VectorXd remainder(const ControlledPath& cp, int s, int t);

struct D2GNorm {
    double sup_Y = 0.0;
    double sup_Yp = 0.0;
    double holder_Yp = 0.0;
    double holder_remainder = 0.0;
    double total = 0.0;
    /// holder_Yp + holder_remainder, reported for diagnostics only.
    double seminorm = 0.0;
};

/// Grid version of ‖Y‖_∞ + ‖Y′‖_∞ + ‖Y′‖_γ + ‖R^Y‖_{2γ} over node pairs.
D2GNorm norm_d2g(const ControlledPath& cp);
/// Same norm restricted to the nodes [k0, k1].
D2GNorm norm_d2g(const ControlledPath& cp, int k0, int k1);

ControlledPath add_scale(double a, const ControlledPath& p, double b, const ControlledPath& q);
ControlledPath scale(double a, const ControlledPath& p);

/// Product of scalar controlled paths: (Y Ỹ, Y′ Ỹ + Y Ỹ′).
ControlledPath mul(const ControlledPath& p, const ControlledPath& q);

/// Measured constant C in ‖p q‖ <= C (1 + ‖W‖_γ)² ‖p‖ ‖q‖.
double product_constant(const ControlledPath& p, const ControlledPath& q);

/// Smooth map G: R^m -> R^k with Jacobian (k × m).
struct SmoothMap {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

/// (G(Y), DG(Y) Y′).
ControlledPath compose(const SmoothMap& g, const ControlledPath& cp);

/// Restriction to nodes [k0, k1] over the correspondingly restricted rough path.
ControlledPath restrict(const ControlledPath& cp, int k0, int k1);

}  // namespace rcm
