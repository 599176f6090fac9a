#include "rcm/controlled_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcm {

ControlledPath::ControlledPath(RoughPathPtr ref, Eigen::MatrixXd y, Eigen::MatrixXd yp)
    : ref_(std::move(ref)), y_(std::move(y)), yp_(std::move(yp)) {
    if (!ref_) throw std::invalid_argument("ControlledPath: null reference path");
    const int n = ref_->grid().nodes();
    if (y_.rows() != n || yp_.rows() != n) {
        throw std::invalid_argument("ControlledPath: sample count does not match the reference grid");
    }
    if (yp_.cols() != y_.cols() * ref_->dim()) {
        throw std::invalid_argument("ControlledPath: derivative must have m*d columns");
    }
}

ControlledPath ControlledPath::zero(RoughPathPtr ref, int m) {
    const int n = ref->grid().nodes();
    const int d = ref->dim();
    return ControlledPath(std::move(ref), Eigen::MatrixXd::Zero(n, m), Eigen::MatrixXd::Zero(n, m * d));
}

ControlledPath ControlledPath::deterministic(RoughPathPtr ref, Eigen::MatrixXd y) {
    const int d = ref->dim();
    Eigen::MatrixXd yp = Eigen::MatrixXd::Zero(y.rows(), y.cols() * d);
    return ControlledPath(std::move(ref), std::move(y), std::move(yp));
}

ControlledPath ControlledPath::identity(RoughPathPtr ref) {
    const int n = ref->grid().nodes();
    const int d = ref->dim();
    Eigen::MatrixXd yp = Eigen::MatrixXd::Zero(n, d * d);
    for (int i = 0; i < d; ++i) yp.col(i * d + i).setOnes();
    Eigen::MatrixXd y = ref->path();
    return ControlledPath(std::move(ref), std::move(y), std::move(yp));
}

Eigen::MatrixXd ControlledPath::derivative(int k) const {
    const int m = dim();
    const int d = noise_dim();
    Eigen::MatrixXd out(m, d);
    for (int i = 0; i < m; ++i)
        for (int b = 0; b < d; ++b) out(i, b) = yp_(k, i * d + b);
    return out;
}

Eigen::VectorXd remainder(const ControlledPath& cp, int s, int t) {
    if (s < 0 || t >= cp.nodes() || s >= t) throw std::out_of_range("remainder: invalid node pair");
    return cp.value(t) - cp.value(s) - cp.derivative(s) * cp.ref().increment(s, t);
}

D2GNorm norm_d2g(const ControlledPath& cp) { return norm_d2g(cp, 0, cp.nodes() - 1); }

D2GNorm norm_d2g(const ControlledPath& cp, int k0, int k1) {
    if (k0 < 0 || k1 >= cp.nodes() || k0 > k1) throw std::out_of_range("norm_d2g: invalid node range");
    const Grid& g = cp.ref().grid();
    const double gamma = cp.ref().gamma();
    const int m = cp.dim();
    const int d = cp.noise_dim();
    const Eigen::MatrixXd& y = cp.y();
    const Eigen::MatrixXd& yp = cp.yp();
    const Eigen::MatrixXd& w = cp.ref().path();

    D2GNorm out;
    for (int k = k0; k <= k1; ++k) {
        out.sup_Y = std::max(out.sup_Y, y.row(k).norm());
        out.sup_Yp = std::max(out.sup_Yp, yp.row(k).norm());
    }
    const double h = g.step();
    Eigen::VectorXd r(m);
    for (int s = k0; s <= k1; ++s) {
        for (int t = s + 1; t <= k1; ++t) {
            const double dt = (t - s) * h;
            const double dp = (yp.row(t) - yp.row(s)).norm();
            for (int i = 0; i < m; ++i) {
                double acc = y(t, i) - y(s, i);
                for (int b = 0; b < d; ++b) acc -= yp(s, i * d + b) * (w(t, b) - w(s, b));
                r(i) = acc;
            }
            out.holder_Yp = std::max(out.holder_Yp, dp / std::pow(dt, gamma));
            out.holder_remainder = std::max(out.holder_remainder, r.norm() / std::pow(dt, 2.0 * gamma));
        }
    }
    out.total = out.sup_Y + out.sup_Yp + out.holder_Yp + out.holder_remainder;
    out.seminorm = out.holder_Yp + out.holder_remainder;
    return out;
}

namespace {

void require_same_ref(const ControlledPath& p, const ControlledPath& q) {
    if (p.ref_ptr() != q.ref_ptr() &&
        (!p.ref().grid().same_as(q.ref().grid()) || p.ref().path() != q.ref().path())) {
        throw std::invalid_argument("controlled paths refer to different rough paths");
    }
}

}  // namespace

ControlledPath add_scale(double a, const ControlledPath& p, double b, const ControlledPath& q) {
    require_same_ref(p, q);
    if (p.dim() != q.dim()) throw std::invalid_argument("add_scale: dimension mismatch");
    return ControlledPath(p.ref_ptr(), a * p.y() + b * q.y(), a * p.yp() + b * q.yp());
}

ControlledPath scale(double a, const ControlledPath& p) { return ControlledPath(p.ref_ptr(), a * p.y(), a * p.yp()); }

ControlledPath mul(const ControlledPath& p, const ControlledPath& q) {
    require_same_ref(p, q);
    if (p.dim() != 1 || q.dim() != 1) throw std::invalid_argument("mul: factors must be scalar");
    const Eigen::ArrayXd py = p.y().col(0).array();
    const Eigen::ArrayXd qy = q.y().col(0).array();
    Eigen::MatrixXd yp = (p.yp().array().colwise() * qy + q.yp().array().colwise() * py).matrix();
    Eigen::MatrixXd y = (py * qy).matrix();
    return ControlledPath(p.ref_ptr(), std::move(y), std::move(yp));
}

double product_constant(const ControlledPath& p, const ControlledPath& q) {
    const double np = norm_d2g(p).total;
    const double nq = norm_d2g(q).total;
    if (np == 0.0 || nq == 0.0) return 0.0;
    const double w = holder_norms(p.ref()).first;
    return norm_d2g(mul(p, q)).total / ((1.0 + w) * (1.0 + w) * np * nq);
}

ControlledPath compose(const SmoothMap& g, const ControlledPath& cp) {
    const int n = cp.nodes();
    const int d = cp.noise_dim();
    Eigen::VectorXd first = g.value(cp.value(0));
    const int k = static_cast<int>(first.size());
    Eigen::MatrixXd y(n, k);
    Eigen::MatrixXd yp(n, k * d);
    for (int node = 0; node < n; ++node) {
        const Eigen::VectorXd v = cp.value(node);
        const Eigen::VectorXd gv = node == 0 ? first : g.value(v);
        const Eigen::MatrixXd jac = g.jacobian(v);
        if (gv.size() != k || jac.rows() != k || jac.cols() != cp.dim()) {
            throw std::runtime_error("compose: map returned inconsistent dimensions");
        }
        if (!gv.allFinite() || !jac.allFinite()) {
            throw std::runtime_error("compose: non-finite value or derivative at node " + std::to_string(node));
        }
        y.row(node) = gv.transpose();
        const Eigen::MatrixXd dyp = jac * cp.derivative(node);
        for (int i = 0; i < k; ++i)
            for (int b = 0; b < d; ++b) yp(node, i * d + b) = dyp(i, b);
    }
    return ControlledPath(cp.ref_ptr(), std::move(y), std::move(yp));
}

ControlledPath restrict(const ControlledPath& cp, int k0, int k1) {
    auto sub = std::make_shared<const RoughPath>(restrict(cp.ref(), k0, k1));
    return ControlledPath(std::move(sub), cp.y().middleRows(k0, k1 - k0 + 1), cp.yp().middleRows(k0, k1 - k0 + 1));
}

}  // namespace rcm
