#include "rcm/gubinelli.hpp"

#include <stdexcept>

#include "rcm/semigroup.hpp"

namespace rcm {

namespace {

int integrand_rows(const ControlledPath& integrand) {
    const int d = integrand.noise_dim();
    if (integrand.dim() % d != 0) throw std::invalid_argument("rough integral: integrand must have m*d components");
    return integrand.dim() / d;
}

}  // namespace

void cell_pieces(const ControlledPath& integrand, int k, Eigen::VectorXd& g0, Eigen::VectorXd& g1) {
    const RoughPath& rp = integrand.ref();
    const int d = rp.dim();
    const int m = integrand.dim() / d;
    const Eigen::MatrixXd& y = integrand.y();
    const Eigen::MatrixXd& yp = integrand.yp();
    const Eigen::MatrixXd& w = rp.path();
    const Eigen::MatrixXd& ww = rp.cell_second_level(k);
    g0.setZero(m);
    g1.setZero(m);
    for (int i = 0; i < m; ++i) {
        double first = 0.0;
        double second = 0.0;
        for (int a = 0; a < d; ++a) {
            first += y(k, i * d + a) * (w(k + 1, a) - w(k, a));
            for (int b = 0; b < d; ++b) second += yp(k, (i * d + a) * d + b) * ww(b, a);
        }
        g0(i) = first;
        g1(i) = 2.0 * second;
    }
}

Eigen::VectorXd rough_integral(const ControlledPath& integrand, int s, int t) {
    const int m = integrand_rows(integrand);
    if (s < 0 || t >= integrand.nodes() || s > t) throw std::out_of_range("rough_integral: invalid node range");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd g0, g1;
    for (int k = s; k < t; ++k) {
        cell_pieces(integrand, k, g0, g1);
        acc += g0 + 0.5 * g1;
    }
    return acc;
}

ControlledPath rough_integral_path(const ControlledPath& integrand) {
    const int m = integrand_rows(integrand);
    const int n = integrand.nodes();
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, m);
    Eigen::VectorXd g0, g1;
    for (int k = 0; k + 1 < n; ++k) {
        cell_pieces(integrand, k, g0, g1);
        y.row(k + 1) = y.row(k) + (g0 + 0.5 * g1).transpose();
    }
    return ControlledPath(integrand.ref_ptr(), std::move(y), integrand.y());
}

Eigen::MatrixXd convolve_drift_values(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f, const Grid& grid) {
    const int m = static_cast<int>(a.rows());
    if (f.cols() != m || f.rows() != grid.nodes()) throw std::invalid_argument("convolve_drift: shape mismatch");
    const CellWeights cw(a, grid.step());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(grid.nodes(), m);
    for (int k = 0; k < grid.cells(); ++k) {
        out.row(k + 1) =
            (cw.E * out.row(k).transpose() + cw.drift(f.row(k).transpose(), f.row(k + 1).transpose())).transpose();
    }
    return out;
}

ControlledPath convolve_drift(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f, RoughPathPtr ref) {
    Eigen::MatrixXd y = convolve_drift_values(a, f, ref->grid());
    return ControlledPath::deterministic(std::move(ref), std::move(y));
}

Eigen::VectorXd convolve_diffusion(const Eigen::MatrixXd& a, const ControlledPath& integrand, int t_node) {
    const int m = integrand_rows(integrand);
    if (a.rows() != m || a.cols() != m) throw std::invalid_argument("convolve_diffusion: generator shape mismatch");
    if (t_node < 0 || t_node >= integrand.nodes()) throw std::out_of_range("convolve_diffusion: invalid node");
    const Grid& g = integrand.ref().grid();
    const CellWeights cw(a, g.step());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd g0, g1;
    // Σ over cells [u, v] of e^{A(t-v)} ∫_u^v e^{A(v-r)} (G_u + G′_u W_{u,r}) dW_r.
    Eigen::MatrixXd carry = Eigen::MatrixXd::Identity(m, m);
    for (int k = t_node - 1; k >= 0; --k) {
        cell_pieces(integrand, k, g0, g1);
        acc += carry * cw.diffusion(g0, g1);
        carry = carry * cw.E;
    }
    return acc;
}

Eigen::MatrixXd convolve_diffusion_values(const Eigen::MatrixXd& a, const ControlledPath& integrand) {
    const int m = integrand_rows(integrand);
    if (a.rows() != m || a.cols() != m) throw std::invalid_argument("convolve_diffusion: generator shape mismatch");
    const Grid& g = integrand.ref().grid();
    const CellWeights cw(a, g.step());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.nodes(), m);
    Eigen::VectorXd g0, g1;
    for (int k = 0; k < g.cells(); ++k) {
        cell_pieces(integrand, k, g0, g1);
        out.row(k + 1) = (cw.E * out.row(k).transpose() + cw.diffusion(g0, g1)).transpose();
    }
    return out;
}

}  // namespace rcm
