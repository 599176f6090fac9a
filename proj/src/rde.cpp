#include "rcm/rde.hpp"

#include "rcm/gubinelli.hpp"
#include "rcm/semigroup.hpp"

namespace rcm {

ControlledPath solve_rde(const Eigen::MatrixXd& a, const DriftField& f, const SmoothMap& g, RoughPathPtr rp,
                         const Eigen::VectorXd& y0, const RdeOptions& opts) {
    const int m = static_cast<int>(y0.size());
    const int d = rp->dim();
    if (a.rows() != m || a.cols() != m) throw std::invalid_argument("solve_rde: generator shape mismatch");
    const Grid& grid = rp->grid();
    const CellWeights cw(a, grid.step());
    const Eigen::MatrixXd& w = rp->path();

    Eigen::MatrixXd y(grid.nodes(), m);
    Eigen::MatrixXd yp(grid.nodes(), m * d);
    Eigen::VectorXd cur = y0;
    Eigen::VectorXd g0(m), g1(m);
    for (int k = 0;; ++k) {
        const Eigen::VectorXd gv = g.value(cur);
        if (gv.size() != m * d) throw std::invalid_argument("solve_rde: diffusion must have m*d components");
        y.row(k) = cur.transpose();
        yp.row(k) = gv.transpose();
        if (k == grid.cells()) break;

        const Eigen::MatrixXd dgg = g.jacobian(cur) * gv.reshaped(d, m).transpose();
        const Eigen::MatrixXd& ww = rp->cell_second_level(k);
        for (int i = 0; i < m; ++i) {
            double first = 0.0;
            double second = 0.0;
            for (int aa = 0; aa < d; ++aa) {
                first += gv(i * d + aa) * (w(k + 1, aa) - w(k, aa));
                for (int b = 0; b < d; ++b) second += dgg(i * d + aa, b) * ww(b, aa);
            }
            g0(i) = first;
            g1(i) = 2.0 * second;
        }
        const Eigen::VectorXd fv = f ? f(cur) : Eigen::VectorXd::Zero(m);
        cur = cw.E * cur + cw.h * (cw.P1 * fv) + cw.diffusion(g0, g1);
        const double nrm = cur.norm();
        if (!std::isfinite(nrm) || nrm > opts.blowup_bound) throw BlowUp(k + 1, nrm);
    }
    return ControlledPath(std::move(rp), std::move(y), std::move(yp));
}

ControlledPath solve_affine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f, const ControlledPath& g,
                            const Eigen::VectorXd& y0, const RdeOptions& opts) {
    const int m = static_cast<int>(y0.size());
    const Grid& grid = g.ref().grid();
    if (a.rows() != m || a.cols() != m) throw std::invalid_argument("solve_affine: generator shape mismatch");
    if (f.rows() != grid.nodes() || f.cols() != m) throw std::invalid_argument("solve_affine: drift shape mismatch");
    if (g.dim() != m * g.noise_dim()) throw std::invalid_argument("solve_affine: diffusion must have m*d components");
    const CellWeights cw(a, grid.step());
    Eigen::MatrixXd y(grid.nodes(), m);
    y.row(0) = y0.transpose();
    Eigen::VectorXd g0, g1;
    for (int k = 0; k < grid.cells(); ++k) {
        cell_pieces(g, k, g0, g1);
        const Eigen::VectorXd next = cw.E * y.row(k).transpose() +
                                     cw.drift(f.row(k).transpose(), f.row(k + 1).transpose()) +
                                     cw.diffusion(g0, g1);
        const double nrm = next.norm();
        if (!std::isfinite(nrm) || nrm > opts.blowup_bound) throw BlowUp(k + 1, nrm);
        y.row(k + 1) = next.transpose();
    }
    return ControlledPath(g.ref_ptr(), std::move(y), g.y());
}

}  // namespace rcm
