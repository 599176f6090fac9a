#include "rcm/stationary.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rcm/gubinelli.hpp"
#include "rcm/rde.hpp"

namespace rcm {

ControlledPath ou_stationary(RoughPathPtr rp, double* tail_bound) {
    const Grid& g = rp->grid();
    if (g.length() < 5.0 - 1e-12) throw std::invalid_argument("ou_stationary: horizon must be at least 5");
    const int d = rp->dim();
    const int n = g.nodes();
    Eigen::MatrixXd integrand = Eigen::MatrixXd::Zero(n, d * d);
    for (int a = 0; a < d; ++a) integrand.col(a * d + a).setOnes();
    const ControlledPath unit(rp, integrand, Eigen::MatrixXd::Zero(n, d * d * d));
    Eigen::MatrixXd z = convolve_diffusion_values(-Eigen::MatrixXd::Identity(d, d), unit);
    if (tail_bound) {
        double sup = 0.0;
        for (int k = 0; k < n; ++k) sup = std::max(sup, (rp->path().row(k) - rp->path().row(0)).norm());
        *tail_bound = std::exp(-g.length()) * sup;
    }
    return ControlledPath(rp, std::move(z), std::move(integrand));
}

double decay_rate(const Eigen::MatrixXd& a) {
    const Eigen::VectorXcd lam = a.eigenvalues();
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < lam.size(); ++k) worst = std::max(worst, lam(k).real());
    if (!(worst < 0.0)) {
        throw std::domain_error("stationary solution needs an exponentially stable generator (max Re λ = " +
                                std::to_string(worst) +
                                "); the non-resonance condition A^s - i A^c stable fails for this order");
    }
    return -worst;
}

ControlledPath stationary_affine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& f, const ControlledPath& g,
                                 double* tail_bound) {
    const double delta = decay_rate(a);
    if (tail_bound) *tail_bound = std::exp(-delta * g.ref().grid().length());
    RdeOptions opts;
    opts.blowup_bound = std::numeric_limits<double>::infinity();
    return solve_affine(a, f, g, Eigen::VectorXd::Zero(a.rows()), opts);
}

namespace {

// Values and Gubinelli derivatives of a CoeffPoly along the α paths.
void evaluate_along(const CoeffPoly& p, const Eigen::MatrixXd& alpha, const std::vector<Eigen::MatrixXd>& alpha_p,
                    int d, Eigen::VectorXd& value, Eigen::MatrixXd* deriv) {
    const int n = static_cast<int>(alpha.rows());
    value.setZero(n);
    if (deriv) deriv->setZero(n, d);
    if (p.is_zero()) return;
    const int top = p.max_atom();
    std::vector<CoeffPoly> partials;
    if (deriv)
        for (int k = 1; k <= top; ++k) partials.push_back(p.partial(k));
    std::vector<double> vals(alpha.cols());
    for (int node = 0; node < n; ++node) {
        for (int k = 0; k < alpha.cols(); ++k) vals[k] = alpha(node, k);
        value(node) = p.evaluate(vals);
        if (!deriv) continue;
        for (int k = 1; k <= top; ++k) {
            if (partials[k - 1].is_zero()) continue;
            const double dk = partials[k - 1].evaluate(vals);
            for (int b = 0; b < d; ++b) (*deriv)(node, b) += dk * alpha_p[k](node, b);
        }
    }
}

}  // namespace

ControlledPath HierarchyResult::path(int i) const {
    return ControlledPath(rp, alpha.col(i), alpha_p.at(i));
}

ControlledPath HierarchyResult::diffusion(int i) const { return diffusions.at(i); }

HierarchyResult solve_hierarchy(const CoefficientSystem& cs, RoughPathPtr rp, const HierarchyOptions& opts) {
    const int q = cs.q;
    const int d = rp->dim();
    const int n = rp->grid().nodes();
    if (d != cs.noise_dim) throw std::invalid_argument("solve_hierarchy: rough path dimension differs from noise_dim");

    HierarchyResult out;
    out.rp = rp;
    out.q = q;
    out.alpha = Eigen::MatrixXd::Zero(n, q + 1);
    out.alpha_p.assign(q + 1, Eigen::MatrixXd::Zero(n, d));
    out.drift.assign(q + 1, Eigen::MatrixXd::Zero(n, 1));
    out.alpha0.assign(q + 1, 0.0);
    out.d2g_norm.assign(q + 1, 0.0);
    out.picard_iterations.assign(q + 1, 0);
    out.tail_bound.assign(q + 1, 0.0);
    out.diffusions.assign(q + 1, ControlledPath::zero(rp, d));

    for (int i = 1; i <= q; ++i) {
        const OrderData& od = cs.order(i);
        if (od.zero_flag) continue;

        Monomial lin(i, 0);
        lin[i - 1] = 1;
        const Rational self = od.f.coefficient(lin);
        CoeffPoly f_rest = od.f;
        f_rest.add_term(lin, -self);
        Eigen::MatrixXd a(1, 1);
        a(0, 0) = to_double(od.A_alpha + self);

        bool self_ref = f_rest.depends_on(i);
        for (const auto& g : od.g) self_ref = self_ref || g.depends_on(i);

        Eigen::VectorXd fv;
        Eigen::VectorXd gv;
        Eigen::MatrixXd gd;
        int iters = 0;
        for (;;) {
            evaluate_along(f_rest, out.alpha, out.alpha_p, d, fv, nullptr);
            Eigen::MatrixXd gval(n, d);
            Eigen::MatrixXd gder(n, d * d);
            for (int ch = 0; ch < d; ++ch) {
                evaluate_along(od.g[ch], out.alpha, out.alpha_p, d, gv, &gd);
                gval.col(ch) = gv;
                for (int b = 0; b < d; ++b) gder.col(ch * d + b) = gd.col(b);
            }
            ControlledPath gpath(rp, gval, gder);
            double tail = 0.0;
            ControlledPath sol = stationary_affine(a, fv, gpath, &tail);
            const double change = (sol.y().col(0) - out.alpha.col(i)).cwiseAbs().maxCoeff();
            const double scale = 1.0 + sol.y().cwiseAbs().maxCoeff();
            out.alpha.col(i) = sol.y().col(0);
            out.alpha_p[i] = gval;
            out.drift[i] = fv;
            out.tail_bound[i] = tail;
            out.diffusions[i] = gpath;
            ++iters;
            if (!self_ref) break;
            if (change <= opts.picard_tol * scale) break;
            if (iters >= opts.max_picard) {
                throw std::runtime_error("solve_hierarchy: Picard iteration for α_" + std::to_string(i) +
                                         " did not converge");
            }
        }
        if (self_ref) out.picard_iterations[i] = iters;
        out.alpha0[i] = out.alpha(n - 1, i);
        out.d2g_norm[i] = norm_d2g(out.path(i)).total;
    }
    return out;
}

double stationarity_check(const HierarchyResult& h, const CoefficientSystem& cs, int i, int s_nodes) {
    const int n = h.rp->grid().nodes();
    if (s_nodes < 1 || s_nodes >= n) throw std::invalid_argument("stationarity_check: invalid horizon");
    if (cs.order(i).zero_flag) return 0.0;
    const int k0 = n - 1 - s_nodes;
    const int k1 = n - 1;
    Monomial lin(i, 0);
    lin[i - 1] = 1;
    const Rational self = cs.order(i).f.coefficient(lin);
    Eigen::MatrixXd a(1, 1);
    a(0, 0) = to_double(cs.order(i).A_alpha + self);
    const ControlledPath g = restrict(h.diffusions.at(i), k0, k1);
    const Eigen::MatrixXd f = h.drift.at(i).middleRows(k0, s_nodes + 1);
    Eigen::VectorXd y0(1);
    y0(0) = h.alpha(k0, i);
    const ControlledPath evolved = solve_affine(a, f, g, y0);
    return std::abs(evolved.y()(s_nodes, 0) - h.alpha(k1, i));
}

}  // namespace rcm
