#include "rcm/manifold.hpp"

#include <cmath>

#include "rcm/gubinelli.hpp"

namespace rcm {

ManifoldApproximation make_approximation(const HierarchyResult& h, std::uint64_t seed) {
    ManifoldApproximation ma;
    ma.q = h.q;
    ma.alpha0 = h.alpha0;
    ma.seed = seed;
    ma.horizon = h.rp->grid().length();
    ma.cells_per_unit = static_cast<int>(std::lround(1.0 / h.rp->grid().step()));
    return ma;
}

ManifoldApproximation make_approximation(const std::vector<Rational>& alpha) {
    ManifoldApproximation ma;
    ma.q = static_cast<int>(alpha.size()) - 1;
    for (const auto& a : alpha) ma.alpha0.push_back(to_double(a));
    ma.horizon = std::numeric_limits<double>::infinity();
    return ma;
}

double evaluate_phi(const ManifoldApproximation& ma, double xi) {
    double acc = 0.0;
    double p = xi;
    for (int i = 1; i <= ma.q; ++i) {
        acc += ma.alpha0.at(i) * p;
        p *= xi;
    }
    return acc;
}

double cutoff_ramp(double u) {
    if (u <= 0.5) return 1.0;
    if (u >= 1.0) return 0.0;
    const double s = 2.0 * u - 1.0;
    return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

ControlledPath cutoff_apply(const ControlledPath& cp, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("cutoff_apply: R must be positive");
    return scale(cutoff_ramp(norm_d2g(cp).total / r), cp);
}

OrderFit order_fit(const std::vector<double>& xis, const std::vector<double>& errors) {
    if (xis.size() != errors.size()) throw std::invalid_argument("order_fit: size mismatch");
    OrderFit fit;
    std::vector<double> lx, le;
    for (std::size_t k = 0; k < xis.size(); ++k) {
        if (errors[k] > 0.0 && xis[k] != 0.0 && std::isfinite(errors[k])) {
            lx.push_back(std::log(std::abs(xis[k])));
            le.push_back(std::log(errors[k]));
        } else {
            ++fit.excluded;
        }
    }
    fit.used = static_cast<int>(lx.size());
    if (fit.used < 4) throw std::invalid_argument("order_fit: need at least 4 positive errors");
    double mx = 0.0, me = 0.0;
    for (int k = 0; k < fit.used; ++k) {
        mx += lx[k];
        me += le[k];
    }
    mx /= fit.used;
    me /= fit.used;
    double sxx = 0.0, sxe = 0.0;
    for (int k = 0; k < fit.used; ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxe += (lx[k] - mx) * (le[k] - me);
    }
    if (sxx == 0.0) throw std::invalid_argument("order_fit: all ξ coincide");
    fit.slope = sxe / sxx;
    fit.intercept = me - fit.slope * mx;
    return fit;
}

double leading_order_happ(const SystemSpec& sys, int l, double xi, RoughPathPtr rp) {
    const Grid& g = rp->grid();
    const int n = g.nodes();
    const int d = rp->dim();
    const double ac = to_double(sys.Ac);
    Eigen::MatrixXd as(1, 1);
    as(0, 0) = to_double(sys.As);
    if (!(as(0, 0) < 0.0)) throw std::domain_error("leading_order_happ: stable block is not stable");

    const NumericField fl(sys.Fs.homogeneous(l));
    std::vector<NumericField> gl;
    for (const auto& gs : sys.Gs) gl.emplace_back(gs.homogeneous(l));

    Eigen::MatrixXd f(n, 1);
    Eigen::MatrixXd integrand(n, d);
    for (int k = 0; k < n; ++k) {
        const double x = std::exp(ac * (g.node(k) - g.t1())) * xi;
        f(k, 0) = fl.eval(x, 0.0);
        for (int a = 0; a < d; ++a) integrand(k, a) = gl[a].eval(x, 0.0);
    }
    const Eigen::MatrixXd drift = convolve_drift_values(as, f, g);
    const ControlledPath noise(rp, integrand, Eigen::MatrixXd::Zero(n, d * d));
    return drift(n - 1, 0) + convolve_diffusion(as, noise, n - 1)(0);
}

}  // namespace rcm
