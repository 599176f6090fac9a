#include "rcm/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rcm/semigroup.hpp"

namespace rcm {

namespace {

// Orthonormal real basis for the span of the real and imaginary parts of the given eigenvectors.
Eigen::MatrixXd real_basis(const Eigen::MatrixXcd& vecs, const std::vector<int>& idx) {
    const int n = static_cast<int>(vecs.rows());
    Eigen::MatrixXd raw(n, 2 * idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        raw.col(2 * j) = vecs.col(idx[j]).real();
        raw.col(2 * j + 1) = vecs.col(idx[j]).imag();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(raw);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    if (rank != static_cast<int>(idx.size())) throw std::runtime_error("split: could not build a real invariant basis");
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
    return q;
}

double max_sampled_growth(const Eigen::MatrixXd& a, double t_from, double t_to, double rate) {
    double out = 1.0;
    const int samples = 200;
    for (int k = 0; k <= samples; ++k) {
        const double t = t_from + (t_to - t_from) * k / samples;
        const double nrm = expm(a * t).operatorNorm();
        out = std::max(out, nrm * std::exp(-rate * t));
    }
    return out;
}

}  // namespace

SpectralSplit split(const Eigen::MatrixXd& a, double tol) {
    const int n = static_cast<int>(a.rows());
    if (n == 0 || a.cols() != n) throw std::invalid_argument("split: matrix must be square and non-empty");
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("split: eigen decomposition failed");
    const Eigen::VectorXcd lam = es.eigenvalues();
    Eigen::MatrixXcd v = es.eigenvectors();
    for (int j = 0; j < n; ++j) v.col(j).normalize();

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    const double smin = svd.singularValues()(n - 1);
    if (smin < 1e-8) {
        throw std::runtime_error("split: matrix is defective (eigenvector basis singular, smallest singular value " +
                                 std::to_string(smin) + "); only diagonalizable generators are supported");
    }

    std::vector<int> center, stable;
    for (int j = 0; j < n; ++j) (lam(j).real() < -tol ? stable : center).push_back(j);

    SpectralSplit out;
    out.center_dim = static_cast<int>(center.size());
    out.stable_dim = static_cast<int>(stable.size());

    const Eigen::MatrixXcd vinv = v.inverse();
    Eigen::MatrixXcd pc = Eigen::MatrixXcd::Zero(n, n);
    for (int j : center) pc += v.col(j) * vinv.row(j);
    out.Pc = pc.real();
    out.Ps = Eigen::MatrixXd::Identity(n, n) - out.Pc;

    out.Bc = center.empty() ? Eigen::MatrixXd(n, 0) : real_basis(v, center);
    out.Bs = stable.empty() ? Eigen::MatrixXd(n, 0) : real_basis(v, stable);
    out.Ac = out.Bc.transpose() * a * out.Bc;
    out.As = out.Bs.transpose() * a * out.Bs;

    double min_center_re = std::numeric_limits<double>::infinity();
    for (int j : center) {
        min_center_re = std::min(min_center_re, lam(j).real());
        if (lam(j).real() > tol) out.center_unstable = true;
    }
    double max_stable_re = -std::numeric_limits<double>::infinity();
    for (int j : stable) max_stable_re = std::max(max_stable_re, lam(j).real());

    out.nu = center.empty() ? 0.0 : std::max(0.0, min_center_re);
    out.beta = stable.empty() ? 0.0 : -max_stable_re;
    if (!center.empty()) out.Mc = max_sampled_growth(out.Ac, -10.0, 0.0, out.nu);
    if (!stable.empty()) out.Ms = max_sampled_growth(out.As, 0.0, 10.0, -out.beta);
    out.gap = out.nu + out.beta;
    return out;
}

}  // namespace rcm
