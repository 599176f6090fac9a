#include "rcm/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>

namespace rcm {

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");
    if (a.size() == 0) return a;
    Eigen::MatrixXd out = a.exp();
    if (!out.allFinite()) throw std::runtime_error("expm: matrix exponential overflowed");
    return out;
}

CellWeights::CellWeights(const Eigen::MatrixXd& a, double step) : h(step) {
    const int m = static_cast<int>(a.rows());
    if (a.cols() != m) throw std::invalid_argument("CellWeights: matrix must be square");
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(3 * m, 3 * m);
    aug.block(0, 0, m, m) = a * step;
    aug.block(0, m, m, m).setIdentity();
    aug.block(m, 2 * m, m, m).setIdentity();
    const Eigen::MatrixXd ex = expm(aug);
    E = ex.block(0, 0, m, m);
    P1 = ex.block(0, m, m, m);
    P2 = ex.block(0, 2 * m, m, m);
}

}  // namespace rcm
