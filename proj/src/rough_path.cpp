#include "rcm/rough_path.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rcm {

namespace {

// Composite trapezoid rule for ∫ W_{s,r} ⊗ dW_r over consecutive rows [r0, r1] of `samples`.
Eigen::MatrixXd trapezoid_area(const Eigen::MatrixXd& samples, int r0, int r1) {
    const int d = static_cast<int>(samples.cols());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
    const Eigen::RowVectorXd base = samples.row(r0);
    for (int r = r0; r < r1; ++r) {
        const Eigen::RowVectorXd left = samples.row(r) - base;
        const Eigen::RowVectorXd right = samples.row(r + 1) - base;
        const Eigen::RowVectorXd dw = samples.row(r + 1) - samples.row(r);
        out.noalias() += 0.5 * (left + right).transpose() * dw;
    }
    return out;
}

// Coarsens fine piecewise-linear cells (refine per target cell) via Chen.
std::vector<Eigen::MatrixXd> coarsen_piecewise_linear(const Eigen::MatrixXd& fine, int cells, int refine) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(cells);
    for (int k = 0; k < cells; ++k) out.push_back(trapezoid_area(fine, k * refine, (k + 1) * refine));
    return out;
}

}  // namespace

void check_gamma(double gamma) {
    if (!(gamma > 1.0 / 3.0 && gamma <= 0.5)) {
        throw std::invalid_argument("rough path: gamma must lie in (1/3, 1/2], got " + std::to_string(gamma));
    }
}

RoughPath::RoughPath(double gamma, Grid grid, Eigen::MatrixXd path, std::vector<Eigen::MatrixXd> cells,
                     bool geometric)
    : gamma_(gamma), grid_(grid), path_(std::move(path)), cells_(std::move(cells)), geometric_(geometric) {
    check_gamma(gamma_);
    if (path_.rows() != grid_.nodes()) throw std::invalid_argument("RoughPath: path rows must equal grid nodes");
    if (path_.cols() < 1) throw std::invalid_argument("RoughPath: dimension must be >= 1");
    if (static_cast<int>(cells_.size()) != grid_.cells()) {
        throw std::invalid_argument("RoughPath: need one second-level matrix per cell");
    }
    for (const auto& c : cells_) {
        if (c.rows() != path_.cols() || c.cols() != path_.cols()) {
            throw std::invalid_argument("RoughPath: second-level matrices must be d x d");
        }
    }
}

Eigen::MatrixXd RoughPath::second_level(int s, int t) const {
    if (s < 0 || t > grid_.cells() || s > t) throw std::out_of_range("RoughPath::second_level: bad node pair");
    const int d = dim();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (int k = s; k < t; ++k) {
        acc += cells_[k] + increment(s, k) * increment(k, k + 1).transpose();
    }
    return acc;
}

SecondLevelTable::SecondLevelTable(const RoughPath& rp) : nodes_(rp.grid().nodes()) {
    const int d = rp.dim();
    table_.assign(static_cast<std::size_t>(nodes_) * nodes_, Eigen::MatrixXd::Zero(d, d));
    for (int s = 0; s < nodes_; ++s) {
        for (int t = s + 1; t < nodes_; ++t) {
            const auto& prev = table_[static_cast<std::size_t>(s) * nodes_ + t - 1];
            table_[static_cast<std::size_t>(s) * nodes_ + t] =
                prev + rp.cell_second_level(t - 1) + rp.increment(s, t - 1) * rp.increment(t - 1, t).transpose();
        }
    }
}

RoughPath lift_smooth(const Eigen::MatrixXd& samples, const Grid& target, double gamma) {
    check_gamma(gamma);
    const int rows = static_cast<int>(samples.rows());
    if (rows < 2 || (rows - 1) % target.cells() != 0) {
        throw std::invalid_argument("lift_smooth: sample count must be m * n + 1 for the target grid");
    }
    const int refine = (rows - 1) / target.cells();
    if (refine < 8) throw std::invalid_argument("lift_smooth: need at least 8 sub-nodes per target cell");
    Eigen::MatrixXd nodes(target.nodes(), samples.cols());
    for (int k = 0; k < target.nodes(); ++k) nodes.row(k) = samples.row(k * refine);
    return RoughPath(gamma, target, std::move(nodes), coarsen_piecewise_linear(samples, target.cells(), refine),
                     true);
}

RoughPath lift_brownian(std::uint64_t seed, const Grid& grid, int d, int refinement, double gamma) {
    if (d < 1) throw std::invalid_argument("lift_brownian: d must be >= 1");
    if (refinement < 1) throw std::invalid_argument("lift_brownian: refinement must be >= 1");
    check_gamma(gamma);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    if (d == 1) {
        const double sd = std::sqrt(grid.step());
        Eigen::MatrixXd path = Eigen::MatrixXd::Zero(grid.nodes(), 1);
        std::vector<Eigen::MatrixXd> cells(grid.cells(), Eigen::MatrixXd(1, 1));
        for (int k = 0; k < grid.cells(); ++k) {
            const double dw = sd * normal(gen);
            path(k + 1, 0) = path(k, 0) + dw;
            cells[k](0, 0) = 0.5 * dw * dw;
        }
        return RoughPath(gamma, grid, std::move(path), std::move(cells), true);
    }

    const int fine_cells = grid.cells() * refinement;
    const double sd = std::sqrt(grid.step() / refinement);
    Eigen::MatrixXd fine = Eigen::MatrixXd::Zero(fine_cells + 1, d);
    for (int k = 0; k < fine_cells; ++k) {
        for (int a = 0; a < d; ++a) fine(k + 1, a) = fine(k, a) + sd * normal(gen);
    }
    Eigen::MatrixXd nodes(grid.nodes(), d);
    for (int k = 0; k < grid.nodes(); ++k) nodes.row(k) = fine.row(k * refinement);
    return RoughPath(gamma, grid, std::move(nodes), coarsen_piecewise_linear(fine, grid.cells(), refinement), true);
}

FbmSampler::FbmSampler(double hurst, const Grid& grid, int dyadic_level)
    : hurst_(hurst), target_(grid), refine_(1 << std::max(0, dyadic_level)) {
    if (!(hurst > 1.0 / 3.0 && hurst <= 0.5)) {
        throw std::invalid_argument("lift_fbm: Hurst index must lie in (1/3, 1/2]");
    }
    if (dyadic_level < 0 || dyadic_level > 12) throw std::invalid_argument("lift_fbm: dyadic level out of range");
    fine_ = Grid(grid.t0(), grid.t1(), grid.cells() * refine_);
    const int m = fine_.cells();
    Eigen::MatrixXd cov(m, m);
    const double two_h = 2.0 * hurst;
    for (int i = 0; i < m; ++i) {
        const double ti = fine_.node(i + 1) - fine_.t0();
        for (int j = 0; j <= i; ++j) {
            const double tj = fine_.node(j + 1) - fine_.t0();
            const double c =
                0.5 * (std::pow(ti, two_h) + std::pow(tj, two_h) - std::pow(std::abs(ti - tj), two_h));
            cov(i, j) = c;
            cov(j, i) = c;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("lift_fbm: fBm covariance is not numerically positive definite for " +
                                 std::to_string(m) + " nodes");
    }
    chol_ = llt.matrixL();
}

Eigen::VectorXd FbmSampler::sample(std::uint64_t seed) const {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int m = fine_.cells();
    Eigen::VectorXd z(m);
    for (int i = 0; i < m; ++i) z(i) = normal(gen);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m + 1);
    out.tail(m) = chol_ * z;
    return out;
}

RoughPath FbmSampler::lift(std::uint64_t seed, double gamma) const {
    const Eigen::VectorXd fine = sample(seed);
    Eigen::MatrixXd fine_path = fine;
    Eigen::MatrixXd nodes(target_.nodes(), 1);
    for (int k = 0; k < target_.nodes(); ++k) nodes(k, 0) = fine(k * refine_);
    return RoughPath(gamma, target_, std::move(nodes), coarsen_piecewise_linear(fine_path, target_.cells(), refine_),
                     true);
}

RoughPath lift_fbm(std::uint64_t seed, double hurst, const Grid& grid, int dyadic_level, double gamma) {
    if (gamma < 0.0) gamma = std::max(hurst - 0.02, 0.5 * (1.0 / 3.0 + hurst));
    return FbmSampler(hurst, grid, dyadic_level).lift(seed, gamma);
}

RoughPath shift(const RoughPath& rp, double tau) {
    const Grid& g = rp.grid();
    const int origin = g.index_of(tau);
    Grid shifted(g.t0() - tau, g.t1() - tau, g.cells());
    Eigen::MatrixXd path = rp.path().rowwise() - rp.path().row(origin);
    return RoughPath(rp.gamma(), shifted, std::move(path), rp.cell_second_levels(), rp.geometric());
}

RoughPath restrict(const RoughPath& rp, int k0, int k1) {
    Grid sub = rp.grid().window(k0, k1);
    Eigen::MatrixXd path = rp.path().middleRows(k0, k1 - k0 + 1);
    std::vector<Eigen::MatrixXd> cells(rp.cell_second_levels().begin() + k0, rp.cell_second_levels().begin() + k1);
    return RoughPath(rp.gamma(), sub, std::move(path), std::move(cells), rp.geometric());
}

RoughPath glue(const RoughPath& first, const RoughPath& second) {
    const Grid& a = first.grid();
    const Grid& b = second.grid();
    if (std::abs(a.step() - b.step()) > 1e-12 * std::max(1.0, a.step())) {
        throw std::invalid_argument("glue: step sizes differ");
    }
    if (first.dim() != second.dim()) throw std::invalid_argument("glue: dimensions differ");
    const int n = a.cells() + b.cells();
    Grid joined(a.t0(), a.t0() + n * a.step(), n);
    Eigen::MatrixXd path(n + 1, first.dim());
    path.topRows(a.nodes()) = first.path();
    const Eigen::RowVectorXd offset = first.path().row(a.cells()) - second.path().row(0);
    path.bottomRows(b.cells()) = second.path().bottomRows(b.cells()).rowwise() + offset;
    std::vector<Eigen::MatrixXd> cells = first.cell_second_levels();
    cells.insert(cells.end(), second.cell_second_levels().begin(), second.cell_second_levels().end());
    return RoughPath(first.gamma(), joined, std::move(path), std::move(cells),
                     first.geometric() && second.geometric());
}

HolderNorms holder_norms(const RoughPath& rp) {
    const Grid& g = rp.grid();
    const SecondLevelTable table(rp);
    HolderNorms out{0.0, 0.0};
    for (int s = 0; s < g.nodes(); ++s) {
        for (int t = s + 1; t < g.nodes(); ++t) {
            const double dt = g.node(t) - g.node(s);
            out.first = std::max(out.first, rp.increment(s, t).norm() / std::pow(dt, rp.gamma()));
            out.second = std::max(out.second, table.at(s, t).norm() / std::pow(dt, 2.0 * rp.gamma()));
        }
    }
    return out;
}

double distance(const RoughPath& a, const RoughPath& b) {
    if (!a.grid().same_as(b.grid()) || a.dim() != b.dim()) {
        throw std::invalid_argument("distance: rough paths live on different grids");
    }
    if (std::abs(a.gamma() - b.gamma()) > 1e-15) throw std::invalid_argument("distance: gamma differs");
    const Grid& g = a.grid();
    const SecondLevelTable ta(a);
    const SecondLevelTable tb(b);
    double first = 0.0;
    double second = 0.0;
    for (int s = 0; s < g.nodes(); ++s) {
        for (int t = s + 1; t < g.nodes(); ++t) {
            const double dt = g.node(t) - g.node(s);
            first = std::max(first, (a.increment(s, t) - b.increment(s, t)).norm() / std::pow(dt, a.gamma()));
            second = std::max(second, (ta.at(s, t) - tb.at(s, t)).norm() / std::pow(dt, 2.0 * a.gamma()));
        }
    }
    return first + second;
}

RoughPathReport validate(const RoughPath& rp) {
    RoughPathReport rep;
    const Grid& g = rp.grid();
    const int d = rp.dim();
    const int nodes = g.nodes();
    const SecondLevelTable table(rp);
    const Eigen::MatrixXd& w = rp.path();

    for (int s = 0; s < nodes; ++s) {
        for (int t = s + 2; t < nodes; ++t) {
            const Eigen::MatrixXd& wst = table.at(s, t);
            for (int u = s + 1; u < t; ++u) {
                const Eigen::MatrixXd& wsu = table.at(s, u);
                const Eigen::MatrixXd& wut = table.at(u, t);
                double defect = 0.0;
                for (int b = 0; b < d; ++b) {
                    for (int a = 0; a < d; ++a) {
                        const double cross = (w(u, b) - w(s, b)) * (w(t, a) - w(u, a));
                        defect = std::max(defect, std::abs(wst(b, a) - wsu(b, a) - wut(b, a) - cross));
                    }
                }
                if (defect > rep.chen_defect_max) {
                    rep.chen_defect_max = defect;
                    rep.chen_defect_node = u;
                }
            }
        }
    }

    if (rp.geometric()) {
        for (int k = 0; k < g.cells(); ++k) {
            const Eigen::VectorXd dw = rp.increment(k, k + 1);
            const Eigen::MatrixXd& c = rp.cell_second_level(k);
            const Eigen::MatrixXd sym = 0.5 * (c + c.transpose()) - 0.5 * dw * dw.transpose();
            const double defect = sym.cwiseAbs().maxCoeff();
            if (defect > rep.geometry_defect_max) {
                rep.geometry_defect_max = defect;
                rep.geometry_defect_cell = k;
            }
        }
    }

    const HolderNorms norms = holder_norms(rp);
    rep.holder_norm_1 = norms.first;
    rep.holder_norm_2 = norms.second;
    return rep;
}

std::string to_csv(const RoughPath& rp) {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    for (int a = 0; a < rp.dim(); ++a) os << ",W" << (a + 1);
    os << "\n";
    for (int k = 0; k < rp.grid().nodes(); ++k) {
        os << rp.grid().node(k);
        for (int a = 0; a < rp.dim(); ++a) os << "," << rp.path()(k, a);
        os << "\n";
    }
    return os.str();
}

}  // namespace rcm

namespace rcm {

RoughPath coarsen(const RoughPath& rp, int factor) {
    const Grid& g = rp.grid();
    if (factor < 1 || g.cells() % factor != 0) throw std::invalid_argument("coarsen: factor must divide the cell count");
    const int cells = g.cells() / factor;
    Eigen::MatrixXd path(cells + 1, rp.dim());
    std::vector<Eigen::MatrixXd> second;
    second.reserve(cells);
    for (int k = 0; k <= cells; ++k) path.row(k) = rp.path().row(k * factor);
    for (int k = 0; k < cells; ++k) second.push_back(rp.second_level(k * factor, (k + 1) * factor));
    return RoughPath(rp.gamma(), Grid(g.t0(), g.t1(), cells), std::move(path), std::move(second), rp.geometric());
}

}  // namespace rcm
