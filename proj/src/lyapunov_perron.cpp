#include <cmath>
#include <limits>
#include <string>

#include "rcm/manifold.hpp"
#include "rcm/semigroup.hpp"

namespace rcm {

namespace {

struct Fields {
    NumericField fc, fs;
    std::vector<NumericField> gc, gs;
};

struct State {
    Eigen::VectorXd x, y;
    Eigen::MatrixXd xp, yp;  // nodes × d
};

class LPMap {
public:
    LPMap(const SystemSpec& sys, double xi, RoughPathPtr rp, const LPConfig& cfg)
        : rp_(std::move(rp)), xi_(xi), cfg_(cfg) {
        const Grid& g = rp_->grid();
        const double len = g.length();
        blocks_ = static_cast<int>(std::lround(len));
        if (std::abs(len - blocks_) > 1e-9 || blocks_ < 2) {
            throw std::invalid_argument("lyapunov_perron_hc: window must span an integer number (>= 2) of units");
        }
        if (g.cells() % blocks_ != 0) throw std::invalid_argument("lyapunov_perron_hc: unit blocks must align with cells");
        per_block_ = g.cells() / blocks_;
        d_ = rp_->dim();
        if (static_cast<int>(sys.Gc.size()) != d_ || static_cast<int>(sys.Gs.size()) != d_) {
            throw std::invalid_argument("lyapunov_perron_hc: rough path dimension differs from noise_dim");
        }
        ac_ = to_double(sys.Ac);
        as_ = to_double(sys.As);
        beta_ = -as_;
        if (!(beta_ > 0.0)) throw std::domain_error("lyapunov_perron_hc: stable block is not stable");
        eta_ = cfg.eta == 0.0 ? -0.5 * beta_ : cfg.eta;
        if (!(eta_ > -beta_ && eta_ < 0.0)) throw std::invalid_argument("lyapunov_perron_hc: eta must lie in (-β, 0)");
        if (!(cfg.cutoff_r > 0.0)) throw std::invalid_argument("lyapunov_perron_hc: cutoff R must be positive");

        f_.fc = NumericField(sys.Fc);
        f_.fs = NumericField(sys.Fs);
        for (int a = 0; a < d_; ++a) {
            f_.gc.emplace_back(sys.Gc[a]);
            f_.gs.emplace_back(sys.Gs[a]);
        }
        Eigen::MatrixXd m(1, 1);
        m(0, 0) = ac_;
        const CellWeights wc(m, g.step());
        m(0, 0) = as_;
        const CellWeights ws(m, g.step());
        h_ = g.step();
        ec_ = wc.E(0, 0);
        p1c_ = wc.P1(0, 0);
        p2c_ = wc.P2(0, 0);
        es_ = ws.E(0, 0);
        p1s_ = ws.P1(0, 0);
        p2s_ = ws.P2(0, 0);
    }

    int nodes() const { return rp_->grid().nodes(); }
    int blocks() const { return blocks_; }
    double beta() const { return beta_; }
    double window() const { return blocks_; }

    State initial() const {
        const Grid& g = rp_->grid();
        State s;
        s.x.resize(nodes());
        for (int k = 0; k < nodes(); ++k) s.x(k) = std::exp(ac_ * (g.node(k) - g.t1())) * xi_;
        s.y = Eigen::VectorXd::Zero(nodes());
        s.xp = Eigen::MatrixXd::Zero(nodes(), d_);
        s.yp = Eigen::MatrixXd::Zero(nodes(), d_);
        return s;
    }

    ControlledPath as_path(const State& s) const {
        Eigen::MatrixXd y(nodes(), 2);
        y.col(0) = s.x;
        y.col(1) = s.y;
        Eigen::MatrixXd yp(nodes(), 2 * d_);
        yp.leftCols(d_) = s.xp;
        yp.rightCols(d_) = s.yp;
        return ControlledPath(rp_, std::move(y), std::move(yp));
    }

    std::vector<double> block_norms(const State& s) const {
        const ControlledPath cp = as_path(s);
        std::vector<double> out(blocks_);
        for (int b = 0; b < blocks_; ++b) out[b] = norm_d2g(cp, b * per_block_, (b + 1) * per_block_).total;
        return out;
    }

    /// Weighted distance sup_b e^{-η t_b} ‖U_b - V_b‖ over unit blocks.
    double distance(const State& u, const State& v) const {
        State diff{u.x - v.x, u.y - v.y, u.xp - v.xp, u.yp - v.yp};
        const std::vector<double> norms = block_norms(diff);
        const double t0 = rp_->grid().t0();
        double out = 0.0;
        for (int b = 0; b < blocks_; ++b) out = std::max(out, std::exp(-eta_ * (t0 + b)) * norms[b]);
        return out;
    }

    State apply(const State& u, int* active_blocks = nullptr) const {
        const int n = nodes();
        const std::vector<double> norms = block_norms(u);
        std::vector<double> scale(blocks_);
        int active = 0;
        for (int b = 0; b < blocks_; ++b) {
            scale[b] = cutoff_ramp(norms[b] / cfg_.cutoff_r);
            if (norms[b] > 0.5 * cfg_.cutoff_r) ++active;
        }
        if (active_blocks) *active_blocks = active;

        // Cut-off fields at node k as seen from cell `cell` (block scale of that cell).
        auto fields_at = [&](int k, int cell, double& fc, double& fs, Eigen::VectorXd& gc, Eigen::VectorXd& gs,
                             Eigen::MatrixXd& dgc, Eigen::MatrixXd& dgs) {
            const double s = scale[std::min(cell / per_block_, blocks_ - 1)];
            const double x = s * u.x(k);
            const double y = s * u.y(k);
            fc = f_.fc.eval(x, y);
            fs = f_.fs.eval(x, y);
            gc.resize(d_);
            gs.resize(d_);
            dgc.resize(d_, d_);
            dgs.resize(d_, d_);
            for (int a = 0; a < d_; ++a) {
                double v, vx, vy;
                f_.gc[a].eval(x, y, v, vx, vy);
                gc(a) = v;
                for (int b = 0; b < d_; ++b) dgc(a, b) = s * (vx * u.xp(k, b) + vy * u.yp(k, b));
                f_.gs[a].eval(x, y, v, vx, vy);
                gs(a) = v;
                for (int b = 0; b < d_; ++b) dgs(a, b) = s * (vx * u.xp(k, b) + vy * u.yp(k, b));
            }
        };

        const Eigen::MatrixXd& w = rp_->path();
        const int cells = n - 1;
        Eigen::VectorXd cell_c(cells), cell_s(cells);
        State out;
        out.xp.resize(n, d_);
        out.yp.resize(n, d_);
        double fc0, fs0, fc1, fs1;
        Eigen::VectorXd gc0, gs0, gc1, gs1;
        Eigen::MatrixXd dgc0, dgs0, dgc1, dgs1;
        for (int k = 0; k < cells; ++k) {
            fields_at(k, k, fc0, fs0, gc0, gs0, dgc0, dgs0);
            fields_at(k + 1, k, fc1, fs1, gc1, gs1, dgc1, dgs1);
            const Eigen::MatrixXd& ww = rp_->cell_second_level(k);
            double g0c = 0.0, g1c = 0.0, g0s = 0.0, g1s = 0.0;
            for (int a = 0; a < d_; ++a) {
                const double dw = w(k + 1, a) - w(k, a);
                g0c += gc0(a) * dw;
                g0s += gs0(a) * dw;
                for (int b = 0; b < d_; ++b) {
                    g1c += 2.0 * dgc0(a, b) * ww(b, a);
                    g1s += 2.0 * dgs0(a, b) * ww(b, a);
                }
            }
            cell_c(k) = h_ * (p1c_ * fc0 + p2c_ * (fc1 - fc0)) + p1c_ * g0c + p2c_ * g1c;
            cell_s(k) = h_ * (p1s_ * fs0 + p2s_ * (fs1 - fs0)) + p1s_ * g0s + p2s_ * g1s;
            out.xp.row(k) = gc0.transpose();
            out.yp.row(k) = gs0.transpose();
            if (k == cells - 1) {
                out.xp.row(k + 1) = gc1.transpose();
                out.yp.row(k + 1) = gs1.transpose();
            }
        }

        out.y.resize(n);
        out.y(0) = 0.0;
        for (int k = 0; k < cells; ++k) out.y(k + 1) = es_ * out.y(k) + cell_s(k);
        out.x.resize(n);
        out.x(n - 1) = xi_;
        for (int k = cells - 1; k >= 0; --k) out.x(k) = (out.x(k + 1) - cell_c(k)) / ec_;
        return out;
    }

private:
    RoughPathPtr rp_;
    double xi_;
    LPConfig cfg_;
    Fields f_;
    int blocks_ = 0;
    int per_block_ = 0;
    int d_ = 1;
    double ac_ = 0.0, as_ = -1.0, beta_ = 1.0, eta_ = -0.5;
    double h_ = 0.0, ec_ = 1.0, p1c_ = 1.0, p2c_ = 0.5, es_ = 1.0, p1s_ = 1.0, p2s_ = 0.5;
};

}  // namespace

LPResult lyapunov_perron_hc(const SystemSpec& sys, double xi, RoughPathPtr rp, const LPConfig& cfg) {
    const LPMap map(sys, xi, std::move(rp), cfg);
    LPResult res;
    res.tail_bound = std::exp(-map.beta() * map.window());

    State u = map.initial();
    double prev = -1.0;
    int streak = 0;
    bool converged = false;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        State next = map.apply(u);
        const double dist = map.distance(next, u);
        res.distances.push_back(dist);
        res.iterations = it;
        u = std::move(next);

        double scale = 0.0;
        for (double nb : map.block_norms(u)) scale = std::max(scale, nb);
        const double floor = 1e3 * std::numeric_limits<double>::epsilon() * scale;
        if (dist < cfg.fp_tol) {
            converged = true;
            break;
        }
        if (dist <= floor) {
            converged = true;
            res.rounding_floor = true;
            break;
        }
        if (prev > 0.0) {
            const double ratio = dist / prev;
            res.contraction_rate = std::max(res.contraction_rate, ratio);
            streak = ratio >= 1.0 ? streak + 1 : 0;
            if (streak >= 5) {
                throw NonContraction("Lyapunov-Perron iteration is not contracting at xi = " + std::to_string(xi) +
                                     " (5 consecutive distance ratios >= 1); shrink the cut-off radius R or |xi|");
            }
        }
        prev = dist;
    }
    if (!converged) {
        throw NonContraction("Lyapunov-Perron iteration did not reach the tolerance within " +
                             std::to_string(cfg.max_iters) + " iterations at xi = " + std::to_string(xi));
    }
    int active = 0;
    const State once_more = map.apply(u, &active);
    res.fixed_point_defect = map.distance(once_more, u);
    res.cutoff_active_blocks = active;
    res.hc = u.y(u.y.size() - 1);
    res.x.assign(u.x.data(), u.x.data() + u.x.size());
    res.y.assign(u.y.data(), u.y.data() + u.y.size());
    return res;
}

}  // namespace rcm
