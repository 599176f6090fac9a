#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rcm/grid.hpp"

namespace rcm {

/// Grid-sampled gamma-Hölder rough path (W, 𝕎) in R^d.
///
/// The first level is stored at every node. The second level is stored only
/// for adjacent node pairs; 𝕎 over any other pair is reconstructed with Chen's
/// relation 𝕎_{s,t} = 𝕎_{s,u} + 𝕎_{u,t} + W_{s,u} ⊗ W_{u,t}, so the Chen
/// identity holds by construction. Entry (b, a) of a second-level matrix is
/// the iterated integral ∫ W^b_{s,r} dW^a_r.
class RoughPath {
public:
    RoughPath(double gamma, Grid grid, Eigen::MatrixXd path, std::vector<Eigen::MatrixXd> cell_second_level,
              bool geometric);

    double gamma() const { return gamma_; }
    const Grid& grid() const { return grid_; }
    int dim() const { return static_cast<int>(path_.cols()); }
    bool geometric() const { return geometric_; }

    /// Node samples, one row per node.
    const Eigen::MatrixXd& path() const { return path_; }
    Eigen::VectorXd value(int k) const { return path_.row(k).transpose(); }
    Eigen::VectorXd increment(int s, int t) const { return (path_.row(t) - path_.row(s)).transpose(); }

    const Eigen::MatrixXd& cell_second_level(int k) const { return cells_[k]; }
    const std::vector<Eigen::MatrixXd>& cell_second_levels() const { return cells_; }

    /// 𝕎_{s,t} for nodes s <= t, composed from cells.
    Eigen::MatrixXd second_level(int s, int t) const;

private:
    double gamma_;
    Grid grid_;
    Eigen::MatrixXd path_;
    std::vector<Eigen::MatrixXd> cells_;
    bool geometric_;
};

using RoughPathPtr = std::shared_ptr<const RoughPath>;

/// Table of second-level values over all node pairs, built in O(n² d²).
class SecondLevelTable {
public:
    explicit SecondLevelTable(const RoughPath& rp);
    const Eigen::MatrixXd& at(int s, int t) const { return table_[static_cast<std::size_t>(s) * nodes_ + t]; }

private:
    int nodes_;
    std::vector<Eigen::MatrixXd> table_;
};

void check_gamma(double gamma);

/// Lift of a finely sampled path. `samples` has m·n + 1 rows over the target
/// interval (m >= 8 sub-nodes per target cell); the second level of each cell
/// is the composite trapezoid rule for ∫ W_{s,r} ⊗ dW_r on the sub-nodes.
RoughPath lift_smooth(const Eigen::MatrixXd& samples, const Grid& target, double gamma);

/// Stratonovich (geometric) lift of a Brownian sample path. For d = 1 the
/// second level is ½ W_{s,t}²; for d > 1 the path is sampled on a grid refined
/// by `refinement`, lifted piecewise linearly and coarsened via Chen.
RoughPath lift_brownian(std::uint64_t seed, const Grid& grid, int d, int refinement = 16, double gamma = 0.45);

/// Samples fractional Brownian motion with exact covariance at the nodes of a
/// fixed time set via a Cholesky factor that is computed once.
class FbmSampler {
public:
    FbmSampler(double hurst, const Grid& grid, int dyadic_level);

    double hurst() const { return hurst_; }
    const Grid& fine_grid() const { return fine_; }
    /// Node samples on the fine dyadic grid (first entry 0).
    Eigen::VectorXd sample(std::uint64_t seed) const;
    /// Piecewise-linear lift on the fine grid coarsened to the target grid.
    RoughPath lift(std::uint64_t seed, double gamma) const;

private:
    double hurst_;
    Grid target_;
    Grid fine_;
    int refine_;
    Eigen::MatrixXd chol_;
};

/// Geometric lift of one-dimensional fBm with Hurst index in (1/3, 1/2].
RoughPath lift_fbm(std::uint64_t seed, double hurst, const Grid& grid, int dyadic_level, double gamma = -1.0);

/// Time shift Θ_τ: the result lives on [t0 - τ, t1 - τ] with values
/// W_{t+τ} - W_τ and cell second levels relabelled. τ must be a grid node.
RoughPath shift(const RoughPath& rp, double tau);

/// Restriction to the nodes [k0, k1] (values kept, not re-based).
RoughPath restrict(const RoughPath& rp, int k0, int k1);

/// Same path on the grid with `factor` times fewer cells; cell second levels are
/// composed with Chen's relation, so the coarse path is the exact restriction to
/// every factor-th node.
RoughPath coarsen(const RoughPath& rp, int factor);

/// Concatenation of two paths with equal step sizes: the second path's
/// increments continue from the first path's terminal value.
RoughPath glue(const RoughPath& first, const RoughPath& second);

/// Inhomogeneous rough path distance over node pairs:
/// sup |ΔW|/|t-s|^γ + sup |Δ𝕎|/|t-s|^{2γ}.
double distance(const RoughPath& a, const RoughPath& b);

struct HolderNorms {
    double first;   ///< sup over node pairs of |W_{s,t}| / |t-s|^γ
    double second;  ///< sup over node pairs of |𝕎_{s,t}| / |t-s|^{2γ}
};

HolderNorms holder_norms(const RoughPath& rp);

struct RoughPathReport {
    double chen_defect_max = 0.0;
    int chen_defect_node = -1;  ///< middle node u of the worst triple
    double geometry_defect_max = 0.0;
    int geometry_defect_cell = -1;
    double holder_norm_1 = 0.0;
    double holder_norm_2 = 0.0;
};

/// Chen defects over all node triples s < u < t, measured against the
/// second level obtained by summing cell values with their W ⊗ W cross terms
/// in a different association order, plus cellwise geometric symmetry.
RoughPathReport validate(const RoughPath& rp);

/// Node samples as CSV (t, W_1, ..., W_d).
std::string to_csv(const RoughPath& rp);

}  // namespace rcm
