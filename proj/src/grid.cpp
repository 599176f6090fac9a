#include "rcm/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rcm {

Grid::Grid(double t0, double t1, int n) : t0_(t0), t1_(t1), n_(n) {
    if (n < 1) throw std::invalid_argument("Grid: cell count must be >= 1");
    if (!(t1 > t0)) throw std::invalid_argument("Grid: require t1 > t0");
}

double Grid::node(int k) const {
    if (k == n_) return t1_;
    return t0_ + k * step();
}

int Grid::index_of(double t) const {
    const double h = step();
    const double pos = (t - t0_) / h;
    const double k = std::round(pos);
    if (std::abs(pos - k) > 1e-9 * std::max(1.0, std::abs(pos)) || k < 0 || k > n_) {
        throw std::invalid_argument("Grid: time " + std::to_string(t) + " is not a grid node");
    }
    return static_cast<int>(k);
}

Grid Grid::window(int k0, int k1) const {
    if (k0 < 0 || k1 > n_ || k0 >= k1) throw std::invalid_argument("Grid::window: invalid node range");
    return Grid(node(k0), node(k1), k1 - k0);
}

bool Grid::same_as(const Grid& other, double tol) const {
    return n_ == other.n_ && std::abs(t0_ - other.t0_) <= tol && std::abs(t1_ - other.t1_) <= tol;
}

}  // namespace rcm
