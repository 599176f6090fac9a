#pragma once

#include <cstddef>

namespace rcm {

/// Uniform time grid t0 + k·h, k = 0..n, with h = (t1 - t0) / n.
class Grid {
public:
    Grid() = default;
    Grid(double t0, double t1, int n);

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    int cells() const { return n_; }
    int nodes() const { return n_ + 1; }
    double step() const { return (t1_ - t0_) / n_; }
    double node(int k) const;
    double length() const { return t1_ - t0_; }

    /// Index of the node closest to t; throws if t is not on the grid (to 1e-9 relative).
    int index_of(double t) const;

    /// Grid restricted to nodes [k0, k1].
    Grid window(int k0, int k1) const;

    bool same_as(const Grid& other, double tol = 1e-12) const;

private:
    double t0_ = 0.0;
    double t1_ = 1.0;
    int n_ = 1;
};

}  // namespace rcm
