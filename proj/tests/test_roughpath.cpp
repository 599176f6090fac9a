#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rcm/rough_path.hpp"
#include "test_util.hpp"

using namespace rcm;

namespace {

Eigen::VectorXd circle(double t) {
    Eigen::VectorXd v(2);
    v << std::cos(2 * M_PI * t), std::sin(2 * M_PI * t);
    return v;
}

// Adaptive Gauss-Kronrod value of ∫_s^t (W^b_r - W^b_s) dW^a_r for the unit circle.
double circle_area(double s, double t, int b, int a) {
    auto coord = [](double r, int i) { return i == 0 ? std::cos(2 * M_PI * r) : std::sin(2 * M_PI * r); };
    auto integrand = [&](double r) {
        const double dw = a == 0 ? -2 * M_PI * std::sin(2 * M_PI * r) : 2 * M_PI * std::cos(2 * M_PI * r);
        return (coord(r, b) - coord(s, b)) * dw;
    };
    // A few bisections suffice on cells of length <= 1/16; near-zero values make a relative tolerance unreachable.
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, s, t, 3, 1e-15);
}

double circle_lift_error(int n, int sub) {
    const RoughPath rp = lift_smooth(testutil::sample(circle, 0.0, 1.0, sub * n, 2), Grid(0, 1, n), 0.5);
    double err = 0.0;
    for (int k = 0; k < n; ++k) {
        const double s = rp.grid().node(k), t = rp.grid().node(k + 1);
        for (int b = 0; b < 2; ++b)
            for (int a = 0; a < 2; ++a)
                err = std::max(err, std::abs(rp.cell_second_level(k)(b, a) - circle_area(s, t, b, a)));
    }
    return err;
}

// Asymptotic two-sample Kolmogorov-Smirnov p-value.
double ks_pvalue(std::vector<double> x, std::vector<double> y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(double(i) / x.size() - double(j) / y.size()));
    }
    const double ne = double(x.size()) * y.size() / (x.size() + y.size());
    const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) q += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    return std::clamp(q, 0.0, 1.0);
}

}  // namespace

TEST_SUITE("roughpath") {
    TEST_CASE("grid basics and errors") {
        Grid g(-2.0, 0.0, 8);
        CHECK(g.step() == doctest::Approx(0.25));
        CHECK(g.node(8) == 0.0);
        CHECK(g.index_of(-1.0) == 4);
        CHECK_THROWS(g.index_of(-0.9));
        CHECK_THROWS(Grid(0, 1, 0));
        CHECK_THROWS(Grid(1, 0, 4));
    }

    TEST_CASE("lift_smooth of the linear path has (t-s)^2/2 on every cell") {
        auto rp = testutil::linear_path(4);
        for (int k = 0; k < 4; ++k) CHECK(rp->cell_second_level(k)(0, 0) == doctest::Approx(1.0 / 32).epsilon(1e-14));
        CHECK(rp->geometric());
    }

    TEST_CASE("lift_smooth of the zero path is zero") {
        const RoughPath rp = lift_smooth(Eigen::MatrixXd::Zero(33, 2), Grid(0, 1, 4), 0.4);
        for (int k = 0; k < 4; ++k) CHECK(rp.cell_second_level(k).norm() == 0.0);
        CHECK(rp.path().norm() == 0.0);
    }

    TEST_CASE("lift_smooth rejects bad gamma and coarse samples") {
        CHECK_THROWS(lift_smooth(Eigen::MatrixXd::Zero(33, 1), Grid(0, 1, 4), 0.3));
        CHECK_THROWS(lift_smooth(Eigen::MatrixXd::Zero(17, 1), Grid(0, 1, 4), 0.4));
        CHECK_THROWS(lift_smooth(Eigen::MatrixXd::Zero(30, 1), Grid(0, 1, 4), 0.4));
    }

    TEST_CASE("circle lift matches adaptive quadrature of the iterated integral") {
        CHECK(circle_lift_error(64, 256) <= 1e-8);
    }

    TEST_CASE("circle lift converges at order two under target refinement") {
        const double e16 = circle_lift_error(16, 8);
        const double e32 = circle_lift_error(32, 8);
        const double e64 = circle_lift_error(64, 8);
        CHECK(std::log2(e16 / e32) >= 1.8);
        CHECK(std::log2(e32 / e64) >= 1.8);
    }

    TEST_CASE("Brownian lift in one dimension is exactly symmetric") {
        auto rp = testutil::brownian(1, 256);
        const RoughPathReport rep = validate(*rp);
        CHECK(rep.geometry_defect_max <= 1e-15);
        CHECK(rep.chen_defect_max <= 1e-10);
        const double w = rp->increment(0, 256)(0);
        CHECK(rp->second_level(0, 256)(0, 0) == doctest::Approx(0.5 * w * w).epsilon(1e-12));
    }

    TEST_CASE("Brownian terminal variance lies in the Monte-Carlo band") {
        const int seeds = 10000;
        std::vector<double> w1;
        for (int s = 1; s <= seeds; ++s) w1.push_back(lift_brownian(s, Grid(0, 1, 256), 1).path()(256, 0));
        const double mean = std::accumulate(w1.begin(), w1.end(), 0.0) / seeds;
        double var = 0.0;
        for (double v : w1) var += (v - mean) * (v - mean);
        var /= seeds - 1;
        CHECK(std::abs(var - 1.0) <= 3.0 * std::sqrt(2.0 / (seeds - 1)));
    }

    TEST_CASE("two-dimensional Levy area has mean zero") {
        const int seeds = 10000;
        std::vector<double> area;
        for (int s = 1; s <= seeds; ++s) {
            const RoughPath rp = lift_brownian(s, Grid(0, 1, 16), 2, 16);
            const Eigen::MatrixXd ww = rp.second_level(0, 16);
            area.push_back(0.5 * (ww(0, 1) - ww(1, 0)));
        }
        const double mean = std::accumulate(area.begin(), area.end(), 0.0) / seeds;
        double var = 0.0;
        for (double v : area) var += (v - mean) * (v - mean);
        var /= seeds - 1;
        CHECK(std::abs(mean) <= 3.0 * std::sqrt(var / seeds));
    }

    TEST_CASE("multi-dimensional Brownian lift is geometric and deterministic") {
        const RoughPath a = lift_brownian(7, Grid(0, 1, 64), 3, 8);
        const RoughPath b = lift_brownian(7, Grid(0, 1, 64), 3, 8);
        CHECK(a.path() == b.path());
        const RoughPathReport rep = validate(a);
        CHECK(rep.geometry_defect_max <= 1e-10);
        CHECK(rep.chen_defect_max <= 1e-10);
    }

    TEST_CASE("fBm with H = 1/2 has the Brownian terminal law") {
        const FbmSampler fbm(0.5, Grid(0, 1, 16), 2);
        std::vector<double> x, y;
        for (int s = 1; s <= 1000; ++s) {
            x.push_back(fbm.lift(s, 0.45).path()(16, 0));
            y.push_back(lift_brownian(100000 + s, Grid(0, 1, 16), 1).path()(16, 0));
        }
        CHECK(ks_pvalue(x, y) > 0.01);
    }

    TEST_CASE("fBm with H = 0.4 has unit terminal variance") {
        const FbmSampler fbm(0.4, Grid(0, 1, 128), 0);
        const int seeds = 4000;
        std::vector<double> sq;
        for (int s = 1; s <= seeds; ++s) {
            const double w = fbm.sample(s)(128);
            sq.push_back(w * w);
        }
        const double mean = std::accumulate(sq.begin(), sq.end(), 0.0) / seeds;
        double var = 0.0;
        for (double v : sq) var += (v - mean) * (v - mean);
        var /= seeds - 1;
        CHECK(std::abs(mean - 1.0) <= 3.0 * std::sqrt(var / seeds));
    }

    TEST_CASE("fBm lift is repeatable and geometric") {
        const RoughPath a = lift_fbm(3, 0.4, Grid(0, 1, 32), 2);
        const RoughPath b = lift_fbm(3, 0.4, Grid(0, 1, 32), 2);
        CHECK(a.path() == b.path());
        for (int k = 0; k < 32; ++k) CHECK(a.cell_second_level(k) == b.cell_second_level(k));
        CHECK(validate(a).geometry_defect_max <= 1e-10);
        CHECK(a.gamma() > 1.0 / 3.0);
        CHECK(a.gamma() < 0.4);
        CHECK_THROWS(lift_fbm(3, 0.3, Grid(0, 1, 32), 2));
    }

    TEST_CASE("shift: identity, flow property and cocycle identity") {
        auto rp = testutil::brownian(5, 64, -2.0, 2.0);
        // θ_0 re-bases the path at time 0.
        const RoughPath same = shift(*rp, 0.0);
        CHECK(same.path() == (rp->path().rowwise() - rp->path().row(32)).eval());
        const double h = rp->grid().step();
        const RoughPath ab = shift(shift(*rp, 3 * h), 5 * h);
        const RoughPath direct = shift(*rp, 8 * h);
        CHECK((ab.path() - direct.path()).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(ab.grid().same_as(direct.grid(), 1e-12));
        for (int k = 0; k < 64; ++k) CHECK(ab.cell_second_level(k) == direct.cell_second_level(k));

        const int s = 20;
        const RoughPath sh = shift(*rp, rp->grid().node(s));
        for (int k = 0; k + s < 65; ++k) CHECK(sh.path()(s + k, 0) == doctest::Approx(rp->increment(s, s + k)(0)).epsilon(1e-15));
        CHECK_THROWS(shift(*rp, 0.3 * h));
    }

    TEST_CASE("restrict, glue and coarsen preserve increments") {
        auto rp = testutil::brownian(9, 32, 0, 2, 2);
        const RoughPath left = restrict(*rp, 0, 16);
        const RoughPath right = restrict(*rp, 16, 32);
        const RoughPath joined = glue(left, right);
        CHECK((joined.path() - rp->path()).cwiseAbs().maxCoeff() <= 1e-14);
        const RoughPath coarse = coarsen(*rp, 4);
        CHECK((coarse.second_level(0, 8) - rp->second_level(0, 32)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(validate(coarse).geometry_defect_max <= 1e-10);
    }

    TEST_CASE("distance examples") {
        auto rp = testutil::linear_path(4);
        CHECK(distance(*rp, *rp) == 0.0);
        const RoughPath zero(0.5, Grid(0, 1, 4), Eigen::MatrixXd::Zero(5, 1),
                             std::vector<Eigen::MatrixXd>(4, Eigen::MatrixXd::Zero(1, 1)), true);
        CHECK(distance(zero, *rp) == doctest::Approx(1.5).epsilon(1e-12));
        auto b = testutil::brownian(2, 16, 0, 1);
        auto c = testutil::brownian(3, 16, 0, 1);
        CHECK(distance(*b, *c) == doctest::Approx(distance(*c, *b)).epsilon(1e-15));
        CHECK_THROWS(distance(*b, *rp));
    }

    TEST_CASE("validate: Chen holds, corruption is localized, Holder norm of W = t") {
        auto rp = testutil::brownian(11, 64, 0, 1, 2);
        CHECK(validate(*rp).chen_defect_max <= 1e-10);
        std::vector<Eigen::MatrixXd> cells = rp->cell_second_levels();
        cells[17](0, 0) += 0.25;
        const RoughPath bad(rp->gamma(), rp->grid(), rp->path(), cells, true);
        const RoughPathReport rep = validate(bad);
        CHECK(rep.geometry_defect_max > 0.1);
        CHECK(rep.geometry_defect_cell == 17);

        auto lin = testutil::linear_path(8, 0, 1, 0.45);
        CHECK(validate(*lin).holder_norm_1 == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("CSV export lists every node") {
        auto rp = testutil::linear_path(4);
        const std::string csv = to_csv(*rp);
        CHECK(csv.rfind("t,W1\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    }
}
