#include "rcm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rcm/io.hpp"
#include "rcm/manifold.hpp"

namespace rcm {

namespace {

using nlohmann::json;

struct Options {
    std::string spec;
    int q = 0;
    std::string seeds = "1";
    int grid_n = 64;
    double horizon = 0.0;
    int window = 12;
    double eta = 0.0;
    double cutoff_r = 0.5;
    std::string out_dir;
    std::string format = "text";
    double xi_min = 0.0125;
    double xi_max = 0.1;
    int points = 4;
};

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    const bool single_count = text.find_first_of(",-") == std::string::npos;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        try {
            if (dash != std::string::npos) {
                const std::uint64_t a = std::stoull(item.substr(0, dash));
                const std::uint64_t b = std::stoull(item.substr(dash + 1));
                if (b < a) throw std::invalid_argument("empty seed range");
                for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
            } else if (single_count) {
                const std::uint64_t count = std::stoull(item);
                for (std::uint64_t s = 1; s <= count; ++s) out.push_back(s);
            } else {
                out.push_back(std::stoull(item));
            }
        } catch (const std::logic_error&) {
            throw std::invalid_argument("--seeds: expected a count, a range a-b, or a list a,b,c");
        }
    }
    if (out.empty()) throw std::invalid_argument("--seeds: no seeds given");
    return out;
}

SystemSpec load_validated(const Options& o) {
    SystemSpec sys = load_system(o.spec);
    if (o.q > 0) sys.q = o.q;
    validate(sys);
    return sys;
}

std::string zero_line(const CoefficientSystem& cs) {
    std::string out;
    for (int k : cs.zero_atoms()) {
        if (!out.empty()) out += ", ";
        out += "α_" + std::to_string(k) + " ≡ 0";
    }
    return out.empty() ? "none" : out;
}

std::string residual_line(const CoefficientSystem& cs) {
    std::string out = "Mφ = " + cs.M.str() + "; M̃φ = ";
    if (cs.Mtilde.size() == 1) return out + cs.Mtilde[0].str();
    for (std::size_t a = 0; a < cs.Mtilde.size(); ++a) {
        if (a) out += ", ";
        out += "[channel " + std::to_string(a + 1) + "] " + cs.Mtilde[a].str();
    }
    return out;
}

int cmd_derive(const Options& o, std::ostream& out) {
    const SystemSpec sys = load_validated(o);
    const CoefficientSystem cs = propagate_zeros(derive_system(sys, sys.q));
    const Residuals r = residuals(cs);
    const json doc = to_json(cs);
    if (!o.out_dir.empty()) {
        std::filesystem::create_directories(o.out_dir);
        std::ofstream(std::filesystem::path(o.out_dir) / "coefficients.json") << doc.dump(2) << "\n";
    }
    if (o.format == "json") {
        out << doc.dump(2) << "\n";
        return 0;
    }
    out << "system: " << sys.name << " (q = " << cs.q << ", noise channels = " << cs.noise_dim << ")\n";
    out << "zero coefficients: " << zero_line(cs) << "\n";
    for (int i = 1; i <= cs.q; ++i)
        if (!cs.order(i).zero_flag) out << order_equation(cs, i) << "\n";
    out << "residuals: " << residual_line(cs) << "\n";
    out << "residual minimum degree: M " << r.min_degree_M << ", M̃ " << r.min_degree_Mtilde << "\n";
    const ReducedFlow rf = reduced_flow(sys, cs);
    out << "reduced flow: dx = (" << rf.drift.str() << ") dt";
    for (std::size_t a = 0; a < rf.diffusion.size(); ++a) {
        if (rf.diffusion[a].is_zero()) continue;
        out << " + (" << rf.diffusion[a].str() << ") ∘ dW";
        if (rf.diffusion.size() > 1) out << superscript(static_cast<int>(a) + 1);
    }
    out << "\n";
    return 0;
}

struct SeedRun {
    std::uint64_t seed = 0;
    std::vector<double> xi, phi, hc, happ, contraction, tail;
    std::vector<int> iterations;
    double slope_phi = std::nan("");
    double slope_happ = std::nan("");
    double ratio_spread = std::nan("");
    std::string error;
};

int leading_order(const SystemSpec& sys) {
    int l = -1;
    auto take = [&](const PolyField& f) {
        const int m = f.min_degree();
        if (m >= 0) l = l < 0 ? m : std::min(l, m);
    };
    take(sys.Fc);
    take(sys.Fs);
    for (const auto& g : sys.Gc) take(g);
    for (const auto& g : sys.Gs) take(g);
    return l;
}

SeedRun run_seed(const SystemSpec& sys, const CoefficientSystem& cs, const Options& o, std::uint64_t seed,
                 const std::vector<double>& xis) {
    SeedRun run;
    run.seed = seed;
    try {
        const double horizon = o.horizon > 0.0 ? o.horizon : o.window;
        const int span = static_cast<int>(std::ceil(std::max(horizon, static_cast<double>(o.window)) - 1e-9));
        const int cells = span * o.grid_n;
        const auto full = std::make_shared<const RoughPath>(
            lift_brownian(seed, Grid(-span, 0.0, cells), sys.noise_dim, 16, sys.gamma));
        const int h_cells = static_cast<int>(std::lround(horizon * o.grid_n));
        const int w_cells = o.window * o.grid_n;
        const auto rp_h = h_cells == cells ? full : std::make_shared<const RoughPath>(restrict(*full, cells - h_cells, cells));
        const auto rp_w = w_cells == cells ? full : std::make_shared<const RoughPath>(restrict(*full, cells - w_cells, cells));

        const HierarchyResult hier = solve_hierarchy(cs, rp_h);
        const ManifoldApproximation ma = make_approximation(hier, seed);
        const int l = leading_order(sys);
        LPConfig cfg;
        cfg.eta = o.eta;
        cfg.cutoff_r = o.cutoff_r;
        std::vector<double> err_phi, err_happ, ratios;
        for (double xi : xis) {
            cfg.fp_tol = 1e-6 * std::pow(std::abs(xi), cs.q + 1);
            const LPResult lp = lyapunov_perron_hc(sys, xi, rp_w, cfg);
            const double phi = evaluate_phi(ma, xi);
            const double happ = l > 0 ? leading_order_happ(sys, l, xi, rp_w) : 0.0;
            run.xi.push_back(xi);
            run.phi.push_back(phi);
            run.hc.push_back(lp.hc);
            run.happ.push_back(happ);
            run.contraction.push_back(lp.contraction_rate);
            run.tail.push_back(lp.tail_bound);
            run.iterations.push_back(lp.iterations);
            err_phi.push_back(std::abs(lp.hc - phi));
            err_happ.push_back(std::abs(lp.hc - happ));
            ratios.push_back(std::abs(lp.hc - phi) / std::pow(std::abs(xi), cs.q + 1));
        }
        if (xis.size() >= 4) {
            run.slope_phi = order_fit(xis, err_phi).slope;
            run.slope_happ = order_fit(xis, err_happ).slope;
        }
        const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
        if (*lo > 0.0) run.ratio_spread = *hi / *lo;
    } catch (const std::exception& e) {
        run.error = e.what();
    }
    return run;
}

json nan_safe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    const SystemSpec sys = load_validated(o);
    if (o.grid_n < 8) throw ValidationError("--grid-n must be at least 8");
    if (o.window < 2) throw ValidationError("--window must be at least 2");
    if (!(o.xi_min > 0.0 && o.xi_max >= o.xi_min)) throw ValidationError("need 0 < --xi-min <= --xi-max");
    if (o.points < 1) throw ValidationError("--points must be positive");
    const CoefficientSystem cs = propagate_zeros(derive_system(sys, sys.q));
    const Residuals res = residuals(cs);

    std::vector<double> xis;
    for (int k = 0; k < o.points; ++k) {
        const double t = o.points == 1 ? 0.0 : static_cast<double>(k) / (o.points - 1);
        xis.push_back(o.xi_max * std::pow(o.xi_min / o.xi_max, t));
    }
    for (double xi : xis) {
        if (xi > 0.5 * o.cutoff_r) {
            err << "warning: xi = " << xi << " exceeds R/2 = " << 0.5 * o.cutoff_r
                << "; the cut-off may alter the fields along the window\n";
        }
    }

    std::vector<std::uint64_t> seeds = parse_seeds(o.seeds);
    if (sys.noise_free()) seeds.resize(1);

    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("RM_THREADS")) {
        try {
            threads = std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw ValidationError("RM_THREADS must be a positive integer");
        }
    }
    threads = std::min<int>(threads, static_cast<int>(seeds.size()));

    std::vector<SeedRun> runs(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k = next++; k < seeds.size(); k = next++) runs[k] = run_seed(sys, cs, o, seeds[k], xis);
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    json report = json::array();
    std::ostringstream csv;
    csv << std::setprecision(17) << "seed,xi,phi,hc,happ,abs_err_phi,abs_err_happ\n";
    std::vector<double> slopes;
    bool failed = false;
    for (const SeedRun& r : runs) {
        if (!r.error.empty()) {
            err << "seed " << r.seed << ": " << r.error << "\n";
            failed = true;
            report.push_back({{"seed", r.seed}, {"error", r.error}});
            continue;
        }
        for (std::size_t k = 0; k < r.xi.size(); ++k) {
            csv << r.seed << "," << r.xi[k] << "," << r.phi[k] << "," << r.hc[k] << "," << r.happ[k] << ","
                << std::abs(r.hc[k] - r.phi[k]) << "," << std::abs(r.hc[k] - r.happ[k]) << "\n";
        }
        if (std::isfinite(r.slope_phi)) slopes.push_back(r.slope_phi);
        report.push_back({{"seed", r.seed},
                          {"xi_sweep", r.xi},
                          {"phi_values", r.phi},
                          {"hc_values", r.hc},
                          {"happ_values", r.happ},
                          {"residual_min_degree", {{"M", res.min_degree_M}, {"Mtilde", res.min_degree_Mtilde}}},
                          {"order_slopes", {{"phi", nan_safe(r.slope_phi)}, {"happ", nan_safe(r.slope_happ)}}},
                          {"error_ratio_spread", nan_safe(r.ratio_spread)},
                          {"lp_iterations", r.iterations},
                          {"contraction_rates", r.contraction},
                          {"tail_bounds", r.tail}});
    }

    double median = std::nan("");
    if (!slopes.empty()) {
        std::vector<double> s = slopes;
        std::sort(s.begin(), s.end());
        median = s.size() % 2 ? s[s.size() / 2] : 0.5 * (s[s.size() / 2 - 1] + s[s.size() / 2]);
    }
    const double threshold = cs.q + 0.5;
    const bool pass = !failed && std::isfinite(median) && median >= threshold;

    if (!o.out_dir.empty()) {
        std::filesystem::create_directories(o.out_dir);
        std::ofstream(std::filesystem::path(o.out_dir) / "report.json") << report.dump(2) << "\n";
        std::ofstream(std::filesystem::path(o.out_dir) / "sweep.csv") << csv.str();
    }
    if (o.format == "json") {
        out << report.dump(2) << "\n";
    } else if (o.format == "csv") {
        out << csv.str();
    } else {
        out << "system: " << sys.name << " (q = " << cs.q << ", seeds = " << seeds.size() << ")\n";
        for (const SeedRun& r : runs) {
            if (!r.error.empty()) continue;
            out << "seed " << r.seed << ": slope " << std::fixed << std::setprecision(3) << r.slope_phi
                << ", h^app slope " << r.slope_happ << ", max contraction "
                << *std::max_element(r.contraction.begin(), r.contraction.end()) << "\n"
                << std::defaultfloat;
        }
        out << "median slope " << median << " (threshold " << threshold << "): " << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? 0 : 1;
}

void add_common(CLI::App* app, Options& o) {
    app->add_option("--spec", o.spec, "system description (JSON)")->required()->check(CLI::ExistingFile);
    app->add_option("--q", o.q, "Taylor order (overrides the file)");
    app->add_option("--out-dir", o.out_dir, "directory for output files");
    app->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"text", "json", "csv"}));
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random center manifold approximations for rough differential equations"};
    app.require_subcommand(1);
    Options o;
    CLI::App* derive = app.add_subcommand("derive", "derive coefficient RDEs and residuals");
    add_common(derive, o);
    CLI::App* verify = app.add_subcommand("verify", "compare the Taylor approximation with the Lyapunov-Perron fixed point");
    add_common(verify, o);
    verify->add_option("--seeds", o.seeds, "seed count K (seeds 1..K), range a-b, or list a,b,c");
    verify->add_option("--grid-n", o.grid_n, "cells per unit time");
    verify->add_option("--horizon", o.horizon, "hierarchy horizon T (default: window)");
    verify->add_option("--window", o.window, "Lyapunov-Perron window N");
    verify->add_option("--eta", o.eta, "weight exponent in (-beta, 0) (default -beta/2)");
    verify->add_option("--cutoff-r", o.cutoff_r, "cut-off radius R");
    verify->add_option("--xi-min", o.xi_min, "smallest xi in the sweep");
    verify->add_option("--xi-max", o.xi_max, "largest xi in the sweep");
    verify->add_option("--points", o.points, "number of geometric sweep points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        if (derive->parsed()) return cmd_derive(o, out);
        return cmd_verify(o, out, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rcm
