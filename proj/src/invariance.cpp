#include "rcm/invariance.hpp"

#include <algorithm>
#include <cmath>

namespace rcm {

void PolyField::add(int i, int j, const Rational& c) {
    if (i < 0 || j < 0) throw std::invalid_argument("PolyField: exponents must be non-negative");
    if (c == 0) return;
    auto key = std::make_pair(i, j);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int PolyField::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
}

int PolyField::min_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = d < 0 ? e.first + e.second : std::min(d, e.first + e.second);
    return d;
}

PolyField PolyField::homogeneous(int l) const {
    PolyField out;
    for (const auto& [e, c] : terms_)
        if (e.first + e.second == l) out.add(e.first, e.second, c);
    return out;
}

double PolyField::eval(double x, double y) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) s += to_double(c) * std::pow(x, e.first) * std::pow(y, e.second);
    return s;
}

double PolyField::dx(double x, double y) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_)
        if (e.first > 0) s += to_double(c) * e.first * std::pow(x, e.first - 1) * std::pow(y, e.second);
    return s;
}

double PolyField::dy(double x, double y) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_)
        if (e.second > 0) s += to_double(c) * e.second * std::pow(x, e.first) * std::pow(y, e.second - 1);
    return s;
}

std::string PolyField::str(Style style) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        const bool neg = c < 0;
        const Rational mag = neg ? Rational(-c) : c;
        std::string mono;
        auto power = [&](const char* var, int k) {
            if (k == 0) return;
            if (style == Style::Ascii && !mono.empty()) mono += "*";
            mono += var;
            if (k > 1) mono += style == Style::Unicode ? superscript(k) : "^" + std::to_string(k);
        };
        power("x", e.first);
        power("y", e.second);
        std::string body;
        if (mono.empty()) body = to_string(mag);
        else if (mag == 1) body = mono;
        else body = to_string(mag) + (style == Style::Unicode ? "" : "*") + mono;
        const std::string minus = style == Style::Unicode ? "−" : "-";
        if (first) out += neg ? minus : "";
        else out += neg ? " " + minus + " " : " + ";
        out += body;
        first = false;
    }
    return out;
}

bool SystemSpec::noise_free() const {
    for (const auto& g : Gc)
        if (!g.is_zero()) return false;
    for (const auto& g : Gs)
        if (!g.is_zero()) return false;
    return true;
}

void validate(const SystemSpec& sys) {
    if (sys.q < 2) throw ValidationError("q must be at least 2");
    if (sys.noise_dim < 1) throw ValidationError("noise_dim must be at least 1");
    if (static_cast<int>(sys.Gc.size()) != sys.noise_dim || static_cast<int>(sys.Gs.size()) != sys.noise_dim) {
        throw ValidationError("Gc and Gs must list one field per noise channel");
    }
    if (!(sys.gamma > 1.0 / 3.0 && sys.gamma <= 0.5)) throw ValidationError("gamma must lie in (1/3, 1/2]");
    if (!(sys.As < 0)) throw ValidationError("A^s must be negative (the stable block must decay)");
    if (sys.override_assumptions) return;
    const char* drift_names[] = {"F(0,0) ≠ 0", "DF(0,0) ≠ 0"};
    for (const PolyField* f : {&sys.Fc, &sys.Fs}) {
        for (const auto& [e, c] : f->terms()) {
            const int deg = e.first + e.second;
            if (deg <= 1) throw ValidationError(std::string(drift_names[deg]) + ", see Assumption (F)");
        }
    }
    const char* diff_names[] = {"G(0,0) ≠ 0", "DG(0,0) ≠ 0", "D²G(0,0) ≠ 0"};
    for (const auto* fields : {&sys.Gc, &sys.Gs}) {
        for (const auto& g : *fields) {
            for (const auto& [e, c] : g.terms()) {
                const int deg = e.first + e.second;
                if (deg <= 2) throw ValidationError(std::string(diff_names[deg]) + ", see Assumption (G)");
            }
        }
    }
}

namespace {

XPoly ansatz(int q) {
    XPoly phi;
    for (int i = 1; i <= q; ++i) phi.add(i, CoeffPoly::atom(i));
    return phi;
}

XPoly ansatz_derivative(int q) {
    XPoly dphi;
    for (int i = 1; i <= q; ++i) dphi.add(i - 1, CoeffPoly(Rational(i)) * CoeffPoly::atom(i));
    return dphi;
}

XPoly substitute(const PolyField& p, const XPoly& phi, int cap) {
    int jmax = 0;
    for (const auto& [e, c] : p.terms()) jmax = std::max(jmax, e.second);
    std::vector<XPoly> powers(jmax + 1);
    powers[0].add(0, CoeffPoly(Rational(1)));
    for (int j = 1; j <= jmax; ++j) powers[j] = powers[j - 1].times(phi, cap);
    XPoly out;
    for (const auto& [e, c] : p.terms()) {
        for (const auto& [deg, coeff] : powers[e.second].terms()) {
            if (deg + e.first <= cap) out.add(deg + e.first, coeff * CoeffPoly(c));
        }
    }
    return out;
}

// Splits an expansion into its coefficients of degree 1..q and the negated leftover above q.
void split_at(const XPoly& expr, int q, std::vector<CoeffPoly>& low, XPoly& residual) {
    low.assign(q + 1, CoeffPoly());
    residual = XPoly();
    for (const auto& [deg, coeff] : expr.terms()) {
        if (deg <= q) low[deg] = coeff;
        else residual.add(deg, -coeff);
    }
}

}  // namespace

XPoly substitute_ansatz(const PolyField& p, int q, int degree_cap) {
    if (degree_cap < q) throw std::invalid_argument("substitute_ansatz: degree cap must be >= q");
    return substitute(p, ansatz(q), degree_cap);
}

std::set<int> CoefficientSystem::zero_atoms() const {
    std::set<int> out;
    for (int i = 1; i <= q; ++i)
        if (orders[i - 1].zero_flag) out.insert(i);
    return out;
}

CoefficientSystem derive_system(const SystemSpec& sys, int q, int degree_cap) {
    if (q < 2) throw std::invalid_argument("derive_system: q must be >= 2");
    if (static_cast<int>(sys.Gc.size()) != sys.noise_dim || static_cast<int>(sys.Gs.size()) != sys.noise_dim) {
        throw std::invalid_argument("derive_system: channel count mismatch");
    }
    const int cap = degree_cap > 0 ? std::max(degree_cap, q) : q * q * q;
    const XPoly phi = ansatz(q);
    const XPoly dphi = ansatz_derivative(q);

    CoefficientSystem cs;
    cs.q = q;
    cs.noise_dim = sys.noise_dim;
    cs.degree_cap = cap;
    cs.orders.resize(q);
    for (int i = 1; i <= q; ++i) cs.orders[i - 1].A_alpha = sys.As - Rational(i) * sys.Ac;

    // The linear parts A^s φ - φ' A^c x are carried by A^{α_i}; the rest is matched here.
    const XPoly drift = substitute(sys.Fs, phi, cap) - dphi.times(substitute(sys.Fc, phi, cap), cap);
    std::vector<CoeffPoly> low;
    split_at(drift, q, low, cs.M);
    for (int i = 1; i <= q; ++i) cs.orders[i - 1].f = low[i];
    if (!low[0].is_zero()) throw std::logic_error("derive_system: constant term in drift expansion");

    cs.Mtilde.resize(sys.noise_dim);
    for (int a = 0; a < sys.noise_dim; ++a) {
        const XPoly diff = substitute(sys.Gs[a], phi, cap) - dphi.times(substitute(sys.Gc[a], phi, cap), cap);
        split_at(diff, q, low, cs.Mtilde[a]);
        for (int i = 1; i <= q; ++i) cs.orders[i - 1].g.push_back(low[i]);
    }
    return cs;
}

CoefficientSystem propagate_zeros(const CoefficientSystem& in) {
    CoefficientSystem cs = in;
    std::set<int> zeros = cs.zero_atoms();
    for (int i = 1; i <= cs.q; ++i) {
        OrderData& od = cs.orders[i - 1];
        if (od.zero_flag) continue;
        std::set<int> trial = zeros;
        trial.insert(i);
        bool vanishes = od.f.without(trial).is_zero();
        for (const auto& g : od.g) vanishes = vanishes && g.without(trial).is_zero();
        if (vanishes) {
            od.zero_flag = true;
            zeros.insert(i);
        }
    }
    for (auto& od : cs.orders) {
        od.f = od.f.without(zeros);
        for (auto& g : od.g) g = g.without(zeros);
    }
    cs.M = cs.M.without(zeros);
    for (auto& mt : cs.Mtilde) mt = mt.without(zeros);
    return cs;
}

Residuals residuals(const CoefficientSystem& cs) {
    Residuals r;
    r.M = cs.M;
    r.Mtilde = cs.Mtilde;
    r.min_degree_M = cs.M.min_degree();
    for (const auto& mt : cs.Mtilde) {
        const int d = mt.min_degree();
        if (d >= 0) r.min_degree_Mtilde = r.min_degree_Mtilde < 0 ? d : std::min(r.min_degree_Mtilde, d);
    }
    return r;
}

ReducedFlow reduced_flow(const SystemSpec& sys, const CoefficientSystem& cs) {
    int field_degree = std::max(sys.Fc.degree(), 1);
    for (const auto& g : sys.Gc) field_degree = std::max(field_degree, g.degree());
    const int cap = cs.q + field_degree;
    const std::set<int> zeros = cs.zero_atoms();
    const XPoly phi = ansatz(cs.q).without(zeros);

    ReducedFlow out;
    out.drift.add(1, CoeffPoly(sys.Ac));
    out.drift = out.drift + substitute(sys.Fc, phi, cap);
    for (const auto& g : sys.Gc) out.diffusion.push_back(substitute(g, phi, cap));
    return out;
}

std::vector<Rational> carr_coefficients(const CoefficientSystem& cs) {
    for (const auto& od : cs.orders)
        for (const auto& g : od.g)
            if (!g.is_zero()) throw std::invalid_argument("carr_coefficients: requires a noise-free system");
    std::vector<Rational> alpha(cs.q + 1, Rational(0));
    for (int i = 1; i <= cs.q; ++i) {
        const OrderData& od = cs.order(i);
        if (od.zero_flag) continue;
        if (od.f.depends_on(i)) throw std::invalid_argument("carr_coefficients: f_i depends on α_i");
        if (od.A_alpha == 0) throw std::invalid_argument("carr_coefficients: A^{α_i} = 0 (resonant order)");
        alpha[i] = -od.f.evaluate(alpha) / od.A_alpha;
    }
    return alpha;
}

namespace {

struct SignedPiece {
    bool negative;
    std::string body;
};

std::vector<SignedPiece> pieces(const CoeffPoly& p, Style style) {
    std::vector<SignedPiece> out;
    if (p.is_zero()) return out;
    const std::string s = p.str(style);
    const std::string minus = style == Style::Unicode ? "−" : "-";
    // Re-split the canonical rendering on its top-level separators.
    std::size_t pos = 0;
    bool neg = false;
    if (s.compare(0, minus.size(), minus) == 0) {
        neg = true;
        pos = minus.size();
    }
    while (pos <= s.size()) {
        const std::size_t plus = s.find(" + ", pos);
        const std::size_t sub = s.find(" " + minus + " ", pos);
        const std::size_t next = std::min(plus, sub);
        out.push_back({neg, s.substr(pos, next == std::string::npos ? std::string::npos : next - pos)});
        if (next == std::string::npos) break;
        neg = next == sub;
        pos = next + (neg ? minus.size() + 2 : 3);
    }
    return out;
}

std::string join(const std::vector<SignedPiece>& ps, Style style) {
    const std::string minus = style == Style::Unicode ? "−" : "-";
    std::string out;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (k == 0) out += ps[k].negative ? minus : "";
        else out += ps[k].negative ? " " + minus + " " : " + ";
        out += ps[k].body;
    }
    return out;
}

}  // namespace

std::string order_equation(const CoefficientSystem& cs, int i, Style style) {
    const OrderData& od = cs.order(i);
    const std::string alpha = style == Style::Unicode ? "α_" + std::to_string(i) : "a" + std::to_string(i);
    const std::string lhs = "d" + alpha + " = ";
    if (od.zero_flag) return lhs + "0";

    std::vector<SignedPiece> drift = pieces(CoeffPoly(od.A_alpha) * CoeffPoly::atom(i), style);
    for (const auto& p : pieces(od.f, style)) drift.push_back(p);

    std::string out;
    if (!drift.empty()) out = drift.size() == 1 ? join(drift, style) + " dt" : "(" + join(drift, style) + ") dt";
    const std::string minus = style == Style::Unicode ? "−" : "-";
    const std::string circ = style == Style::Unicode ? " ∘ " : " o ";
    for (std::size_t a = 0; a < od.g.size(); ++a) {
        const auto ps = pieces(od.g[a], style);
        if (ps.empty()) continue;
        std::string dw = "dW";
        if (od.g.size() > 1) dw += style == Style::Unicode ? superscript(static_cast<int>(a) + 1) : "^" + std::to_string(a + 1);
        std::string term;
        bool neg = false;
        if (ps.size() == 1) {
            neg = ps[0].negative;
            term = ps[0].body + circ + dw;
        } else {
            term = "(" + join(ps, style) + ")" + circ + dw;
        }
        if (out.empty()) out = (neg ? minus : "") + term;
        else out += (neg ? " " + minus + " " : " + ") + term;
    }
    return lhs + (out.empty() ? "0" : out);
}

}  // namespace rcm

namespace rcm {

namespace {

double ipow(double b, int e) {
    double r = 1.0;
    for (int k = 0; k < e; ++k) r *= b;
    return r;
}

}  // namespace

NumericField::NumericField(const PolyField& p) {
    for (const auto& [e, c] : p.terms()) terms_.push_back({e.first, e.second, to_double(c)});
}

double NumericField::eval(double x, double y) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.c * ipow(x, t.i) * ipow(y, t.j);
    return s;
}

void NumericField::eval(double x, double y, double& v, double& vx, double& vy) const {
    v = vx = vy = 0.0;
    for (const auto& t : terms_) {
        const double px = ipow(x, t.i);
        const double py = ipow(y, t.j);
        v += t.c * px * py;
        if (t.i > 0) vx += t.c * t.i * ipow(x, t.i - 1) * py;
        if (t.j > 0) vy += t.c * t.j * px * ipow(y, t.j - 1);
    }
}

}  // namespace rcm
