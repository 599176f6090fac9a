#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rcm/symbolic.hpp"

namespace rcm {

/// Polynomial Σ c_{ij} x^i y^j in the center coordinate x and stable coordinate y.
class PolyField {
public:
    void add(int i, int j, const Rational& c);
    const std::map<std::pair<int, int>, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    int min_degree() const;  ///< -1 for the zero field

    /// Homogeneous part of total degree l.
    PolyField homogeneous(int l) const;

    double eval(double x, double y) const;
    double dx(double x, double y) const;
    double dy(double x, double y) const;

    std::string str(Style style = Style::Unicode) const;

private:
    std::map<std::pair<int, int>, Rational> terms_;
};

/// Two-dimensional polynomial system
///   dx = (Ac x + Fc(x,y)) dt + Σ_a Gc_a(x,y) ∘ dW^a,
///   dy = (As y + Fs(x,y)) dt + Σ_a Gs_a(x,y) ∘ dW^a.
struct SystemSpec {
    std::string name;
    double gamma = 0.45;
    int q = 2;
    int noise_dim = 1;
    Rational Ac = 0;
    Rational As = -1;
    PolyField Fc, Fs;
    std::vector<PolyField> Gc, Gs;  ///< one field per noise channel
    bool override_assumptions = false;

    bool noise_free() const;
};

/// Input rejected by the structural assumptions on the fields.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Checks F(0,0) = DF(0,0) = 0 and G(0,0) = DG(0,0) = D²G(0,0) = 0 (skipped with the
/// override flag), A^s < 0, and consistent channel counts.
void validate(const SystemSpec& sys);

/// Φ(x) = P(x, Σ_{i=1}^q α_i x^i), expanded exactly and truncated above `degree_cap`.
XPoly substitute_ansatz(const PolyField& p, int q, int degree_cap);

struct OrderData {
    Rational A_alpha;            ///< A^s - i A^c
    CoeffPoly f;                 ///< drift forcing
    std::vector<CoeffPoly> g;    ///< diffusion per noise channel
    bool zero_flag = false;
};

/// Coefficient RDEs dα_i = (A^{α_i} α_i + f_i) dt + Σ_a g_{i,a} ∘ dW^a for i = 1..q,
/// plus the drift and diffusion residuals of the ansatz.
struct CoefficientSystem {
    int q = 0;
    int noise_dim = 1;
    int degree_cap = 0;
    std::vector<OrderData> orders;  ///< orders[i-1] belongs to α_i
    XPoly M;
    std::vector<XPoly> Mtilde;

    const OrderData& order(int i) const { return orders.at(i - 1); }
    std::set<int> zero_atoms() const;
};

/// Coefficient matching in the invariance equations. `degree_cap` <= 0 selects q³.
CoefficientSystem derive_system(const SystemSpec& sys, int q, int degree_cap = 0);

/// Flags α_i ≡ 0 in increasing order whenever f_i and every g_i vanish once the
/// already-flagged atoms and α_i itself are set to zero, and substitutes the
/// flagged zeros into all polynomials and residuals.
CoefficientSystem propagate_zeros(const CoefficientSystem& cs);

struct Residuals {
    XPoly M;
    std::vector<XPoly> Mtilde;
    int min_degree_M = -1;       ///< -1 when M ≡ 0
    int min_degree_Mtilde = -1;  ///< over all channels, -1 when all vanish
};

Residuals residuals(const CoefficientSystem& cs);

/// Center dynamics on the ansatz: dx = (Ac x + Fc(x, φ(x))) dt + Σ_a Gc_a(x, φ(x)) dW^a
/// with coefficients in the α atoms, truncated at degree q + field degree.
struct ReducedFlow {
    XPoly drift;
    std::vector<XPoly> diffusion;
};

ReducedFlow reduced_flow(const SystemSpec& sys, const CoefficientSystem& cs);

/// Deterministic coefficients α_i = -f_i / A^{α_i}, solved in increasing order.
/// Requires every g_i to vanish and every A^{α_i} to be nonzero.
std::vector<Rational> carr_coefficients(const CoefficientSystem& cs);

/// Human-readable RDE for α_i, e.g. "dα_2 = (−α_2 + 1) dt".
std::string order_equation(const CoefficientSystem& cs, int i, Style style = Style::Unicode);

}  // namespace rcm

namespace rcm {

/// Double-precision copy of a PolyField for fast repeated evaluation.
class NumericField {
public:
    NumericField() = default;
    explicit NumericField(const PolyField& p);

    bool is_zero() const { return terms_.empty(); }
    double eval(double x, double y) const;
    /// Value and partial derivatives at (x, y).
    void eval(double x, double y, double& v, double& vx, double& vy) const;

private:
    struct Term {
        int i;
        int j;
        double c;
    };
    std::vector<Term> terms_;
};

}  // namespace rcm
