#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace rcm {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-1/2", "0.125", "1e-3" exactly.
Rational parse_rational(const std::string& text);
double to_double(const Rational& r);
std::string to_string(const Rational& r);

enum class Style { Unicode, Ascii };

/// Exponent vector over the atoms α_1, α_2, ...; entry k-1 is the power of α_k.
/// Canonical form has no trailing zeros, so the constant monomial is empty.
using Monomial = std::vector<int>;

/// Polynomial in the coefficient atoms α_k with exact rational coefficients.
class CoeffPoly {
public:
    CoeffPoly() = default;
    CoeffPoly(const Rational& c);  // NOLINT: constants convert implicitly
    static CoeffPoly atom(int k);

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant() const;
    Rational coefficient(const Monomial& m) const;
    void add_term(Monomial m, const Rational& c);

    CoeffPoly operator+(const CoeffPoly& o) const;
    CoeffPoly operator-(const CoeffPoly& o) const;
    CoeffPoly operator*(const CoeffPoly& o) const;
    CoeffPoly operator-() const;
    CoeffPoly& operator+=(const CoeffPoly& o);
    bool operator==(const CoeffPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const CoeffPoly& o) const { return !(*this == o); }

    bool depends_on(int k) const;
    /// Largest atom index appearing, 0 for constants.
    int max_atom() const;
    /// Substitutes α_k = 0 for every k in `atoms`.
    CoeffPoly without(const std::set<int>& atoms) const;
    /// ∂/∂α_k.
    CoeffPoly partial(int k) const;
    /// Evaluates with values[k] standing for α_k (values[0] unused).
    double evaluate(const std::vector<double>& values) const;
    Rational evaluate(const std::vector<Rational>& values) const;

    std::string str(Style style = Style::Unicode) const;

private:
    std::map<Monomial, Rational> terms_;
};

/// Polynomial in x with CoeffPoly coefficients, keyed by x-degree.
class XPoly {
public:
    const std::map<int, CoeffPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    CoeffPoly coefficient(int deg) const;
    void add(int deg, const CoeffPoly& c);

    XPoly operator+(const XPoly& o) const;
    XPoly operator-(const XPoly& o) const;
    XPoly scaled(const CoeffPoly& c) const;
    /// Product truncated above degree `cap`.
    XPoly times(const XPoly& o, int cap) const;
    XPoly without(const std::set<int>& atoms) const;
    /// Lowest x-degree with a nonzero coefficient, -1 when zero.
    int min_degree() const;
    int max_degree() const;

    std::string str(Style style = Style::Unicode, const std::string& var = "x") const;

private:
    std::map<int, CoeffPoly> terms_;
};

std::string superscript(int n);

}  // namespace rcm
