#include "rcm/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rcm {

namespace mp = boost::multiprecision;

Rational parse_rational(const std::string& raw) {
    std::string text;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
    if (text.empty()) throw std::invalid_argument("empty number");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const Rational num = parse_rational(text.substr(0, slash));
        const Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + raw + "'");
        return num / den;
    }
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
    mp::cpp_int digits = 0;
    int scale = 0;
    bool any = false;
    bool frac = false;
    for (; pos < text.size(); ++pos) {
        const char ch = text[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits = digits * 10 + (ch - '0');
            if (frac) --scale;
            any = true;
        } else if (ch == '.' && !frac) {
            frac = true;
        } else {
            break;
        }
    }
    if (!any) throw std::invalid_argument("not a number: '" + raw + "'");
    if (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E') throw std::invalid_argument("not a number: '" + raw + "'");
        const std::string ex = text.substr(pos + 1);
        std::size_t used = 0;
        int e = 0;
        try {
            e = std::stoi(ex, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad exponent in '" + raw + "'");
        }
        if (used != ex.size()) throw std::invalid_argument("bad exponent in '" + raw + "'");
        scale += e;
    }
    Rational out(digits);
    const mp::cpp_int p = mp::pow(mp::cpp_int(10), std::abs(scale));
    if (scale >= 0) out *= Rational(p);
    else out /= Rational(p);
    return negative ? Rational(-out) : out;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
    const mp::cpp_int num = mp::numerator(r);
    const mp::cpp_int den = mp::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

std::string superscript(int n) {
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string s = std::to_string(n);
    std::string out;
    for (char ch : s) out += ch == '-' ? "⁻" : digits[ch - '0'];
    return out;
}

namespace {

void trim(Monomial& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
}

int total_degree(const Monomial& m) {
    int s = 0;
    for (int e : m) s += e;
    return s;
}

std::string monomial_str(const Monomial& m, Style style) {
    std::string out;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (m[k] == 0) continue;
        if (style == Style::Unicode) {
            out += "α_" + std::to_string(k + 1);
            if (m[k] > 1) out += superscript(m[k]);
        } else {
            if (!out.empty()) out += "*";
            out += "a" + std::to_string(k + 1);
            if (m[k] > 1) out += "^" + std::to_string(m[k]);
        }
    }
    return out;
}

// Magnitude and monomial without sign; `unit` suppresses a coefficient of one.
std::string term_str(const Rational& mag, const Monomial& m, Style style) {
    const std::string mono = monomial_str(m, style);
    if (mono.empty()) return to_string(mag);
    if (mag == 1) return mono;
    const bool integral = mp::denominator(mag) == 1;
    if (style == Style::Unicode) return integral ? to_string(mag) + mono : "(" + to_string(mag) + ")" + mono;
    return to_string(mag) + "*" + mono;
}

// Display order: higher total degree first, then larger powers of lower atoms first.
bool display_before(const Monomial& a, const Monomial& b) {
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) return da > db;
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        const int ea = k < a.size() ? a[k] : 0;
        const int eb = k < b.size() ? b[k] : 0;
        if (ea != eb) return ea > eb;
    }
    return false;
}

const char* minus(Style style) { return style == Style::Unicode ? "−" : "-"; }

}  // namespace

CoeffPoly::CoeffPoly(const Rational& c) {
    if (c != 0) terms_[Monomial{}] = c;
}

CoeffPoly CoeffPoly::atom(int k) {
    if (k < 1) throw std::invalid_argument("atom index must be >= 1");
    CoeffPoly p;
    Monomial m(k, 0);
    m[k - 1] = 1;
    p.terms_[m] = 1;
    return p;
}

bool CoeffPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Rational CoeffPoly::constant() const { return coefficient(Monomial{}); }

Rational CoeffPoly::coefficient(const Monomial& m) const {
    Monomial key = m;
    trim(key);
    auto it = terms_.find(key);
    return it == terms_.end() ? Rational(0) : it->second;
}

void CoeffPoly::add_term(Monomial m, const Rational& c) {
    if (c == 0) return;
    trim(m);
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(std::move(m), c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

CoeffPoly& CoeffPoly::operator+=(const CoeffPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

CoeffPoly CoeffPoly::operator+(const CoeffPoly& o) const {
    CoeffPoly out = *this;
    out += o;
    return out;
}

CoeffPoly CoeffPoly::operator-() const {
    CoeffPoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

CoeffPoly CoeffPoly::operator-(const CoeffPoly& o) const { return *this + (-o); }

CoeffPoly CoeffPoly::operator*(const CoeffPoly& o) const {
    CoeffPoly out;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m(std::max(ma.size(), mb.size()), 0);
            for (std::size_t k = 0; k < ma.size(); ++k) m[k] += ma[k];
            for (std::size_t k = 0; k < mb.size(); ++k) m[k] += mb[k];
            out.add_term(std::move(m), ca * cb);
        }
    }
    return out;
}

bool CoeffPoly::depends_on(int k) const {
    for (const auto& [m, c] : terms_)
        if (static_cast<int>(m.size()) >= k && m[k - 1] > 0) return true;
    return false;
}

int CoeffPoly::max_atom() const {
    int out = 0;
    for (const auto& [m, c] : terms_) out = std::max(out, static_cast<int>(m.size()));
    return out;
}

CoeffPoly CoeffPoly::without(const std::set<int>& atoms) const {
    CoeffPoly out;
    for (const auto& [m, c] : terms_) {
        bool vanishes = false;
        for (int k : atoms)
            if (static_cast<int>(m.size()) >= k && m[k - 1] > 0) vanishes = true;
        if (!vanishes) out.terms_.emplace(m, c);
    }
    return out;
}

CoeffPoly CoeffPoly::partial(int k) const {
    CoeffPoly out;
    for (const auto& [m, c] : terms_) {
        if (static_cast<int>(m.size()) < k || m[k - 1] == 0) continue;
        Monomial d = m;
        const int e = d[k - 1]--;
        out.add_term(std::move(d), c * e);
    }
    return out;
}

double CoeffPoly::evaluate(const std::vector<double>& values) const {
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
        double t = to_double(c);
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k] == 0) continue;
            if (k + 1 >= values.size()) throw std::out_of_range("CoeffPoly::evaluate: missing atom value");
            t *= std::pow(values[k + 1], m[k]);
        }
        sum += t;
    }
    return sum;
}

std::string CoeffPoly::str(Style style) const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const Monomial, Rational>*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return display_before(a->first, b->first); });
    std::string out;
    bool first = true;
    for (const auto* t : order) {
        const bool neg = t->second < 0;
        const Rational mag = neg ? Rational(-t->second) : t->second;
        if (first) out += neg ? minus(style) : "";
        else out += neg ? std::string(" ") + minus(style) + " " : " + ";
        out += term_str(mag, t->first, style);
        first = false;
    }
    return out;
}

CoeffPoly XPoly::coefficient(int deg) const {
    auto it = terms_.find(deg);
    return it == terms_.end() ? CoeffPoly() : it->second;
}

void XPoly::add(int deg, const CoeffPoly& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(deg);
    if (it == terms_.end()) {
        terms_.emplace(deg, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

XPoly XPoly::operator+(const XPoly& o) const {
    XPoly out = *this;
    for (const auto& [d, c] : o.terms_) out.add(d, c);
    return out;
}

XPoly XPoly::operator-(const XPoly& o) const {
    XPoly out = *this;
    for (const auto& [d, c] : o.terms_) out.add(d, -c);
    return out;
}

XPoly XPoly::scaled(const CoeffPoly& c) const {
    XPoly out;
    for (const auto& [d, p] : terms_) out.add(d, p * c);
    return out;
}

XPoly XPoly::times(const XPoly& o, int cap) const {
    XPoly out;
    for (const auto& [da, pa] : terms_) {
        for (const auto& [db, pb] : o.terms_) {
            if (da + db > cap) break;
            out.add(da + db, pa * pb);
        }
    }
    return out;
}

XPoly XPoly::without(const std::set<int>& atoms) const {
    XPoly out;
    for (const auto& [d, p] : terms_) out.add(d, p.without(atoms));
    return out;
}

int XPoly::min_degree() const { return terms_.empty() ? -1 : terms_.begin()->first; }
int XPoly::max_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first; }

std::string XPoly::str(Style style, const std::string& var) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [deg, coeff] : terms_) {
        std::string power;
        if (deg == 1) power = var;
        else if (deg > 1) power = style == Style::Unicode ? var + superscript(deg) : var + "^" + std::to_string(deg);

        std::string body;
        bool neg = false;
        if (coeff.terms().size() == 1) {
            const auto& [m, c] = *coeff.terms().begin();
            neg = c < 0;
            const Rational mag = neg ? Rational(-c) : c;
            if (power.empty()) body = term_str(mag, m, style);
            else if (m.empty() && mag == 1) body = power;
            else body = term_str(mag, m, style) + (style == Style::Unicode ? " " : "*") + power;
        } else {
            body = "(" + coeff.str(style) + ")";
            if (!power.empty()) body += (style == Style::Unicode ? " " : "*") + power;
        }
        if (first) out += neg ? minus(style) : "";
        else out += neg ? std::string(" ") + minus(style) + " " : " + ";
        out += body;
        first = false;
    }
    return out;
}

}  // namespace rcm

namespace rcm {

Rational CoeffPoly::evaluate(const std::vector<Rational>& values) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k] == 0) continue;
            if (k + 1 >= values.size()) throw std::out_of_range("CoeffPoly::evaluate: missing atom value");
            for (int e = 0; e < m[k]; ++e) t *= values[k + 1];
        }
        sum += t;
    }
    return sum;
}

}  // namespace rcm
