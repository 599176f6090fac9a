#include "rcm/io.hpp"

#include <fstream>
#include <stdexcept>

namespace rcm {

using nlohmann::json;

namespace {

Rational read_rational(const json& v, const std::string& where) {
    if (v.is_number()) return parse_rational(v.dump());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw std::invalid_argument(where + ": expected a number or a rational string");
}

PolyField read_field(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw std::invalid_argument(where + ": expected a list of {i, j, c} terms");
    PolyField f;
    for (const auto& t : arr) {
        if (!t.is_object() || !t.contains("i") || !t.contains("j") || !t.contains("c")) {
            throw std::invalid_argument(where + ": each term needs i, j and c");
        }
        f.add(t.at("i").get<int>(), t.at("j").get<int>(), read_rational(t.at("c"), where));
    }
    return f;
}

std::vector<PolyField> read_channels(const json& j, const char* key, int d) {
    std::vector<PolyField> out;
    if (!j.contains(key)) {
        out.resize(d);
        return out;
    }
    const json& arr = j.at(key);
    if (!arr.is_array()) throw std::invalid_argument(std::string(key) + ": expected one term list per channel");
    for (std::size_t a = 0; a < arr.size(); ++a) out.push_back(read_field(arr[a], std::string(key) + "[" + std::to_string(a) + "]"));
    return out;
}

json field_json(const PolyField& f) {
    json arr = json::array();
    for (const auto& [e, c] : f.terms()) arr.push_back({{"i", e.first}, {"j", e.second}, {"c", to_string(c)}});
    return arr;
}

json xpoly_json(const XPoly& p) {
    json obj = json::object();
    for (const auto& [deg, c] : p.terms()) obj[std::to_string(deg)] = c.str(Style::Ascii);
    return obj;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd matrix_from(const json& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged matrix in JSON");
        for (int k = 0; k < c; ++k) m(i, k) = rows[i][k].get<double>();
    }
    return m;
}

}  // namespace

SystemSpec parse_system(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("system file must hold a JSON object");
    SystemSpec s;
    s.name = j.value("name", std::string());
    s.gamma = j.value("gamma", 0.45);
    s.q = j.value("q", 2);
    s.noise_dim = j.value("noise_dim", 1);
    s.Ac = j.contains("Ac") ? read_rational(j.at("Ac"), "Ac") : Rational(0);
    s.As = j.contains("As") ? read_rational(j.at("As"), "As") : Rational(-1);
    s.Fc = j.contains("Fc") ? read_field(j.at("Fc"), "Fc") : PolyField();
    s.Fs = j.contains("Fs") ? read_field(j.at("Fs"), "Fs") : PolyField();
    s.Gc = read_channels(j, "Gc", s.noise_dim);
    s.Gs = read_channels(j, "Gs", s.noise_dim);
    s.override_assumptions = j.value("override_assumptions", false);
    return s;
}

SystemSpec load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open system file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("cannot parse '" + path + "': " + e.what());
    }
    SystemSpec s = parse_system(j);
    if (s.name.empty()) s.name = path;
    return s;
}

json to_json(const SystemSpec& s) {
    json gc = json::array();
    json gs = json::array();
    for (const auto& g : s.Gc) gc.push_back(field_json(g));
    for (const auto& g : s.Gs) gs.push_back(field_json(g));
    return {{"name", s.name},
            {"gamma", s.gamma},
            {"q", s.q},
            {"noise_dim", s.noise_dim},
            {"Ac", to_string(s.Ac)},
            {"As", to_string(s.As)},
            {"Fc", field_json(s.Fc)},
            {"Fs", field_json(s.Fs)},
            {"Gc", gc},
            {"Gs", gs},
            {"override_assumptions", s.override_assumptions}};
}

json to_json(const CoefficientSystem& cs) {
    json orders = json::array();
    for (int i = 1; i <= cs.q; ++i) {
        const OrderData& od = cs.order(i);
        json g = json::array();
        for (const auto& gi : od.g) g.push_back(gi.str(Style::Ascii));
        orders.push_back({{"i", i},
                          {"A_alpha", to_string(od.A_alpha)},
                          {"f", od.f.str(Style::Ascii)},
                          {"g", g},
                          {"zero", od.zero_flag},
                          {"equation", order_equation(cs, i, Style::Unicode)}});
    }
    const Residuals r = residuals(cs);
    json mt = json::array();
    for (const auto& m : cs.Mtilde) mt.push_back(xpoly_json(m));
    json zeros = json::array();
    for (int k : cs.zero_atoms()) zeros.push_back(k);
    return {{"q", cs.q},
            {"noise_dim", cs.noise_dim},
            {"degree_cap", cs.degree_cap},
            {"orders", orders},
            {"zero_atoms", zeros},
            {"M", xpoly_json(cs.M)},
            {"Mtilde", mt},
            {"residual_min_degree", {{"M", r.min_degree_M}, {"Mtilde", r.min_degree_Mtilde}}}};
}

json to_json(const RoughPath& rp) {
    json ww = json::array();
    for (const auto& c : rp.cell_second_levels()) ww.push_back(matrix_json(c));
    return {{"gamma", rp.gamma()},
            {"t0", rp.grid().t0()},
            {"t1", rp.grid().t1()},
            {"n", rp.grid().cells()},
            {"d", rp.dim()},
            {"W", matrix_json(rp.path())},
            {"WW", ww},
            {"geometric", rp.geometric()}};
}

RoughPath rough_path_from_json(const json& j) {
    Grid g(j.at("t0").get<double>(), j.at("t1").get<double>(), j.at("n").get<int>());
    Eigen::MatrixXd w = matrix_from(j.at("W"));
    std::vector<Eigen::MatrixXd> cells;
    for (const auto& c : j.at("WW")) cells.push_back(matrix_from(c));
    if (w.cols() != j.at("d").get<int>()) throw std::invalid_argument("rough path JSON: d does not match W");
    return RoughPath(j.at("gamma").get<double>(), g, std::move(w), std::move(cells), j.value("geometric", true));
}

json to_json(const ControlledPath& cp) {
    json out = to_json(cp.ref());
    out["Y"] = matrix_json(cp.y());
    out["Yp"] = matrix_json(cp.yp());
    return out;
}

}  // namespace rcm
