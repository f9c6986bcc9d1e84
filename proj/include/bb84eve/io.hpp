// JSON and CSV serialization. Complex numbers are [re, im] pairs; matrices
// are nested row-major arrays. CSV uses '.' decimals, 12 significant
// digits, LF line endings.
#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "info.hpp"
#include "optimality.hpp"
#include "sim.hpp"
#include "states.hpp"
#include "synth.hpp"

namespace bb84eve {

using json = nlohmann::ordered_json;

inline json to_json(const CVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back({x.real(), x.imag()});
    return a;
}

inline CVec cvec_from_json(const json& a) {
    CVec v;
    for (const auto& x : a) v.emplace_back(x.at(0).get<double>(), x.at(1).get<double>());
    return v;
}

inline json to_json(const CMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline CMat cmat_from_json(const json& rows) {
    if (rows.empty()) throw std::invalid_argument("matrix json: empty");
    CMat m(rows.size(), rows.at(0).size());
    for (std::size_t i = 0; i < m.rows; ++i) {
        const json& row = rows.at(i);
        if (row.size() != m.cols) throw std::invalid_argument("matrix json: ragged rows");
        for (std::size_t j = 0; j < m.cols; ++j)
            m(i, j) = cplx(row.at(j).at(0).get<double>(), row.at(j).at(1).get<double>());
    }
    return m;
}

inline json to_json(const ErrorRates& r) { return {{"d_xy", r.d_xy}, {"d_uv", r.d_uv}}; }

inline ErrorRates rates_from_json(const json& j) {
    return {j.at("d_xy").get<double>(), j.at("d_uv").get<double>()};
}

inline Basis basis_from_tag(const std::string& tag) {
    if (tag == "xy") return Basis::Computational;
    if (tag == "uv") return Basis::Hadamard;
    throw std::invalid_argument("basis tag must be \"xy\" or \"uv\"");
}

inline json to_json(const MeasurementSetup& m) {
    json dirs = json::array();
    for (const auto& d : m.directions) dirs.push_back(to_json(d));
    return {{"directions", dirs}, {"signs", m.signs}, {"basis", basis_tag(m.basis)}};
}

inline MeasurementSetup setup_from_json(const json& j) {
    MeasurementSetup m;
    const json& dirs = j.at("directions");
    if (dirs.size() != 4) throw std::invalid_argument("measurement json: need 4 directions");
    for (std::size_t k = 0; k < 4; ++k) m.directions[k] = cvec_from_json(dirs.at(k));
    if (j.contains("signs"))
        for (std::size_t k = 0; k < 4; ++k) m.signs[k] = j.at("signs").at(k).get<int>();
    m.basis = basis_from_tag(j.value("basis", "xy"));
    if (!setup_is_valid(m)) throw std::invalid_argument("measurement json: invalid setup");
    return m;
}

inline json to_json(const InteractionVectors& iv) {
    return {{"xi_0", to_json(iv.xi0)},
            {"xi_1", to_json(iv.xi1)},
            {"zeta_0", to_json(iv.zeta0)},
            {"zeta_1", to_json(iv.zeta1)},
            {"basis", basis_tag(iv.basis)}};
}

inline InteractionVectors ivs_from_json(const json& j) {
    InteractionVectors iv;
    iv.xi0 = cvec_from_json(j.at("xi_0"));
    iv.xi1 = cvec_from_json(j.at("xi_1"));
    iv.zeta0 = cvec_from_json(j.at("zeta_0"));
    iv.zeta1 = cvec_from_json(j.at("zeta_1"));
    iv.basis = basis_from_tag(j.value("basis", "xy"));
    return iv;
}

inline json to_json(const NscReport& r) {
    return {{"passed", r.passed},
            {"max_residual", r.max_residual},
            {"conditions", r.per_condition},
            {"vacuous", r.vacuous}};
}

inline json to_json(const AttackUnitary& a) {
    return {{"u", to_json(a.u)},
            {"initial_state", to_json(a.initial_state)},
            {"measurement", to_json(a.measurement)},
            {"rates", to_json(a.rates)}};
}

inline AttackUnitary attack_from_json(const json& j) {
    AttackUnitary a;
    a.u = cmat_from_json(j.at("u"));
    a.initial_state = cvec_from_json(j.at("initial_state"));
    a.measurement = setup_from_json(j.at("measurement"));
    a.rates = rates_from_json(j.at("rates"));
    return a;
}

inline json to_json(const SimStats& s) {
    json counts = json::array();
    for (int bi = 0; bi < 2; ++bi)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int l = 0; l < 4; ++l)
                    counts.push_back({{"basis", bi == 0 ? "xy" : "uv"},
                                      {"a", a},
                                      {"b", b},
                                      {"lambda", l},
                                      {"count", s.counts[bi][a][b][l]}});
    return {{"n_rounds", s.n_rounds},
            {"sifted", s.sifted},
            {"sift_rate", s.sift_rate},
            {"qber", {{"xy", s.qber_xy}, {"uv", s.qber_uv}}},
            {"eve_accuracy", s.eve_accuracy},
            {"eve_accuracy_xy", s.eve_accuracy_xy},
            {"eve_accuracy_uv", s.eve_accuracy_uv},
            {"mi_ab_hat", s.mi_ab_hat},
            {"mi_ae_hat", s.mi_ae_hat},
            {"counts", counts}};
}

inline json to_json(const ChshRun& c) {
    return {{"s", c.s}, {"std_err", c.std_err}, {"n", c.n}};
}

inline json to_json(const IgOracle& o) {
    return {{"best_ig", o.best_ig}, {"eigen_ig", o.eigen_ig}};
}

/* CSV */

inline std::string csv_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string sweep_csv(const std::vector<RateCurvePoint>& points) {
    std::string out = "d,ig_star,mi_ab,mi_ae,key_rate,chsh,shrink\n";
    for (const auto& p : points) {
        out += csv_num(p.d) + ',' + csv_num(p.ig_star) + ',' + csv_num(p.mi_ab) + ',' +
               csv_num(p.mi_ae) + ',' + csv_num(p.key_rate) + ',' + csv_num(p.chsh) + ',' +
               csv_num(p.shrink) + '\n';
    }
    return out;
}

// 16 columns per row: re and im interleaved across the 8 matrix columns.
inline std::string matrix_csv(const CMat& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) out += ',';
            out += csv_num(m(i, j).real()) + ',' + csv_num(m(i, j).imag());
        }
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return json::parse(f);
}

}  // namespace bb84eve
