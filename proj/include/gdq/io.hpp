#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gdq/antichain.hpp"
#include "gdq/errors.hpp"
#include "gdq/geometry.hpp"
#include "gdq/graph.hpp"
#include "gdq/measure.hpp"
#include "gdq/quantizer.hpp"
#include "gdq/spectral.hpp"
#include "gdq/system.hpp"

namespace gdq {

inline constexpr int kSchemaVersion = 1;

/// Shortest-round-trip-ish fixed formatting; stable across runs for the
/// byte-identical-output contract.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct SystemConfig {
    MarkovSystem system;
    std::optional<double> separation_t;
};

/// Parses the system-definition document:
/// {"order_r": number, "transition": [[..]], "ratios": [[..]],
///  "initial": [..], "separation_t": number (optional)}.
inline SystemConfig load_system_config(const nlohmann::json& doc) {
    try {
        const auto transition = doc.at("transition").get<std::vector<std::vector<double>>>();
        const auto ratios = doc.at("ratios").get<std::vector<std::vector<double>>>();
        const auto initial = doc.at("initial").get<std::vector<double>>();
        const double order_r = doc.at("order_r").get<double>();
        std::optional<double> t;
        if (doc.contains("separation_t") && !doc["separation_t"].is_null()) {
            t = doc["separation_t"].get<double>();
        }
        return {MarkovSystem::validate(transition, ratios, initial, order_r), t};
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::bad_config, std::string("malformed system document: ") + e.what());
    }
}

inline SystemConfig load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::io_error, "cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::io_error, "cannot parse " + path + ": " + e.what());
    }
    return load_system_config(doc);
}

inline std::vector<int> one_based(const std::vector<int>& vertices) {
    std::vector<int> out;
    out.reserve(vertices.size());
    for (int v : vertices) out.push_back(v + 1);
    return out;
}

inline nlohmann::json to_json(const ComparabilityVerdict& verdict, const SccDecomposition& dec) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : verdict.pairs) {
        nlohmann::json jp;
        jp["a"] = one_based(dec.component(static_cast<std::size_t>(p.a)).vertices);
        jp["b"] = one_based(dec.component(static_cast<std::size_t>(p.b)).vertices);
        jp["relation"] = to_string(p.relation);
        if (p.relation == Relation::incomparable) {
            jp["witness"] = nullptr;
        } else {
            nlohmann::json w = nlohmann::json::array();
            for (std::uint32_t v : p.witness.letters()) w.push_back(v + 1);
            jp["witness"] = w;
        }
        pairs.push_back(std::move(jp));
    }
    nlohmann::json out;
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : dec.components()) comps.push_back(one_based(c.vertices));
    out["components"] = std::move(comps);
    nlohmann::json cm = nlohmann::json::array();
    for (int k : verdict.class_m) {
        cm.push_back(one_based(dec.component(static_cast<std::size_t>(k)).vertices));
    }
    out["class_m"] = std::move(cm);
    out["pairs"] = std::move(pairs);
    return out;
}

inline nlohmann::json to_json(const SpectralReport& rep, const SccDecomposition& dec) {
    nlohmann::json out;
    out["schema_version"] = kSchemaVersion;
    out["s_r"] = rep.s_r;
    out["dimension"] = rep.dimension;
    out["classification"] = to_string(rep.classification);
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : rep.components) {
        nlohmann::json jc;
        jc["vertices"] = one_based(c.vertices);
        jc["trivial"] = c.trivial;
        if (c.trivial) {
            jc["s_r_h"] = nullptr;
        } else {
            jc["s_r_h"] = c.s_r_h;
        }
        jc["in_M"] = c.in_m;
        if (c.in_m) {
            jc["delta_bounds"] = {c.delta1, c.delta2};
            jc["xi_right"] = c.xi_right;
        }
        comps.push_back(std::move(jc));
    }
    out["components"] = std::move(comps);
    if (rep.delta_bounds) {
        out["delta_bounds"] = {rep.delta_bounds->first, rep.delta_bounds->second};
    } else {
        out["delta_bounds"] = nullptr;
    }
    out["m_bounds"] = {rep.m1, rep.m2};
    out["witness_pairs"] = to_json(rep.verdict, dec)["pairs"];
    out["class_m"] = to_json(rep.verdict, dec)["class_m"];
    return out;
}

/// Antichain rows: word;length;p_sigma;c_sigma;measure.
inline void write_antichain_csv(std::ostream& os, const MarkovSystem& sys,
                                const Antichain& chain) {
    os << "word;length;p_sigma;c_sigma;measure\n";
    for (const auto& e : chain.entries()) {
        const double mass = std::exp(e.log_mass);
        os << e.word.display() << ';' << e.word.length() << ';' << format_double(mass) << ';'
           << format_double(std::exp(e.log_ratio)) << ';'
           << format_double(sys.initial(e.word.front()) * mass) << '\n';
    }
}

/// Per-level diagnostics rows: j;phi;l1;l2;proxy;normalized_sum;Q_k.
inline void write_diagnostics_header(std::ostream& os) {
    os << "j;phi;l1;l2;proxy;normalized_sum;Q_k\n";
}

inline void write_diagnostics_row(std::ostream& os, const AntichainDiagnostics& d, double q_k) {
    os << d.level << ';' << d.phi << ';' << d.l1 << ';' << d.l2 << ';' << format_double(d.proxy)
       << ';' << format_double(d.normalized_sum) << ';' << format_double(q_k) << '\n';
}

/// Cylinder intervals of an antichain: word;left;right.
inline void write_intervals_csv(std::ostream& os, const CylinderGeometry& geom,
                                const Antichain& chain) {
    os << "word;left;right\n";
    for (const auto& e : chain.entries()) {
        const auto iv = geom.interval(e.word);
        os << e.word.display() << ';' << format_double(iv.left) << ';' << format_double(iv.right())
           << '\n';
    }
}

/// Sample rows: position;word;weight (weight = mu of the emitted cylinder).
inline void write_samples_csv(std::ostream& os, const MarkovSystem& sys,
                              const std::vector<SamplePoint>& samples) {
    os << "position;word;weight\n";
    for (const auto& s : samples) {
        os << format_double(s.position) << ';' << s.word.display() << ';'
           << format_double(word_measure(sys, s.word)) << '\n';
    }
}

/// Quantizer schedule rows: n;distortion;e_n_r;coeff_at_s.
inline void write_quantize_csv(std::ostream& os, const DimensionFit& fit) {
    os << "n;distortion;e_n_r;coeff_at_s\n";
    for (const auto& p : fit.points) {
        os << p.n << ';' << format_double(p.distortion) << ';' << format_double(p.e_nr) << ';'
           << format_double(p.coeff_at_s) << '\n';
    }
}

inline nlohmann::json to_json(const DimensionFit& fit, double s_r_theory) {
    nlohmann::json out;
    out["schema_version"] = kSchemaVersion;
    out["slope"] = fit.slope;
    out["ci"] = fit.half_width;
    out["s_r_theory"] = s_r_theory;
    out["agree_within"] = std::fabs(fit.slope - s_r_theory) / s_r_theory;
    out["s_probe"] = fit.s_probe;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : fit.points) {
        pts.push_back({{"n", p.n},
                       {"level_j", p.level_j},
                       {"atoms", p.atom_count},
                       {"resolution", p.resolution},
                       {"e_n_r", p.e_nr}});
    }
    out["points"] = std::move(pts);
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io_error, "cannot write " + path);
    out << content;
}

} // namespace gdq
