#ifndef JTS_IO_HPP
#define JTS_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "inverse.hpp"

namespace jts {

namespace detail {

// All numbers go out as %.17g: enough digits to round-trip binary64.
inline std::string json_num(double x) { return fmt("%.17g", x); }

inline std::string json_array(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += json_num(v[i]);
    }
    return s + "]";
}

inline std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

} // namespace detail

inline std::string to_json(const JacobiMatrix& J) {
    return "{\"n\":" + std::to_string(J.n()) + ",\"q\":" + detail::json_array(J.q()) +
           ",\"b\":" + detail::json_array(J.b()) + "}";
}

inline std::string to_json(const SpectraData& s) {
    return std::string("{\"mode\":\"") + mode_name(s.mode) +
           "\",\"lambdas\":" + detail::json_array(s.lambdas) +
           ",\"mus\":" + detail::json_array(s.mus) + "}";
}

inline std::string to_json(const SpectralMeasure& rho) {
    std::string s = "{\"atoms\":[";
    for (int k = 0; k < rho.size(); ++k) {
        if (k) s += ",";
        s += "{\"x\":" + detail::json_num(rho.location(k)) +
             ",\"w\":" + detail::json_num(rho.weight(k)) + "}";
    }
    return s + "]}";
}

inline std::string to_json(const ReconstructionResult& r) {
    std::string s = "{\"mode\":\"";
    s += r.recovered_param.is_finite() ? mode_name(SpectraMode::RankOne)
                                       : mode_name(SpectraMode::DirichletNeumann);
    s += "\",\"matrix\":" + to_json(r.matrix);
    if (r.recovered_param.is_finite()) {
        s += ",\"h2\":" + detail::json_num(r.recovered_param.h());
        s += ",\"delta\":" + detail::json_num(r.delta);
    }
    s += ",\"diagnostics\":{";
    bool first = true;
    for (const auto& [k, v] : r.diagnostics) {
        if (!first) s += ",";
        first = false;
        s += detail::json_quote(k) + ":" + detail::json_num(v);
    }
    s += "},\"warnings\":[";
    for (std::size_t i = 0; i < r.warnings.size(); ++i) {
        if (i) s += ",";
        s += detail::json_quote(r.warnings[i]);
    }
    return s + "]}";
}

inline std::string to_json(const ConditionReport& rep) {
    auto verdict = [](const ConditionVerdict& v) {
        return std::string("{\"pass\":") + (v.pass ? "true" : "false") +
               ",\"detail\":" + detail::json_quote(v.detail) + "}";
    };
    std::string s = std::string("{\"mode\":\"") + mode_name(rep.mode) + "\"";
    s += std::string(",\"all_pass\":") + (rep.all_pass() ? "true" : "false");
    s += ",\"conditions\":{";
    s += "\"a_interlacing\":" + verdict(rep.a_interlacing);
    s += ",\"b_delta_finite\":" + verdict(rep.b_delta_finite);
    s += ",\"c_moments_finite\":" + verdict(rep.c_moments_finite);
    s += ",\"d_density\":" + verdict(rep.d_density);
    s += ",\"tau_positive\":" + verdict(rep.tau_positive);
    s += "}";
    if (rep.mode == SpectraMode::RankOne && rep.b_delta_finite.pass)
        s += ",\"delta\":" + detail::json_num(rep.delta);
    s += ",\"moments\":" + detail::json_array(rep.moments);
    return s + "}";
}

namespace detail {

inline nlohmann::json parse_json(const std::string& text, const char* what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(std::string(what) + ": malformed JSON");
    return j;
}

inline std::vector<double> number_list(const nlohmann::json& j, const char* key,
                                       const char* what) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw ParseError(std::string(what) + ": missing array \"" + key + "\"");
    std::vector<double> v;
    for (const auto& e : j.at(key)) {
        if (!e.is_number()) throw ParseError(std::string(what) + ": non-numeric entry in \"" + key + "\"");
        v.push_back(e.get<double>());
    }
    return v;
}

} // namespace detail

/**
 * @brief Parse {"n":...,"q":[...],"b":[...]}; n must match the q length.
 *        Structural problems throw ParseError; value problems propagate from
 *        the JacobiMatrix constructor.
 */
inline JacobiMatrix matrix_from_json(const std::string& text) {
    const auto j = detail::parse_json(text, "matrix");
    auto q = detail::number_list(j, "q", "matrix");
    auto b = detail::number_list(j, "b", "matrix");
    if (!j.contains("n") || !j.at("n").is_number_integer())
        throw ParseError("matrix: missing integer \"n\"");
    if (j.at("n").get<long long>() != static_cast<long long>(q.size()))
        throw ParseError("matrix: n = " + j.at("n").dump() + " but q has " +
                         std::to_string(q.size()) + " entries");
    return JacobiMatrix(std::move(q), std::move(b));
}

inline SpectraData spectra_from_json(const std::string& text) {
    const auto j = detail::parse_json(text, "spectra");
    if (!j.contains("mode") || !j.at("mode").is_string())
        throw ParseError("spectra: missing string \"mode\"");
    const std::string m = j.at("mode").get<std::string>();
    SpectraData s;
    if (m == mode_name(SpectraMode::RankOne))
        s.mode = SpectraMode::RankOne;
    else if (m == mode_name(SpectraMode::DirichletNeumann))
        s.mode = SpectraMode::DirichletNeumann;
    else
        throw ParseError("spectra: unknown mode \"" + m + "\"");
    s.lambdas = detail::number_list(j, "lambdas", "spectra");
    s.mus = detail::number_list(j, "mus", "spectra");
    return s;
}

inline SpectralMeasure measure_from_json(const std::string& text) {
    const auto j = detail::parse_json(text, "measure");
    if (!j.contains("atoms") || !j.at("atoms").is_array())
        throw ParseError("measure: missing array \"atoms\"");
    std::vector<SpectralMeasure::Atom> atoms;
    for (const auto& e : j.at("atoms")) {
        if (!e.is_object() || !e.contains("x") || !e.contains("w") || !e.at("x").is_number() ||
            !e.at("w").is_number())
            throw ParseError("measure: atom entries need numeric \"x\" and \"w\"");
        atoms.emplace_back(e.at("x").get<double>(), e.at("w").get<double>());
    }
    return SpectralMeasure(std::move(atoms));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << content << "\n";
}

} // namespace jts

#endif // JTS_IO_HPP
