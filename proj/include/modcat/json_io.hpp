#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "modcat/mtc_core.hpp"

namespace modcat {

using Json = nlohmann::json;

namespace detail {

inline std::string format_double(double x) {
    if (std::isnan(x)) throw InputError("cannot serialize NaN");
    if (std::isinf(x)) throw InputError("cannot serialize infinity");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    // keep a float marker so "-0" and integral values read back as doubles
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

inline bool is_flat(const Json& j) {
    if (!j.is_array()) return !j.is_object();
    for (const auto& e : j)
        if (e.is_object() || (e.is_array() && !std::all_of(e.begin(), e.end(), [](const Json& x) { return x.is_primitive(); })))
            return false;
    return true;
}

inline void emit(const Json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + Json(it.key()).dump() + ": ";
                emit(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (is_flat(j)) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    emit(j[i], out, indent + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad_in;
                emit(j[i], out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace detail

/// Serializes with 17 significant digits for every floating value.
inline std::string dump_json(const Json& j) {
    std::string out;
    detail::emit(j, out, 0);
    out += "\n";
    return out;
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError(where + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
    return j.at(key);
}

inline Json to_json(const ModularData& md) {
    Json s = Json::array();
    for (Eigen::Index i = 0; i < md.S().rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < md.S().cols(); ++k) row.push_back(complex_to_json(md.S()(i, k)));
        s.push_back(row);
    }
    Json tw = Json::array();
    for (Eigen::Index i = 0; i < md.twists().size(); ++i) tw.push_back(complex_to_json(md.twists()(i)));
    Json out;
    out["name"] = md.name();
    out["labels"] = md.label_names();
    out["vacuum"] = md.vacuum();
    out["S"] = s;
    out["twists"] = tw;
    out["phaseC"] = complex_to_json(md.phase_c());
    return out;
}

inline ModularData modular_data_from_json(const Json& j) {
    try {
        const auto& labels = require(j, "labels");
        if (!labels.is_array()) throw InputError("'labels' must be an array");
        std::vector<std::string> names;
        for (const auto& l : labels) names.push_back(l.get<std::string>());
        const auto n = static_cast<Eigen::Index>(names.size());
        const auto& sj = require(j, "S");
        if (!sj.is_array() || static_cast<Eigen::Index>(sj.size()) != n)
            throw DimensionMismatch("'S' must have one row per label");
        ComplexMatrix s(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& row = sj[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
                throw DimensionMismatch("S row " + std::to_string(i) + " has wrong length");
            for (Eigen::Index k = 0; k < n; ++k)
                s(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], "S entry");
        }
        const auto& tj = require(j, "twists");
        if (!tj.is_array() || static_cast<Eigen::Index>(tj.size()) != n)
            throw DimensionMismatch("'twists' must have one entry per label");
        ComplexVector tw(n);
        for (Eigen::Index i = 0; i < n; ++i) tw(i) = complex_from_json(tj[static_cast<std::size_t>(i)], "twist");
        const auto& vac = require(j, "vacuum");
        if (!vac.is_number_unsigned()) throw InputError("'vacuum' must be a nonnegative integer");
        return ModularData(require(j, "name").get<std::string>(), names, vac.get<std::size_t>(), std::move(s),
                           std::move(tw), complex_from_json(require(j, "phaseC"), "phaseC"));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed modular data document: ") + e.what());
    }
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(origin + ": " + e.what());
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

}  // namespace modcat
