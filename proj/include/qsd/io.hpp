// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// File formats: state / ensemble JSON, experiment CSV and run manifests.
//
// State JSON is {"dims": [dA, dB], "entries": [[re, im], ...]} with entries
// row-major; {"dims": ..., "amplitudes": [[re, im], ...]} gives a pure state.
// Ensemble JSON is {"items": [{"p": p_b, "state": <state JSON>}, ...]}.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "qsd/discrimination.hpp"
#include "qsd/experiments.hpp"
#include "qsd/linalg.hpp"
#include "qsd/robustness.hpp"
#include "qsd/states.hpp"

namespace qsd {

/// Unreadable, unwritable or malformed files.
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

/// Shortest decimal that round-trips to the same double.
inline std::string format_full(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

/// 12 significant digits, for human-readable output.
inline std::string format_text(double x) {
    std::ostringstream out;
    out << std::setprecision(12) << x;
    return out.str();
}

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json entries = Json::array();
    for (const auto& z : m.entries()) {
        entries.push_back(Json::array({z.real(), z.imag()}));
    }
    return entries;
}

inline Json state_to_json(const DensityMatrix& rho) {
    return Json{{"dims", {rho.dims().a, rho.dims().b}}, {"entries", matrix_to_json(rho.matrix())}};
}

namespace detail {

inline std::vector<Complex> complex_list(const Json& j, const char* key) {
    if (!j.is_array()) {
        throw IoError(std::string("'") + key + "' must be an array of [re, im] pairs");
    }
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw IoError(std::string("'") + key + "' entries must be [re, im] number pairs");
        }
        out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return out;
}

}  // namespace detail

inline DensityMatrix state_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dims")) {
        throw IoError("state JSON needs a 'dims' field");
    }
    const Json& dims_json = j.at("dims");
    if (!dims_json.is_array() || dims_json.size() != 2 || !dims_json[0].is_number_unsigned() ||
        !dims_json[1].is_number_unsigned()) {
        throw IoError("'dims' must be [dA, dB] with positive integers");
    }
    const BipartiteDims dims{dims_json[0].get<std::size_t>(), dims_json[1].get<std::size_t>()};
    if (dims.a == 0 || dims.b == 0) {
        throw IoError("'dims' must be positive");
    }
    try {
        if (j.contains("amplitudes")) {
            return DensityMatrix::projector(PureState(dims, detail::complex_list(j.at("amplitudes"), "amplitudes")));
        }
        if (!j.contains("entries")) {
            throw IoError("state JSON needs 'entries' or 'amplitudes'");
        }
        std::vector<Complex> entries = detail::complex_list(j.at("entries"), "entries");
        const std::size_t d = dims.total();
        if (entries.size() != d * d) {
            std::ostringstream msg;
            msg << "'entries' has " << entries.size() << " values, expected " << d * d;
            throw IoError(msg.str());
        }
        return DensityMatrix::from_matrix(dims, ComplexMatrix(d, d, std::move(entries)));
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("invalid state: ") + e.what());
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw IoError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline DensityMatrix read_state_file(const std::string& path) {
    try {
        return state_from_json(read_json_file(path));
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

inline Json ensemble_to_json(const Ensemble& eta) {
    Json items = Json::array();
    for (const auto& item : eta.items()) {
        items.push_back({{"p", item.probability}, {"state", state_to_json(item.state)}});
    }
    return Json{{"items", items}};
}

inline Ensemble ensemble_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("items") || !j.at("items").is_array()) {
        throw IoError("ensemble JSON needs an 'items' array");
    }
    std::vector<EnsembleItem> items;
    for (const auto& item : j.at("items")) {
        if (!item.is_object() || !item.contains("p") || !item.at("p").is_number() || !item.contains("state")) {
            throw IoError("ensemble items need a numeric 'p' and a 'state'");
        }
        items.push_back({item.at("p").get<double>(), state_from_json(item.at("state"))});
    }
    try {
        return Ensemble(std::move(items));
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("invalid ensemble: ") + e.what());
    }
}

inline Ensemble read_ensemble_file(const std::string& path) {
    try {
        return ensemble_from_json(read_json_file(path));
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

inline Json rre_to_json(const RREResult& r) {
    return Json{{"value", r.value},
                {"method", std::string(to_string(r.method))},
                {"closest_separable", state_to_json(r.closest_separable)}};
}

inline Json bound_report_to_json(const BoundReport& rep) {
    Json j{{"p_eta", rep.p_eta},
           {"p_eps", rep.p_eps},
           {"r_values", rep.r_values},
           {"r_max", rep.r_max},
           {"r_min", rep.r_min},
           {"gamma", rep.gamma},
           {"thm1_upper", rep.thm1_upper},
           {"thm2_lower", rep.thm2_lower},
           {"thm1_ok", rep.thm1_ok},
           {"thm2_ok", rep.thm2_ok}};
    j["thm3_applicable_and_ok"] = rep.thm3_ok ? Json(*rep.thm3_ok) : Json(nullptr);
    j["thm4_lower_diff"] = rep.thm4_lower_diff ? Json(*rep.thm4_lower_diff) : Json(nullptr);
    j["thm4_ok"] = rep.thm4_ok ? Json(*rep.thm4_ok) : Json(nullptr);
    return j;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kFig1CsvHeader = "index,seed,rank1,rank2,is_product,p1,R1,R2,Rmax,p_eta,p_eps,gamma";
inline constexpr const char* kFig2CsvHeader =
    "r,deltaP,p1,lambda1,lambda2,angle1,angle2,angle3,angle4,angle5,angle6,best_restart,iterations";

inline void write_fig1_csv(std::ostream& out, const std::vector<Fig1Record>& records) {
    out << kFig1CsvHeader << '\n';
    for (const auto& r : records) {
        out << r.index << ',' << r.seed << ',' << r.rank1 << ',' << r.rank2 << ',' << (r.is_product ? 1 : 0) << ','
            << format_full(r.p1) << ',' << format_full(r.r1) << ',' << format_full(r.r2) << ',' << format_full(r.r_max)
            << ',' << format_full(r.p_eta) << ',' << format_full(r.p_eps) << ',' << format_full(r.gamma) << '\n';
    }
}

inline void write_fig2_csv(std::ostream& out, const std::vector<Fig2Record>& records) {
    out << kFig2CsvHeader << '\n';
    for (const auto& r : records) {
        out << format_full(r.r) << ',' << format_full(r.delta_p) << ',' << format_full(r.p1) << ','
            << format_full(r.lambda1) << ',' << format_full(r.lambda2);
        for (double a : r.angles) out << ',' << format_full(a);
        out << ',' << r.best_restart << ',' << r.iterations << '\n';
    }
}

/// Writes through a temporary file and renames it into place.
template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + path + "'");
        }
        writer(out);
        out.flush();
        if (!out) {
            throw IoError("write to '" + path + "' failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot move output into '" + path + "'");
    }
}

/// Split one CSV line on commas (no quoting is ever emitted).
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string manifest_path_for(const std::string& output) { return output + ".manifest.json"; }

}  // namespace qsd
