#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "geodesy/correspondence.hpp"
#include "geodesy/gromov_wasserstein.hpp"
#include "geodesy/numeric.hpp"
#include "geodesy/space.hpp"

namespace geodesy {

using json = nlohmann::json;

// Machine-readable load/validation failure.
struct IoError : std::runtime_error {
    std::string code;
    IoError(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
};

// Numbers are decimal floats or "p/q" rational strings.
template <class T>
json number_to_json(const T& x) {
    if constexpr (is_rational_v<T>)
        return format_rational(x);
    else
        return x;
}

inline Rational rational_from_double_exact(double x) {
    // doubles are dyadic; only small denominators are accepted in exact mode
    double r = x;
    long long den = 1;
    int guard = 0;
    while (r != std::floor(r)) {
        r *= 2;
        den *= 2;
        if (++guard > 32)
            throw IoError("SCHEMA", "exact mode requires p/q strings or dyadic numbers, got " +
                                        std::to_string(x));
    }
    return Rational(static_cast<long long>(r), den);
}

template <class T>
T number_from_json(const json& j) {
    if constexpr (is_rational_v<T>) {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long long>(), 1);
        if (j.is_number()) return rational_from_double_exact(j.get<double>());
        throw IoError("SCHEMA", "expected number or p/q string");
    } else {
        if (j.is_string()) {
            Rational r = parse_rational(j.get<std::string>());
            return to_double(r);
        }
        if (j.is_number()) return j.get<double>();
        throw IoError("SCHEMA", "expected number or p/q string");
    }
}

// ---------------------------------------------------------------------------
// Space files: {"labels": [...], "dist": [[...]], "mesh": 0.0,
//               "mass": [...] (optional)}

template <class T>
struct LoadedSpace {
    FiniteMetricSpace<T> space;
    std::optional<std::vector<T>> mass;

    MetricMeasureSpace<T> mm() const {
        if (!mass) throw IoError("SCHEMA", "space file carries no mass vector");
        return MetricMeasureSpace<T>{space, *mass};
    }
};

template <class T>
json space_to_json(const FiniteMetricSpace<T>& X, const std::vector<T>* mass = nullptr) {
    json j;
    j["labels"] = X.labels;
    json rows = json::array();
    for (std::size_t i = 0; i < X.size(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < X.size(); ++k) row.push_back(number_to_json(X.d(i, k)));
        rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
    j["mesh"] = number_to_json(X.mesh);
    if (mass) {
        json w = json::array();
        for (const auto& m : *mass) w.push_back(number_to_json(m));
        j["mass"] = std::move(w);
    }
    return j;
}

template <class T>
LoadedSpace<T> space_from_json(const json& j, bool validate = true) {
    if (!j.contains("dist") || !j["dist"].is_array())
        throw IoError("SCHEMA", "space file needs a dist matrix");
    LoadedSpace<T> out;
    const auto& rows = j["dist"];
    const std::size_t n = rows.size();
    out.space.dist = Matrix<T>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n)
            throw IoError("SCHEMA", "dist matrix is not square at row " + std::to_string(i));
        for (std::size_t k = 0; k < n; ++k) out.space.dist(i, k) = number_from_json<T>(rows[i][k]);
    }
    if (j.contains("labels")) {
        out.space.labels = j["labels"].get<std::vector<std::string>>();
        if (out.space.labels.size() != n)
            throw IoError("SCHEMA", "label count does not match matrix size");
    } else {
        for (std::size_t i = 0; i < n; ++i) out.space.labels.push_back("p" + std::to_string(i));
    }
    if (j.contains("mesh")) out.space.mesh = number_from_json<T>(j["mesh"]);
    if (validate) {
        auto rep = out.space.validate();
        if (!rep.ok) {
            const auto& v = rep.violations.front();
            std::string code = v.kind == MetricViolation::Triangle    ? "METRIC_TRIANGLE"
                               : v.kind == MetricViolation::Symmetry  ? "METRIC_SYMMETRY"
                               : v.kind == MetricViolation::Diagonal  ? "METRIC_DIAGONAL"
                                                                      : "METRIC_POSITIVITY";
            throw IoError(code, v.describe());
        }
    }
    if (j.contains("mass")) {
        std::vector<T> mass;
        for (const auto& w : j["mass"]) mass.push_back(number_from_json<T>(w));
        if (mass.size() != n) throw IoError("SCHEMA", "mass length does not match matrix size");
        for (std::size_t i = 0; i < n; ++i)
            if (!(mass[i] > T(0)))
                throw IoError("FULL_SUPPORT", "mass entry " + std::to_string(i) + " is not positive");
        T s(0);
        for (const auto& m : mass) s = s + m;
        T tol = tol_or_exact<T>(kMassTol);
        if (scalar_abs(s - T(1)) > tol)
            throw IoError("MASS_SUM", "mass vector sums to " + format_sig(to_double(s)));
        out.mass = std::move(mass);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Correspondences, couplings, matrices.

inline json correspondence_to_json(const Correspondence& R) {
    json pairs = json::array();
    for (auto& [x, y] : R.pairs) pairs.push_back(json::array({x, y}));
    return json{{"pairs", std::move(pairs)}};
}

inline Correspondence correspondence_from_json(const json& j) {
    if (!j.contains("pairs")) throw IoError("SCHEMA", "correspondence file needs pairs");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& p : j["pairs"]) pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
    return Correspondence(std::move(pairs));
}

template <class T>
json matrix_to_json(const Matrix<T>& M) {
    json rows = json::array();
    for (std::size_t i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(number_to_json(M(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class T>
Matrix<T> matrix_from_json(const json& j) {
    const std::size_t r = j.size();
    const std::size_t c = r ? j[0].size() : 0;
    Matrix<T> M(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (j[i].size() != c) throw IoError("SCHEMA", "ragged matrix");
        for (std::size_t k = 0; k < c; ++k) M(i, k) = number_from_json<T>(j[i][k]);
    }
    return M;
}

// ---------------------------------------------------------------------------
// Geodesic bundles: a sampled curve plus replayable certificates.

template <class T>
json gw_bundle_to_json(const GeodesicSampling<T>& curve, const GwCurveCertificate<T>& cert) {
    json j;
    j["p"] = cert.p;
    j["rho"] = number_to_json(cert.rho);
    json times = json::array();
    for (const auto& t : curve.times) times.push_back(number_to_json(t));
    j["times"] = std::move(times);
    json slices = json::array();
    for (std::size_t k = 0; k < curve.spaces.size(); ++k)
        slices.push_back(space_to_json(curve.spaces[k],
                                       curve.masses.empty() ? nullptr : &curve.masses[k]));
    j["slices"] = std::move(slices);
    json certs = json::array();
    for (const auto& pc : cert.pairs) {
        json c;
        c["pair"] = json::array({pc.si, pc.ti});
        c["cross"] = matrix_to_json(pc.cross);
        c["plan"] = matrix_to_json(pc.plan);
        certs.push_back(std::move(c));
    }
    j["certificates"] = std::move(certs);
    return j;
}

template <class T>
std::pair<GeodesicSampling<T>, GwCurveCertificate<T>> gw_bundle_from_json(const json& j) {
    GeodesicSampling<T> curve;
    GwCurveCertificate<T> cert;
    cert.p = j.at("p").get<int>();
    cert.rho = number_from_json<T>(j.at("rho"));
    for (const auto& t : j.at("times")) curve.times.push_back(number_from_json<T>(t));
    curve.endpoint_value = cert.rho;
    for (const auto& s : j.at("slices")) {
        auto loaded = space_from_json<T>(s);
        curve.spaces.push_back(loaded.space);
        if (loaded.mass) curve.masses.push_back(*loaded.mass);
    }
    for (const auto& c : j.at("certificates")) {
        GwPairCert<T> pc;
        pc.si = c.at("pair")[0].get<std::size_t>();
        pc.ti = c.at("pair")[1].get<std::size_t>();
        pc.cross = matrix_from_json<T>(c.at("cross"));
        pc.plan = matrix_from_json<T>(c.at("plan"));
        cert.pairs.push_back(std::move(pc));
    }
    return {std::move(curve), std::move(cert)};
}

template <class T>
json gh_bundle_to_json(const GeodesicSampling<T>& curve) {
    json j;
    j["rho"] = number_to_json(curve.endpoint_value);
    json times = json::array();
    for (const auto& t : curve.times) times.push_back(number_to_json(t));
    j["times"] = std::move(times);
    json slices = json::array();
    for (const auto& s : curve.spaces) slices.push_back(space_to_json(s));
    j["slices"] = std::move(slices);
    if (curve.line) {
        j["line"]["X"] = space_to_json(curve.line->X);
        j["line"]["Y"] = space_to_json(curve.line->Y);
        j["line"]["R"] = correspondence_to_json(curve.line->R);
    }
    j["certified_optimal"] = curve.certified_optimal;
    return j;
}

template <class T>
GeodesicSampling<T> gh_bundle_from_json(const json& j) {
    GeodesicSampling<T> curve;
    curve.endpoint_value = number_from_json<T>(j.at("rho"));
    for (const auto& t : j.at("times")) curve.times.push_back(number_from_json<T>(t));
    for (const auto& s : j.at("slices")) curve.spaces.push_back(space_from_json<T>(s).space);
    if (j.contains("line")) {
        LineData<T> ld{space_from_json<T>(j["line"]["X"]).space,
                       space_from_json<T>(j["line"]["Y"]).space,
                       correspondence_from_json(j["line"]["R"])};
        curve.line = std::move(ld);
    }
    if (j.contains("certified_optimal")) curve.certified_optimal = j["certified_optimal"].get<bool>();
    return curve;
}

// Scenario files for the interpolation front end:
// {"space": path-or-inline, "A": [...], "B": [...], "K": 8, "slack": null}
struct Scenario {
    json space_json;  // inline space object
    std::vector<std::size_t> A, B;
    std::size_t K = 8;
    std::optional<double> slack;
};

inline Scenario scenario_from_json(const json& j, const std::string& base_dir = "") {
    Scenario sc;
    if (j.at("space").is_string()) {
        std::string path = j["space"].get<std::string>();
        if (!base_dir.empty() && !path.empty() && path.front() != '/') path = base_dir + "/" + path;
        std::ifstream in(path);
        if (!in) throw IoError("SCHEMA", "cannot open space file " + path);
        in >> sc.space_json;
    } else {
        sc.space_json = j["space"];
    }
    sc.A = j.at("A").get<std::vector<std::size_t>>();
    sc.B = j.at("B").get<std::vector<std::size_t>>();
    if (j.contains("K")) sc.K = j["K"].get<std::size_t>();
    if (j.contains("slack") && !j["slack"].is_null()) sc.slack = j["slack"].get<double>();
    return sc;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("SCHEMA", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("SCHEMA", std::string("json parse failure: ") + e.what());
    }
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("SCHEMA", "cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace geodesy
