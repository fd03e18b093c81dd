#include "superstab/io.hpp"

#include "superstab/version.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace superstab {

namespace {

double require_number(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError(std::string("missing or non-numeric field '") + key + "'");
    return j.at(key).get<double>();
}

Json json_extended(double v) {
    if (std::isinf(v)) return Json(v > 0 ? "+inf" : "-inf");
    return Json(v);
}

}  // namespace

PotentialFamily family_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("family config must be a JSON object");
    const std::string kind = j.value("family", "inverse-power-sum");
    if (kind == "reference-catalog" || kind == "paper-catalog") {
        const double eps = require_number(j, "epsilon");
        const int p_max = static_cast<int>(require_number(j, "p_max"));
        try {
            return PotentialFamily::reference_catalog(eps, p_max);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    if (kind != "inverse-power-sum")
        throw ConfigError("unknown family kind '" + kind + "'");
    const int d = static_cast<int>(require_number(j, "d"));
    const int p_max = static_cast<int>(require_number(j, "p_max"));
    if (!j.contains("per_p") || !j.at("per_p").is_array())
        throw ConfigError("missing per_p array");
    std::map<int, PerOrderParams> per;
    for (const Json& entry : j.at("per_p")) {
        const int p = static_cast<int>(require_number(entry, "p"));
        PerOrderParams q;
        q.repulsion_amp = require_number(entry, "A");
        q.attraction_amp = require_number(entry, "B");
        q.repulsion_exp = require_number(entry, "m");
        q.attraction_exp = require_number(entry, "n");
        if (p > p_max) throw ConfigError("per_p entry exceeds p_max");
        if (!per.emplace(p, q).second) throw ConfigError("duplicate per_p entry");
    }
    if (per.empty()) throw ConfigError("per_p must not be empty");
    try {
        return PotentialFamily(d, std::move(per));
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

PotentialFamily load_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open family config '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("family config parse error: ") + e.what());
    }
    return family_from_json(j);
}

Json family_to_json(const PotentialFamily& fam) {
    Json j;
    j["d"] = fam.dimension();
    j["p_max"] = fam.max_order();
    j["family"] = "inverse-power-sum";
    Json per = Json::array();
    for (const auto& [p, q] : fam.orders()) {
        Json e;
        e["p"] = p;
        e["A"] = q.repulsion_amp;
        e["B"] = q.attraction_amp;
        e["m"] = q.repulsion_exp;
        e["n"] = q.attraction_exp;
        per.push_back(e);
    }
    j["per_p"] = per;
    return j;
}

Configuration points_from_csv_text(const std::string& text, std::optional<int> expect_dim) {
    Configuration gamma;
    std::istringstream in(text);
    std::string line;
    int dim = expect_dim.value_or(0);
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        Point x;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                x.push_back(v);
            } catch (const std::exception&) {
                throw ConfigError("CSV cell is not a number: '" + cell + "'");
            }
        }
        if (x.empty()) continue;
        if (dim == 0) dim = static_cast<int>(x.size());
        if (static_cast<int>(x.size()) != dim)
            throw ConfigError("CSV rows disagree on dimension");
        gamma.points.push_back(std::move(x));
    }
    gamma.dimension = dim == 0 ? expect_dim.value_or(1) : dim;
    return gamma;
}

Configuration points_from_json(const Json& j, std::optional<int> expect_dim) {
    const Json* rows = nullptr;
    int declared = expect_dim.value_or(0);
    if (j.is_object()) {
        if (!j.contains("points") || !j.at("points").is_array())
            throw ConfigError("point object must carry a 'points' array");
        if (j.contains("d")) {
            const int d = static_cast<int>(require_number(j, "d"));
            if (declared != 0 && declared != d)
                throw ConfigError("declared dimension disagrees with the requested one");
            declared = d;
        }
        rows = &j.at("points");
    } else if (j.is_array()) {
        rows = &j;
    } else {
        throw ConfigError("point set must be a JSON array or object");
    }
    Configuration gamma;
    for (const Json& row : *rows) {
        if (!row.is_array()) throw ConfigError("each point must be an array of coordinates");
        Point x;
        for (const Json& c : row) {
            if (!c.is_number()) throw ConfigError("point coordinate is not a number");
            x.push_back(c.get<double>());
        }
        if (declared == 0) declared = static_cast<int>(x.size());
        if (static_cast<int>(x.size()) != declared)
            throw ConfigError("point rows disagree on dimension");
        gamma.points.push_back(std::move(x));
    }
    gamma.dimension = declared == 0 ? 1 : declared;
    return gamma;
}

Configuration load_points(const std::string& path, std::optional<int> expect_dim) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open point set '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "json") {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("point set parse error: ") + e.what());
        }
        return points_from_json(j, expect_dim);
    }
    return points_from_csv_text(text, expect_dim);
}

RunManifest make_manifest(const std::string& command, std::vector<std::string> config_paths,
                          std::uint64_t seed) {
    RunManifest m;
    m.command = command;
    m.config_paths = std::move(config_paths);
    m.seed = seed;
    m.version = kVersion;
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    m.timestamp = buf;
    return m;
}

Json to_json(const RunManifest& m) {
    Json j;
    j["command"] = m.command;
    j["config_paths"] = m.config_paths;
    j["seed"] = m.seed;
    j["version"] = m.version;
    j["timestamp"] = m.timestamp;
    return j;
}

Json to_json(const IpEstimate& est) {
    Json j;
    j["p"] = est.p;
    j["d"] = est.d;
    j["method"] = est.method;
    j["value"] = est.value;
    j["std_error"] = est.std_error;
    if (est.exact) {
        const BigInt num = boost::multiprecision::numerator(*est.exact);
        const BigInt den = boost::multiprecision::denominator(*est.exact);
        if (num >= std::numeric_limits<std::int64_t>::min() &&
            num <= std::numeric_limits<std::int64_t>::max() &&
            den <= std::numeric_limits<std::int64_t>::max()) {
            j["num"] = static_cast<std::int64_t>(num);
            j["den"] = static_cast<std::int64_t>(den);
        } else {
            j["num"] = num.str();
            j["den"] = den.str();
        }
        j["value"] = to_double(*est.exact);
    }
    return j;
}

Json to_json(const ConditionReport& report, const RunManifest& manifest) {
    Json j;
    j["manifest"] = to_json(manifest);
    j["lambda"] = report.lambda;
    j["lambda_a3"] = json_extended(report.lambda_a3);
    Json per = Json::array();
    for (const PerOrderMargin& m : report.per_p) {
        Json e;
        e["p"] = m.p;
        e["vpp_lower"] = m.vpp_lower;
        e["ip_lattice"] = m.ip_lattice;
        e["margin"] = m.margin;
        per.push_back(e);
    }
    j["per_p"] = per;
    j["series_terms"] = report.series_terms;
    j["series_sum"] = report.series_sum;
    j["tail_flag"] = report.tail_flag;
    j["B"] = report.B;
    j["A2"] = report.A2;
    j["B2"] = report.B2;
    j["verdict"] = to_string(report.verdict);
    if (!report.note.empty()) j["note"] = report.note;
    j["provenance"] = {{"ip_lattice", "closed-form bound scaled by lambda^-((p-1)d)"},
                       {"vpp_lower", "in-cube diameter bound"},
                       {"pair_constants", "derived from the p = 2 energy floor"}};
    return j;
}

ConditionReport condition_report_from_json(const Json& j) {
    ConditionReport r;
    r.lambda = j.at("lambda").get<double>();
    if (j.at("lambda_a3").is_string())
        r.lambda_a3 = std::numeric_limits<double>::infinity();
    else
        r.lambda_a3 = j.at("lambda_a3").get<double>();
    for (const Json& e : j.at("per_p")) {
        PerOrderMargin m;
        m.p = e.at("p").get<int>();
        m.vpp_lower = e.at("vpp_lower").get<double>();
        m.ip_lattice = e.at("ip_lattice").get<double>();
        m.margin = e.at("margin").get<double>();
        r.per_p.push_back(m);
    }
    r.series_terms = j.at("series_terms").get<std::vector<double>>();
    r.series_sum = j.at("series_sum").get<double>();
    r.tail_flag = j.at("tail_flag").get<bool>();
    r.B = j.at("B").get<double>();
    r.A2 = j.at("A2").get<double>();
    r.B2 = j.at("B2").get<double>();
    const std::string v = j.at("verdict").get<std::string>();
    r.verdict = v == "stable"               ? Verdict::Stable
                : v == "superstable"        ? Verdict::Superstable
                : v == "strong-superstable" ? Verdict::StrongSuperstable
                                            : Verdict::Inconclusive;
    if (j.contains("note")) r.note = j.at("note").get<std::string>();
    return r;
}

Json to_json(const EnergyBreakdown& breakdown, const RunManifest& manifest) {
    Json j;
    j["manifest"] = to_json(manifest);
    j["n_points"] = breakdown.n_points;
    Json per = Json::array();
    for (const auto& [p, u] : breakdown.per_order) {
        Json e;
        e["p"] = p;
        e["value"] = json_extended(u);
        per.push_back(e);
    }
    j["per_p"] = per;
    j["total"] = json_extended(breakdown.total);
    return j;
}

Json to_json(const ViolationReport& report) {
    Json j;
    j["seed"] = report.seed;
    j["lhs"] = json_extended(report.lhs);
    j["rhs"] = json_extended(report.rhs);
    j["witness"] = report.witness;
    j["passed"] = report.passed;
    j["worst_margin"] = json_extended(report.worst_margin);
    return j;
}

void write_report(const Json& j, const std::string& path) {
    const std::string body = j.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ConfigError("cannot write report to '" + path + "'");
        out << body;
    }
    fs::rename(tmp, target);
}

}  // namespace superstab
