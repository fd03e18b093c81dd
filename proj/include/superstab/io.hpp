#pragma once

#include "superstab/criteria.hpp"
#include "superstab/energy.hpp"
#include "superstab/geometry.hpp"
#include "superstab/integrals.hpp"
#include "superstab/potentials.hpp"
#include "superstab/verify.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace superstab {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Family configuration, either explicit per-order parameters
//   {"d":1,"p_max":3,"family":"inverse-power-sum","per_p":[{"p":2,"A":..,"B":..,"m":..,"n":..}, ...]}
// or the generated catalog
//   {"family":"reference-catalog","epsilon":0.1,"p_max":8}.
PotentialFamily family_from_json(const Json& j);
PotentialFamily load_family(const std::string& path);
Json family_to_json(const PotentialFamily& fam);

// Point sets: CSV (one point per row, d columns) or JSON, either a bare
// array-of-arrays or {"d": int, "points": [[...], ...]}. `expect_dim`
// cross-checks the declared dimension when provided.
Configuration load_points(const std::string& path, std::optional<int> expect_dim = std::nullopt);
Configuration points_from_csv_text(const std::string& text, std::optional<int> expect_dim);
Configuration points_from_json(const Json& j, std::optional<int> expect_dim);

// Reproducibility header embedded in every emitted report.
struct RunManifest {
    std::string command;
    std::vector<std::string> config_paths;
    std::uint64_t seed = 0;
    std::string version;
    std::string timestamp;  // ISO-8601 UTC; excluded from replay comparisons
};

RunManifest make_manifest(const std::string& command, std::vector<std::string> config_paths,
                          std::uint64_t seed);

Json to_json(const RunManifest& m);
Json to_json(const IpEstimate& est);
Json to_json(const ConditionReport& report, const RunManifest& manifest);
Json to_json(const EnergyBreakdown& breakdown, const RunManifest& manifest);
Json to_json(const ViolationReport& report);

ConditionReport condition_report_from_json(const Json& j);

// Serialize with a trailing newline and write atomically (temp file + rename).
// Empty path means stdout.
void write_report(const Json& j, const std::string& path);

}  // namespace superstab
