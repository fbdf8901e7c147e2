#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "scatspec/fit.hpp"

namespace scatspec {

inline constexpr const char* kSchemaVersion = "1.0";

enum class Status { pass, fail, inconclusive };

std::string to_string(Status s);

/// One pass/fail decision with the tolerance that produced it.
struct Check {
    std::string name;
    double value = 0.0;
    std::string relation;  ///< "<=", ">=", "in", "true"
    double lo = 0.0;
    double hi = 0.0;
    std::string tolerance_key;  ///< config key the bound came from
    double tolerance = 0.0;
    Status status = Status::fail;
};

Check check_le(const std::string& name, double value, double bound, const std::string& key, double tol);
Check check_ge(const std::string& name, double value, double bound, const std::string& key, double tol);
Check check_in(const std::string& name, double value, double lo, double hi, const std::string& key, double tol);
Check check_true(const std::string& name, bool ok, const std::string& key = "", double tol = 0.0);
/// Slope within [lo, hi]; inconclusive when R^2 < r2_min.
Check check_slope(const std::string& name, const LogFit& fit, double lo, double hi, const std::string& key,
                  double tol, double r2_min);

struct FitRecord {
    std::string name;
    LogFit fit;
    double expected = 0.0;
};

/// CSV curve written as <name>.csv.
struct Curve {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct SuiteBlock {
    std::string name;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    std::vector<Check> checks;
    std::vector<FitRecord> fits;
    std::vector<Curve> curves;
    std::string error;       ///< set when the suite aborted; partial values are kept
    std::string error_kind;  ///< "config" or "numerical" when error is set
    double wall_time = 0.0;

    /// fail if any check fails or the suite aborted; inconclusive if any check is; else pass.
    Status status() const;
};

struct VerificationReport {
    std::uint64_t config_hash = 0;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<SuiteBlock> blocks;

    Status status() const;
};

nlohmann::ordered_json to_json(const VerificationReport& report);

/// Structural validation against the report schema; empty when valid.
std::vector<std::string> validate_report(const nlohmann::ordered_json& j);

/// Removes timing fields so two runs can be compared.
nlohmann::ordered_json strip_timing(nlohmann::ordered_json j);

/// Writes report.json, one CSV per curve and summary.txt. Throws IoError.
void emit_report(const VerificationReport& report, const std::string& out_dir);

}  // namespace scatspec
