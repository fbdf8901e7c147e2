#include "scatspec/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "scatspec/errors.hpp"

namespace scatspec {

using ojson = nlohmann::ordered_json;

namespace {

// JSON has no inf/nan; encode them as strings.
ojson num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

ojson fit_json(const LogFit& f) {
    return ojson{{"slope", num(f.slope)},
                 {"intercept", num(f.intercept)},
                 {"r2", num(f.r2)},
                 {"points", f.points},
                 {"conclusive", f.conclusive()}};
}

std::string hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Check make(const std::string& name, double value, const std::string& rel, double lo, double hi,
           const std::string& key, double tol, bool ok) {
    Check c;
    c.name = name;
    c.value = value;
    c.relation = rel;
    c.lo = lo;
    c.hi = hi;
    c.tolerance_key = key;
    c.tolerance = tol;
    c.status = ok ? Status::pass : Status::fail;
    return c;
}

}  // namespace

std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::inconclusive: return "inconclusive";
    }
    return "fail";
}

Check check_le(const std::string& name, double value, double bound, const std::string& key, double tol) {
    return make(name, value, "<=", bound, bound, key, tol, value <= bound);
}

Check check_ge(const std::string& name, double value, double bound, const std::string& key, double tol) {
    return make(name, value, ">=", bound, bound, key, tol, value >= bound);
}

Check check_in(const std::string& name, double value, double lo, double hi, const std::string& key, double tol) {
    return make(name, value, "in", lo, hi, key, tol, value >= lo && value <= hi);
}

Check check_true(const std::string& name, bool ok, const std::string& key, double tol) {
    return make(name, ok ? 1.0 : 0.0, "true", 1.0, 1.0, key, tol, ok);
}

Check check_slope(const std::string& name, const LogFit& fit, double lo, double hi, const std::string& key,
                  double tol, double r2_min) {
    Check c = check_in(name, fit.slope, lo, hi, key, tol);
    if (fit.points < 2 || !(fit.r2 >= r2_min)) c.status = Status::inconclusive;
    return c;
}

Status SuiteBlock::status() const {
    if (!error.empty()) return Status::fail;
    bool inconclusive = false;
    for (const auto& c : checks) {
        if (c.status == Status::fail) return Status::fail;
        if (c.status == Status::inconclusive) inconclusive = true;
    }
    return inconclusive ? Status::inconclusive : Status::pass;
}

Status VerificationReport::status() const {
    bool inconclusive = false;
    for (const auto& b : blocks) {
        const Status s = b.status();
        if (s == Status::fail) return Status::fail;
        if (s == Status::inconclusive) inconclusive = true;
    }
    return inconclusive ? Status::inconclusive : Status::pass;
}

ojson to_json(const VerificationReport& report) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["status"] = to_string(report.status());
    j["reproducibility"] = {{"config_hash", hex(report.config_hash)}, {"config", report.config}};
    ojson blocks = ojson::array();
    for (const auto& b : report.blocks) {
        ojson bj;
        bj["suite"] = b.name;
        bj["status"] = to_string(b.status());
        bj["inputs"] = b.inputs;
        bj["values"] = b.values;
        ojson checks = ojson::array();
        for (const auto& c : b.checks) {
            checks.push_back({{"name", c.name},
                              {"value", num(c.value)},
                              {"relation", c.relation},
                              {"lo", num(c.lo)},
                              {"hi", num(c.hi)},
                              {"tolerance", {{"key", c.tolerance_key}, {"value", num(c.tolerance)}}},
                              {"status", to_string(c.status)}});
        }
        bj["checks"] = checks;
        ojson fits = ojson::array();
        for (const auto& f : b.fits) {
            ojson fj = fit_json(f.fit);
            fj["name"] = f.name;
            fj["expected"] = num(f.expected);
            fits.push_back(fj);
        }
        bj["fits"] = fits;
        ojson curves = ojson::array();
        for (const auto& c : b.curves) curves.push_back(c.name + ".csv");
        bj["curves"] = curves;
        if (!b.error.empty()) {
            bj["error"] = b.error;
            bj["error_kind"] = b.error_kind;
        }
        bj["wall_time"] = b.wall_time;
        blocks.push_back(bj);
    }
    j["suites"] = blocks;
    return j;
}

std::vector<std::string> validate_report(const ojson& j) {
    std::vector<std::string> errs;
    auto need = [&](const ojson& o, const char* key, auto pred, const std::string& where) {
        if (!o.is_object() || !o.contains(key)) {
            errs.push_back(where + ": missing '" + key + "'");
            return false;
        }
        if (!pred(o.at(key))) {
            errs.push_back(where + ": '" + key + "' has the wrong type");
            return false;
        }
        return true;
    };
    auto is_str = [](const ojson& v) { return v.is_string(); };
    auto is_arr = [](const ojson& v) { return v.is_array(); };
    auto is_obj = [](const ojson& v) { return v.is_object(); };
    auto is_num = [](const ojson& v) { return v.is_number() || v.is_string(); };
    auto is_status = [](const ojson& v) {
        return v.is_string() && (v == "pass" || v == "fail" || v == "inconclusive");
    };
    if (!j.is_object()) return {"report: not an object"};
    if (need(j, "schema_version", is_str, "report") && j["schema_version"] != kSchemaVersion)
        errs.push_back("report: unsupported schema_version");
    need(j, "status", is_status, "report");
    if (need(j, "reproducibility", is_obj, "report")) {
        need(j["reproducibility"], "config_hash", is_str, "reproducibility");
        need(j["reproducibility"], "config", is_obj, "reproducibility");
    }
    if (need(j, "suites", is_arr, "report")) {
        for (std::size_t i = 0; i < j["suites"].size(); ++i) {
            const ojson& b = j["suites"][i];
            const std::string where = "suites[" + std::to_string(i) + "]";
            need(b, "suite", is_str, where);
            need(b, "status", is_status, where);
            need(b, "inputs", is_obj, where);
            need(b, "values", is_obj, where);
            need(b, "wall_time", is_num, where);
            need(b, "curves", is_arr, where);
            if (need(b, "checks", is_arr, where)) {
                for (const auto& c : b["checks"]) {
                    const std::string cw = where + ".check";
                    need(c, "name", is_str, cw);
                    need(c, "value", is_num, cw);
                    need(c, "relation", is_str, cw);
                    need(c, "status", is_status, cw);
                    if (need(c, "tolerance", is_obj, cw)) {
                        need(c["tolerance"], "key", is_str, cw + ".tolerance");
                        need(c["tolerance"], "value", is_num, cw + ".tolerance");
                    }
                }
            }
            if (need(b, "fits", is_arr, where)) {
                for (const auto& f : b["fits"]) {
                    need(f, "name", is_str, where + ".fit");
                    need(f, "slope", is_num, where + ".fit");
                    need(f, "r2", is_num, where + ".fit");
                }
            }
        }
    }
    return errs;
}

ojson strip_timing(ojson j) {
    if (j.contains("suites"))
        for (auto& b : j["suites"]) b.erase("wall_time");
    return j;
}

void emit_report(const VerificationReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create output directory '" + out_dir + "'");
    auto open = [&](const std::string& name) {
        std::ofstream f(fs::path(out_dir) / name);
        if (!f) throw IoError("cannot write '" + (fs::path(out_dir) / name).string() + "'");
        return f;
    };
    {
        auto f = open("report.json");
        f << to_json(report).dump(2) << "\n";
        if (!f) throw IoError("write failed for report.json");
    }
    for (const auto& b : report.blocks) {
        for (const auto& c : b.curves) {
            auto f = open(c.name + ".csv");
            for (std::size_t k = 0; k < c.header.size(); ++k) f << (k ? "," : "") << c.header[k];
            f << "\n";
            for (const auto& row : c.rows) {
                for (std::size_t k = 0; k < row.size(); ++k) f << (k ? "," : "") << fmt(row[k]);
                f << "\n";
            }
        }
    }
    auto f = open("summary.txt");
    f << "scatspec report (schema " << kSchemaVersion << ", config " << hex(report.config_hash) << ")\n";
    f << "overall: " << to_string(report.status()) << "\n\n";
    for (const auto& b : report.blocks) {
        f << "[" << b.name << "] " << to_string(b.status()) << "\n";
        if (!b.error.empty()) f << "  error: " << b.error << "\n";
        for (const auto& c : b.checks) {
            f << "  " << std::left << std::setw(14) << to_string(c.status) << std::setw(48) << c.name << " "
              << fmt(c.value);
            if (c.relation == "in") f << " in [" << fmt(c.lo) << ", " << fmt(c.hi) << "]";
            else if (c.relation != "true") f << " " << c.relation << " " << fmt(c.lo);
            if (!c.tolerance_key.empty()) f << "  (" << c.tolerance_key << " = " << fmt(c.tolerance) << ")";
            f << "\n";
        }
        f << "\n";
    }
}

}  // namespace scatspec
