#include "scatspec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scatspec/errors.hpp"

namespace scatspec {

namespace {

// Closed schema: every accepted key with its default.
const std::map<std::string, std::string>& schema() {
    static const std::map<std::string, std::string> keys{
        {"n", "3"},
        {"r_min", "1"},
        {"rho", "1"},
        {"warp.family", "flat"},
        {"warp.c", "0"},
        {"warp.center", "3"},
        {"warp.width", "0.7"},
        {"potential.v0", "0"},
        {"potential.rho_prime", "1"},
        {"cutoff.kind", "collar"},
        {"cutoff.r0", "2"},
        {"cutoff.r1", "3"},
        {"spectrum.kind", "sphere"},
        {"spectrum.k_max", "2"},
        {"spectrum.list", ""},
        {"grid.q", "8.3"},
        {"grid.h", "0.1"},
        {"window.a", "0.5"},
        {"window.b", "2"},
        {"quad.levels", "20"},
        {"quad.order", "8"},
        {"quad.scale", "1"},
        {"mourre.H", "4,8,16,32"},
        {"hardy.s", "0"},
        {"hardy.ratios", "100,1000,10000"},
        {"hardy.N", "4096"},
        {"poincare.s", "0.25"},
        {"poincare.r_max", "64"},
        {"poincare.N", "1024"},
        {"poincare.theta", "0.5"},
        {"poincare.samples", "16"},
        {"weight.t0", "0.4"},
        {"weight.s", "0.25"},
        {"weight.eps", "0.1"},
        {"weight.points", "1000"},
        {"weight.eps_steps", "4"},
        {"weight.h", "0.1"},
        {"resolvent.s", "0,0.4"},
        {"resolvent.order", "0,1"},
        {"resolvent.w_re", "0"},
        {"resolvent.w_im", "1"},
        {"resolvent.H", "4,8,16,32"},
        {"resolvent.r_factor", "20"},
        {"resolvent.h", "0.1"},
        {"resolvent.negative_branch", "true"},
        {"gain.sigma", "0,0.5"},
        {"gain.order", "0,1,2"},
        {"gain.H", "4,8,16,32"},
        {"adjoint.mu", "0.5,1"},
        {"adjoint.H", "8,16,32,64"},
        {"wave.mu", "1,0.25,0.5"},
        {"wave.eps", "0"},
        {"wave.T", "8,16,32,48"},
        {"wave.r_max", "64"},
        {"wave.h", "0.05"},
        {"wave.dt", "0.1"},
        {"wave.margin", "8"},
        {"wave.r_a", "2"},
        {"wave.r_b", "4"},
        {"wave.trapping_control", "true"},
        {"output.dir", "out"},
        {"tol.fit", "0.15"},
        {"tol.r2", "0.9"},
        {"tol.hardy_band", "0.05"},
        {"tol.mourre_c", "0.25"},
        {"tol.mourre_slope", "0.3"},
        {"tol.sqrt_c", "0.1"},
        {"tol.quad", "1e-6"},
        {"tol.identity", "1e-8"},
        {"tol.adjoint_gap", "1e-8"},
        {"tol.ratio", "2"},
        {"tol.energy", "1e-8"},
        {"tol.plateau", "1.1"},
        {"tol.symmetry", "1e-12"},
    };
    return keys;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Reader {
    const std::map<std::string, std::string>& kv;
    std::vector<std::string>& errors;

    double num(const std::string& key) const {
        const std::string& v = kv.at(key);
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            errors.push_back(key + ": expected a number, got '" + v + "'");
            return 0.0;
        }
    }
    int integer(const std::string& key) const {
        const double d = num(key);
        if (d != std::floor(d)) {
            errors.push_back(key + ": expected an integer, got '" + kv.at(key) + "'");
            return 0;
        }
        return static_cast<int>(d);
    }
    bool flag(const std::string& key) const {
        const std::string& v = kv.at(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        errors.push_back(key + ": expected true or false, got '" + v + "'");
        return false;
    }
    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(kv.at(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                errors.push_back(key + ": malformed list entry '" + item + "'");
            }
        }
        return out;
    }
    std::vector<int> int_list(const std::string& key) const {
        std::vector<int> out;
        for (double d : list(key)) {
            if (d != std::floor(d)) errors.push_back(key + ": entries must be integers");
            out.push_back(static_cast<int>(d));
        }
        return out;
    }
};

void check(bool ok, std::vector<std::string>& errors, const std::string& msg) {
    if (!ok) errors.push_back(msg);
}

bool increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

}  // namespace

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s{"hardy",     "poincare", "weight",         "mourre",
                                            "sqrt-mourre", "resolvent", "adjoint-bounds", "wave"};
    return s;
}

std::uint64_t config_hash(const std::map<std::string, std::string>& resolved) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [k, v] : resolved) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    return h;
}

ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    std::vector<std::string> errors;
    std::map<std::string, std::string> kv = schema();
    auto assign = [&](const std::string& raw, const std::string& where) {
        const auto eq = raw.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + ": expected key = value, got '" + raw + "'");
            return;
        }
        const std::string key = trim(raw.substr(0, eq));
        const std::string value = trim(raw.substr(eq + 1));
        if (!schema().count(key)) {
            errors.push_back(where + ": unknown key '" + key + "'");
            return;
        }
        kv[key] = value;
    };
    std::stringstream ss(text);
    std::string line;
    for (int ln = 1; std::getline(ss, line); ++ln) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        assign(line, "line " + std::to_string(ln));
    }
    for (const auto& o : overrides) assign(o, "override");

    ExperimentConfig c;
    const Reader rd{kv, errors};
    ManifoldModel& m = c.model;
    m.n = rd.integer("n");
    m.r_min = rd.num("r_min");
    m.rho = rd.num("rho");
    const std::string fam = kv["warp.family"];
    if (fam == "flat") m.warp.family = WarpFamily::flat;
    else if (fam == "decay") m.warp.family = WarpFamily::decay;
    else if (fam == "trapping") m.warp.family = WarpFamily::trapping;
    else errors.push_back("warp.family: expected flat, decay or trapping, got '" + fam + "'");
    m.warp.c = rd.num("warp.c");
    m.warp.center = rd.num("warp.center");
    m.warp.width = rd.num("warp.width");
    m.potential.v0 = rd.num("potential.v0");
    m.potential.rho_prime = rd.num("potential.rho_prime");
    const std::string ck = kv["cutoff.kind"];
    if (ck == "one") m.cutoff.identically_one = true;
    else if (ck != "collar") errors.push_back("cutoff.kind: expected collar or one, got '" + ck + "'");
    m.cutoff.r0 = rd.num("cutoff.r0");
    m.cutoff.r1 = rd.num("cutoff.r1");
    const std::string sk = kv["spectrum.kind"];
    if (sk == "sphere") {
        const int k_max = rd.integer("spectrum.k_max");
        if (k_max < 0 || m.n < 2) errors.push_back("spectrum.k_max must be >= 0");
        else m.angular_spectrum = sphere_spectrum(m.n, k_max);
    } else if (sk == "list") {
        // "lambda:multiplicity, ..."
        m.angular_spectrum.clear();
        std::stringstream ls(kv["spectrum.list"]);
        std::string item;
        while (std::getline(ls, item, ',')) {
            item = trim(item);
            const auto colon = item.find(':');
            try {
                AngularMode mode;
                mode.lambda = std::stod(item.substr(0, colon));
                mode.multiplicity = colon == std::string::npos ? 1 : std::stoi(item.substr(colon + 1));
                m.angular_spectrum.push_back(mode);
            } catch (const std::exception&) {
                errors.push_back("spectrum.list: malformed entry '" + item + "'");
            }
        }
    } else {
        errors.push_back("spectrum.kind: expected sphere or list, got '" + sk + "'");
    }
    try {
        m.validate();
    } catch (const ParameterError& e) {
        errors.push_back(e.what());
    }

    c.grid.q = rd.num("grid.q");
    c.grid.h = rd.num("grid.h");
    check(c.grid.q >= 8.0, errors, "grid.q must be >= 8 so spectral windows stay populated");
    check(c.grid.h > 0.0, errors, "grid.h must be positive");
    c.window = {rd.num("window.a"), rd.num("window.b"), 1.0};
    check(c.window.a > 0.0 && c.window.b > c.window.a, errors, "window must satisfy 0 < window.a < window.b");
    c.quad.levels = rd.integer("quad.levels");
    c.quad.order = rd.integer("quad.order");
    c.quad.scale = rd.num("quad.scale");
    try {
        c.quad.validate();
    } catch (const ParameterError& e) {
        errors.push_back(e.what());
    }

    c.mourre_H = rd.list("mourre.H");
    check(c.mourre_H.size() >= 4 && increasing(c.mourre_H) && c.mourre_H.front() > 0.0, errors,
          "mourre.H must hold at least 4 strictly increasing positive values");

    const double s_max = 0.5 * (m.n - 2);
    c.hardy_s = rd.list("hardy.s");
    for (double s : c.hardy_s)
        check(s < s_max, errors,
              "hardy.s = " + fmt(s) + ": s must satisfy s < (n-2)/2 = " + fmt(s_max) +
                  " (sharp Hardy hypothesis)");
    c.hardy_ratios = rd.list("hardy.ratios");
    check(!c.hardy_ratios.empty() && increasing(c.hardy_ratios) && c.hardy_ratios.front() >= 10.0, errors,
          "hardy.ratios must be increasing and >= 10");
    c.hardy_N = rd.integer("hardy.N");
    check(c.hardy_N >= 16, errors, "hardy.N must be >= 16");

    c.poincare_s = rd.num("poincare.s");
    check(c.poincare_s >= 0.0 && c.poincare_s < s_max, errors,
          "poincare.s must satisfy 0 <= s < (n-2)/2 = " + fmt(s_max) + " (sharp Poincare hypothesis)");
    c.poincare_r_max = rd.num("poincare.r_max");
    c.poincare_N = rd.integer("poincare.N");
    check(c.poincare_N >= 16, errors, "poincare.N must be >= 16");
    c.poincare_theta = rd.num("poincare.theta");
    check(c.poincare_theta >= 0.0 && c.poincare_theta <= 1.0, errors, "poincare.theta must lie in [0, 1]");
    c.poincare_samples = rd.integer("poincare.samples");
    check(c.poincare_samples >= 1, errors, "poincare.samples must be >= 1");

    c.weight.t0 = rd.num("weight.t0");
    c.weight.s = rd.num("weight.s");
    c.weight.eps = rd.num("weight.eps");
    try {
        c.weight.validate(m.n);
    } catch (const ParameterError& e) {
        errors.push_back(e.what());
    }
    c.weight_points = rd.integer("weight.points");
    c.weight_eps_steps = rd.integer("weight.eps_steps");
    c.weight_h = rd.num("weight.h");
    check(c.weight_points >= 2 && c.weight_eps_steps >= 1 && c.weight_h > 0.0, errors,
          "weight.points >= 2, weight.eps_steps >= 1 and weight.h > 0 required");

    c.resolvent_s = rd.list("resolvent.s");
    for (double s : c.resolvent_s)
        check(s >= 0.0 && s < 0.5, errors, "resolvent.s entries must lie in [0, 1/2)");
    c.resolvent_order = rd.int_list("resolvent.order");
    for (int o : c.resolvent_order) check(o == 0 || o == 1, errors, "resolvent.order entries must be 0 or 1");
    c.resolvent_w = {rd.num("resolvent.w_re"), rd.num("resolvent.w_im")};
    check(c.resolvent_w.imag() != 0.0 || c.resolvent_w.real() < 0.0, errors,
          "resolvent w must satisfy Im w != 0 or Re w < 0");
    c.resolvent_H = rd.list("resolvent.H");
    check(c.resolvent_H.size() >= 2 && increasing(c.resolvent_H) && c.resolvent_H.front() > 0.0, errors,
          "resolvent.H must hold at least 2 increasing positive values");
    c.resolvent_r_factor = rd.num("resolvent.r_factor");
    c.resolvent_h = rd.num("resolvent.h");
    check(c.resolvent_r_factor > 0.0 && c.resolvent_h > 0.0, errors, "resolvent.r_factor and resolvent.h must be positive");
    c.resolvent_negative_branch = rd.flag("resolvent.negative_branch");

    c.gain_sigma = rd.list("gain.sigma");
    for (double s : c.gain_sigma) check(s >= 0.0 && s < 1.0, errors, "gain.sigma entries must lie in [0, 1)");
    c.gain_order = rd.int_list("gain.order");
    for (int o : c.gain_order) check(o >= 0 && o <= 2, errors, "gain.order entries must lie in {0, 1, 2}");
    c.gain_H = rd.list("gain.H");
    check(c.gain_H.size() >= 2 && increasing(c.gain_H) && c.gain_H.front() > 0.0, errors,
          "gain.H must hold at least 2 increasing positive values");

    c.adjoint_mu = rd.list("adjoint.mu");
    for (double mu : c.adjoint_mu) check(mu >= 0.0 && mu <= 1.0, errors, "adjoint.mu entries must lie in [0, 1]");
    c.adjoint_H = rd.list("adjoint.H");
    check(c.adjoint_H.size() >= 2 && increasing(c.adjoint_H) && c.adjoint_H.front() > 0.0, errors,
          "adjoint.H must hold at least 2 increasing positive values");

    c.wave_mu = rd.list("wave.mu");
    for (double mu : c.wave_mu) check(mu > 0.0 && mu <= 1.0, errors, "wave.mu entries must lie in (0, 1]");
    c.wave_eps = rd.num("wave.eps");
    check(c.wave_eps >= 0.0, errors, "wave.eps must be >= 0");
    c.wave_T = rd.list("wave.T");
    check(c.wave_T.size() >= 2 && increasing(c.wave_T) && c.wave_T.front() > 0.0, errors,
          "wave.T must hold at least 2 increasing positive values");
    c.wave_r_max = rd.num("wave.r_max");
    c.wave_h = rd.num("wave.h");
    c.wave_dt = rd.num("wave.dt");
    c.wave_margin = rd.num("wave.margin");
    c.wave_data.r_a = rd.num("wave.r_a");
    c.wave_data.r_b = rd.num("wave.r_b");
    check(c.wave_h > 0.0 && c.wave_dt > 0.0 && c.wave_margin >= 0.0, errors,
          "wave.h, wave.dt must be positive and wave.margin >= 0");
    check(c.wave_data.r_a > m.r_min && c.wave_data.r_b > c.wave_data.r_a, errors,
          "wave bump must satisfy r_min < wave.r_a < wave.r_b");
    if (!c.wave_T.empty())
        check(c.wave_r_max >= c.wave_data.r_b + c.wave_T.back() + c.wave_margin, errors,
              "wave.r_max must be >= wave.r_b + max(wave.T) + wave.margin (finite propagation speed)");
    c.wave_trapping_control = rd.flag("wave.trapping_control");

    c.output_dir = kv["output.dir"];
    check(!c.output_dir.empty(), errors, "output.dir must not be empty");

    Tolerances& t = c.tol;
    t.fit = rd.num("tol.fit");
    t.r2 = rd.num("tol.r2");
    t.hardy_band = rd.num("tol.hardy_band");
    t.mourre_c = rd.num("tol.mourre_c");
    t.mourre_slope = rd.num("tol.mourre_slope");
    t.sqrt_c = rd.num("tol.sqrt_c");
    t.quad = rd.num("tol.quad");
    t.identity = rd.num("tol.identity");
    t.adjoint_gap = rd.num("tol.adjoint_gap");
    t.ratio = rd.num("tol.ratio");
    t.energy = rd.num("tol.energy");
    t.plateau = rd.num("tol.plateau");
    t.symmetry = rd.num("tol.symmetry");

    if (!errors.empty()) {
        std::ostringstream os;
        os << errors.size() << " configuration error(s):";
        for (const auto& e : errors) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
    c.resolved = kv;
    c.hash = config_hash(kv);
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

}  // namespace scatspec
