#include "scatspec/wave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scatspec/errors.hpp"

namespace scatspec {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double W_at(const ManifoldModel& model, double r) { return std::pow(eval_warp(model, r).value, model.n - 1); }

// Node and cell contributions of x^{2 mu}(|u_t|^2 + |u_r|^2 + lambda u^2/w^2 [+ V u^2]) restricted by `keep`.
template <class Keep>
double density_sum(const ManifoldModel& model, const WaveState& state, const WaveField& field, double mu,
                   bool with_potential, Keep keep) {
    const RadialGrid& g = state.grid;
    const int k = g.interior();
    double total = 0.0;
    for (std::size_t q = 0; q < state.modes.size(); ++q) {
        const ModeState& ms = state.modes[q];
        const Eigen::VectorXd& u = field.u[q];
        const Eigen::VectorXd& ut = field.ut[q];
        for (int i = 0; i < k; ++i) {
            const double r = g.r[i + 1];
            if (!keep(r)) continue;
            const double wx = std::pow(model.x(r), 2.0 * mu);
            double pot = ms.lambda / (ms.w[i] * ms.w[i]);
            if (with_potential) pot += eval_potential(model, r).value;
            total += g.m[i + 1] * wx * (ut[i] * ut[i] + pot * u[i] * u[i]);
        }
        for (int j = 0; j + 1 < g.N; ++j) {
            const double rh = g.r[j] + 0.5 * g.h;
            if (!keep(rh)) continue;
            const double a = (j + 1 <= k) ? u[j] : 0.0;      // node j + 1
            const double b = (j >= 1) ? u[j - 1] : 0.0;      // node j
            const double du = (a - b) / g.h;
            total += W_at(model, rh) * g.h * std::pow(model.x(rh), 2.0 * mu) * du * du;
        }
    }
    return total;
}

}  // namespace

Eigen::VectorXd bump_profile(const RadialGrid& grid, double r_a, double r_b) {
    Eigen::VectorXd u(grid.interior());
    for (int i = 0; i < grid.interior(); ++i) {
        const double t = (grid.r[i + 1] - r_a) / (r_b - r_a);
        u[i] = (t > 0.0 && t < 1.0) ? std::exp(4.0 - 1.0 / (t * (1.0 - t))) : 0.0;
    }
    return u;
}

WaveState synthesize(const ManifoldModel& model, const RadialGrid& grid, const std::vector<Eigen::VectorXd>& u0,
                     const std::vector<Eigen::VectorXd>& u1) {
    const auto& spec = model.angular_spectrum;
    if (u0.size() != spec.size() || u1.size() != spec.size())
        throw DomainError("synthesize: one data vector per angular mode required");
    WaveState st;
    st.grid = grid;
    const std::vector<double> r = grid.interior_nodes();
    for (std::size_t q = 0; q < spec.size(); ++q) {
        if (u0[q].size() != grid.interior() || u1[q].size() != grid.interior())
            throw DomainError("synthesize: data size does not match the grid");
        ModeState ms;
        ms.lambda = spec[q].lambda;
        ms.sd = spectral_data(build_mode(model, grid, spec[q].lambda, spec[q].multiplicity));
        const Eigen::MatrixXd EtD = ms.sd.vectors.transpose() * as_vec(ms.sd.m).asDiagonal();
        ms.c = EtD * u0[q];
        ms.d = EtD * u1[q];
        for (double ri : r) ms.w.push_back(eval_warp(model, ri).value);
        st.modes.push_back(std::move(ms));
    }
    return st;
}

WaveState synthesize_initial_data(const ManifoldModel& model, const RadialGrid& grid, const BumpSpec& spec) {
    if (!(spec.r_a > grid.r_min && spec.r_b < grid.r_max && spec.r_a < spec.r_b))
        throw ResolutionError("synthesize_initial_data: bump must lie inside (r_min, r_max)");
    if (spec.r_b - spec.r_a < 4.0 * grid.h) {
        std::ostringstream os;
        os << "synthesize_initial_data: bump width " << spec.r_b - spec.r_a << " is below 4h = " << 4.0 * grid.h;
        throw ResolutionError(os.str());
    }
    const std::size_t modes = model.angular_spectrum.size();
    if (!spec.mode_weights.empty() && spec.mode_weights.size() != modes)
        throw ParameterError("synthesize_initial_data: mode_weights must match the angular spectrum");
    const Eigen::VectorXd b = bump_profile(grid, spec.r_a, spec.r_b);
    std::vector<Eigen::VectorXd> u0, u1;
    for (std::size_t q = 0; q < modes; ++q) {
        const double wq = spec.mode_weights.empty() ? 1.0 : spec.mode_weights[q];
        u0.push_back(wq * b);
        u1.push_back(spec.velocity_weight * wq * b);
    }
    return synthesize(model, grid, u0, u1);
}

double reconstruction_error(const WaveState& state, const std::vector<Eigen::VectorXd>& u0) {
    double worst = 0.0;
    for (std::size_t q = 0; q < state.modes.size(); ++q) {
        const ModeState& ms = state.modes[q];
        const double nu = weighted_norm(u0[q], ms.sd.m);
        if (nu == 0.0) continue;
        worst = std::max(worst, weighted_norm(u0[q] - ms.sd.vectors * ms.c, ms.sd.m) / nu);
    }
    return worst;
}

WaveField evolve(const WaveState& state, double t) {
    WaveField f;
    f.t = t;
    for (const ModeState& ms : state.modes) {
        const Eigen::Index k = ms.c.size();
        Eigen::VectorXd a(k), b(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const double om = std::sqrt(ms.sd.values[j]);
            const double cs = std::cos(om * t), sn = std::sin(om * t);
            a[j] = ms.c[j] * cs + ms.d[j] * sn / om;
            b[j] = -ms.c[j] * om * sn + ms.d[j] * cs;
        }
        f.u.push_back(ms.sd.vectors * a);
        f.ut.push_back(ms.sd.vectors * b);
    }
    return f;
}

double total_energy(const ManifoldModel& model, const WaveState& state, const WaveField& field) {
    double e = 0.0;
    for (std::size_t q = 0; q < state.modes.size(); ++q) {
        const ModeState& ms = state.modes[q];
        const Tridiag P = assemble_P(model, state.grid, ms.lambda);
        const Eigen::VectorXd Pu = P.apply(field.u[q]);
        const auto m = as_vec(ms.sd.m);
        e += (m.array() * field.ut[q].array().square()).sum() + (m.array() * Pu.array() * field.u[q].array()).sum();
    }
    return e;
}

double weighted_energy(const ManifoldModel& model, const WaveState& state, const WaveField& field, double mu) {
    if (!(mu > 0.0 && mu <= 1.0)) throw ParameterError("weighted_energy: mu must lie in (0, 1]");
    return density_sum(model, state, field, mu, false, [](double) { return true; });
}

double energy_outside(const ManifoldModel& model, const WaveState& state, const WaveField& field, double lo,
                      double hi) {
    return density_sum(model, state, field, 0.0, true, [lo, hi](double r) { return r < lo || r > hi; });
}

DecayFit decay_rate_fit(const ManifoldModel& model, const RadialGrid& grid, double mu, double eps,
                        const std::vector<double>& T_list, const BumpSpec& data, double dt, double margin) {
    if (T_list.empty()) throw ParameterError("decay_rate_fit: empty T schedule");
    const double T_max = *std::max_element(T_list.begin(), T_list.end());
    if (grid.r_max < data.r_b + T_max + margin) {
        std::ostringstream os;
        os << "decay_rate_fit: reflected-wave contamination, r_max = " << grid.r_max << " < r_b + T_max + margin = "
           << data.r_b + T_max + margin;
        throw ResolutionError(os.str());
    }
    return decay_rate_fit(model, synthesize_initial_data(model, grid, data), mu, eps, T_list, data.r_b, dt, margin);
}

DecayFit decay_rate_fit(const ManifoldModel& model, const WaveState& state, double mu, double eps,
                        const std::vector<double>& T_list, double r_b, double dt, double margin) {
    if (!(mu > 0.0 && mu <= 1.0)) throw ParameterError("decay_rate_fit: mu must lie in (0, 1]");
    if (!(eps >= 0.0)) throw ParameterError("decay_rate_fit: eps must be >= 0");
    if (!(dt > 0.0)) throw ParameterError("decay_rate_fit: dt must be positive");
    if (T_list.empty()) throw ParameterError("decay_rate_fit: empty T schedule");
    const double T_max = *std::max_element(T_list.begin(), T_list.end());
    if (state.grid.r_max < r_b + T_max + margin)
        throw ResolutionError("decay_rate_fit: reflected-wave contamination, r_max < r_b + T_max + margin");
    auto steps_of = [dt](double T) {
        const double s = T / dt;
        const long k = std::lround(s);
        if (!(T > 0.0) || std::abs(s - k) > 1e-9 * std::max(1.0, s) || k % 2 != 0) {
            std::ostringstream os;
            os << "decay_rate_fit: T = " << T << " is not an even multiple of dt = " << dt;
            throw ParameterError(os.str());
        }
        return k;
    };
    for (double T : T_list) steps_of(T);
    const long K = steps_of(T_max);
    const long K_half = steps_of(0.5 * T_max);

    DecayFit out;
    out.mu = mu;
    out.eps = eps;
    out.rate_exponent = mu <= 0.5 ? 1.0 - 2.0 * mu - 2.0 * eps : 0.0;
    double E0 = 0.0;
    for (long s = 0; s <= K; ++s) {
        const double t = s * dt;
        const WaveField f = evolve(state, t);
        const double e = total_energy(model, state, f);
        if (s == 0) E0 = e;
        out.t.push_back(t);
        out.density.push_back(weighted_energy(model, state, f, mu));
        out.energy.push_back(e);
        if (E0 > 0.0) out.energy_drift = std::max(out.energy_drift, std::abs(e - E0) / E0);
    }
    auto simpson = [&](long k) {
        double acc = out.density[0] + out.density[k];
        for (long s = 1; s < k; ++s) acc += (s % 2 ? 4.0 : 2.0) * out.density[s];
        return acc * dt / 3.0;
    };
    std::vector<double> Ts = T_list;
    std::sort(Ts.begin(), Ts.end());
    for (double T : Ts) {
        out.T.push_back(T);
        out.Q.push_back(simpson(steps_of(T)));
    }
    const double q_half = simpson(K_half);
    out.plateau_ratio = q_half > 0.0 ? out.Q.back() / q_half : 0.0;
    if (out.T.size() >= 2) {
        out.fit = fit_loglog(out.T, out.Q);
        out.fitted = true;
    }
    return out;
}

ManifoldModel trapping_control_model(const ManifoldModel& base) {
    ManifoldModel m = base;
    m.warp.family = WarpFamily::trapping;
    m.warp.c = 2.0;
    m.warp.center = 3.0;
    m.warp.width = 0.7;
    m.angular_spectrum = {{0.0, 1}, {110.0, 1}};
    return m;
}

BumpSpec trapping_control_data(const BumpSpec& base) {
    BumpSpec b = base;
    b.mode_weights = {0.0, 1.0};
    return b;
}

}  // namespace scatspec
