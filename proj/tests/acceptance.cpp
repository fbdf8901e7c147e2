// Acceptance criteria: `acceptance <id>` prints one PASS/FAIL line and exits 0 on pass.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scatspec/config.hpp"
#include "scatspec/errors.hpp"
#include "scatspec/inequalities.hpp"
#include "scatspec/linalg.hpp"
#include "scatspec/mourre.hpp"
#include "scatspec/quadrature.hpp"
#include "scatspec/report.hpp"
#include "scatspec/suites.hpp"
#include "scatspec/wave.hpp"

using namespace scatspec;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ManifoldModel perturbed_n3() {
    ManifoldModel m;
    m.n = 3;
    m.warp = {WarpFamily::decay, 0.2};
    m.rho = 1.0;
    m.potential = {0.5, 1.0};
    m.angular_spectrum = sphere_spectrum(3, 2);
    return m;
}

ManifoldModel perturbed_n5() {
    ManifoldModel m = perturbed_n3();
    m.n = 5;
    m.angular_spectrum = sphere_spectrum(5, 1);
    return m;
}

const SpectralWindow kI{0.5, 2.0, 1.0};

// 1. sharp Hardy constant
void crit_hardy(Outcome& o) {
    struct Case {
        int n;
        double s;
    };
    for (const Case c : {Case{3, 0.0}, Case{4, 0.5}, Case{5, 0.0}, Case{5, 1.0}}) {
        std::vector<double> k;
        for (double ratio : {1e2, 1e3, 1e4}) k.push_back(hardy_rayleigh_min(c.n, c.s, ratio, 4096).kappa);
        const double sharp = 0.25 * (c.n - 2 - 2 * c.s) * (c.n - 2 - 2 * c.s);
        o.detail << " (n=" << c.n << ",s=" << c.s << ") kappa=" << g6(k.back()) << " sharp=" << g6(sharp);
        o.require(k.back() >= sharp && k.back() <= 1.05 * sharp, "kappa in [sharp, 1.05 sharp] for n=" +
                                                                     std::to_string(c.n));
        o.require(k[0] >= k[1] && k[1] >= k[2] && k[2] >= sharp, "monotone toward sharp");
    }
}

// 2. flat-cone eigenvalue oracle
void crit_flat_cone(Outcome& o) {
    ManifoldModel m;
    m.cutoff.identically_one = true;
    const double R = 11.0;
    auto errors = [&](int N) {
        const RadialGrid g = build_grid(m, R, N);
        const auto mu = eigvals_sym_tridiag(symmetrize(assemble_P(m, g, 0.0), g.interior_weights()));
        std::vector<double> e;
        for (int j = 1; j <= 10; ++j) {
            const double ex = oracle::dirichlet_eigenvalue(j, R - 1.0);
            e.push_back(std::abs(mu[j - 1] - ex) / ex);
        }
        return e;
    };
    const auto e1 = errors(1024), e2 = errors(2048);
    double worst = 0.0, rlo = 1e300, rhi = 0.0;
    for (int j = 0; j < 10; ++j) {
        worst = std::max(worst, e2[j]);
        rlo = std::min(rlo, e1[j] / e2[j]);
        rhi = std::max(rhi, e1[j] / e2[j]);
    }
    o.detail << " max rel err(N=2048)=" << g6(worst) << " halving ratio in [" << g6(rlo) << ", " << g6(rhi) << "]";
    o.require(worst <= 1e-3, "relative error <= 1e-3");
    o.require(rlo >= 3.5 && rhi <= 4.5, "ratio in [3.5, 4.5]");
}

// 3. exact-cone commutator identity on window subspaces
double window_commutator_defect(int N) {
    ManifoldModel m;
    m.cutoff.identically_one = true;
    const RadialGrid g = build_grid(m, 21.0, N);
    const ModeOperator op = build_mode(m, g, 0.0);
    const SpectralData sd = spectral_data(op, kI);
    // window vectors tapered away from the Dirichlet ends, then re-orthonormalized
    Eigen::MatrixXd V = sd.vectors;
    for (int i = 0; i < V.rows(); ++i) {
        const double r = op.r[i];
        V.row(i) *= smooth_step((r - 1.0) / 2.0).value * smooth_step((21.0 - r) / 2.0).value;
    }
    const Eigen::VectorXd w = Eigen::VectorXd::Map(op.m.data(), op.m.size());
    V = weighted_orthonormalize(V, w);
    const SparseMat P = to_sparse(op.P);
    const SparseMat K = commutator_K(P, op.G, op.m);
    const Eigen::MatrixXd DV = w.asDiagonal() * V;
    const Eigen::MatrixXd KV = K * V, PV = P * V;
    const Eigen::MatrixXd d = DV.transpose() * (KV - PV);
    const Eigen::MatrixXd p = DV.transpose() * PV;
    return spectral_norm(Eigen::MatrixXd(0.5 * (d + d.transpose()))) / spectral_norm(Eigen::MatrixXd(0.5 * (p + p.transpose())));
}

void crit_exact_commutator(Outcome& o) {
    const double d1 = window_commutator_defect(1024), d2 = window_commutator_defect(2048),
                 d3 = window_commutator_defect(4096);
    o.detail << " defect N=1024/2048/4096: " << g6(d1) << " " << g6(d2) << " " << g6(d3) << " ratios " << g6(d1 / d2)
             << " " << g6(d2 / d3);
    o.require(d1 / d2 >= 3.5 && d2 / d3 >= 3.5, "second-order decrease");
    o.require(d3 <= 1e-3, "defect <= 1e-3 at N = 4096");
}

// 4. H^2 P Mourre scan
void crit_mourre(Outcome& o) {
    const MourreScan s = scan_H(perturbed_n3(), kI, {4, 8, 16, 32});
    for (const auto& p : s.points) o.detail << " c(" << p.H << ")=" << g6(p.c);
    o.detail << " H0=" << (s.H0_found ? g6(s.H0) : "none") << " slope=" << g6(s.fit.slope) << " R2=" << g6(s.fit.r2);
    o.require(s.H0_found && s.H0 <= 32.0, "H0 located");
    for (const auto& p : s.points)
        if (s.H0_found && p.H >= s.H0) o.require(!p.empty && p.c >= 0.25, "c(H) >= 0.25 at H = " + g6(p.H));
    o.require(s.fitted && s.fit.r2 >= 0.9, "conclusive fit");
    o.require(s.fit.slope >= -1.3 && s.fit.slope <= -0.7, "slope within -rho +- 0.3 rho");
}

// 5. H sqrt(P) Mourre
void crit_sqrt_mourre(Outcome& o) {
    const ManifoldModel m = perturbed_n3();
    const MourreScan s = scan_H(m, kI, {4, 8, 16, 32});
    double worst_quad = 0.0;
    for (double H : {4.0, 8.0, 16.0, 32.0}) {
        const SqrtMourreResult r = sqrt_mourre_min(m, SpectralWindow{kI.a, kI.b, H});
        o.detail << " c_sqrt(" << H << ")=" << g6(r.c_sqrt);
        worst_quad = std::max(worst_quad, r.quad_vs_eigen);
        if (s.H0_found && H >= s.H0) o.require(!r.empty && r.c_sqrt >= 0.1, "c_sqrt >= 0.1 at H = " + g6(H));
    }
    o.detail << " quad_vs_eigen=" << g6(worst_quad);
    o.require(s.H0_found, "H0 located");
    o.require(worst_quad <= 1e-6, "quadrature agrees with eigendecomposition to 1e-6");
}

// 6. sqrt P quadrature on a full flat-cone mode
void crit_sqrt_quadrature(Outcome& o) {
    ManifoldModel m;
    m.cutoff.identically_one = true;
    const RadialGrid g = build_grid(m, 51.0, 512);
    const ModeOperator op = build_mode(m, g, 0.0);
    const Eigen::MatrixXd root = apply_spectral_function(spectral_data(op), [](double x) { return std::sqrt(x); });
    const Eigen::VectorXd sq = Eigen::VectorXd::Map(op.m.data(), op.m.size()).cwiseSqrt();
    auto unweighted = [&](const Eigen::MatrixXd& a) { return Eigen::MatrixXd(sq.asDiagonal() * a * sq.cwiseInverse().asDiagonal()); };
    const double nroot = spectral_norm(unweighted(root));
    std::vector<double> err;
    const QuadSpec def;
    for (int levels : {2, 4, 6, def.levels}) {
        const Eigen::MatrixXd q = sqrt_via_quadrature(op.P, op.m, QuadSpec{levels, def.order, def.scale});
        err.push_back(spectral_norm(unweighted(q - root)) / nroot);
        o.detail << " levels=" << levels << ":" << g6(err.back());
    }
    o.require(err.back() <= 1e-6, "error <= 1e-6 at default nodes");
    // nonincreasing until the roundoff floor
    for (std::size_t k = 1; k < err.size(); ++k)
        o.require(err[k] <= err[k - 1] || err[k] < 1e-12, "monotone in node count");
}

// 7. resolvent weight gain
void crit_resolvent(Outcome& o) {
    const ManifoldModel m = perturbed_n5();
    const std::vector<double> H{4, 8, 16, 32};
    for (double s : {0.0, 0.4}) {
        for (int order : {0, 1}) {
            const ResolventGain r = resolvent_gain_fit(m, order, s, {0.0, 1.0}, H);
            o.detail << " s=" << s << " L" << order << " slope=" << g6(r.fit.slope);
            o.require(r.fitted && std::abs(r.fit.slope + 1.0 + s) <= 0.15,
                      "slope within 0.15 of -(1+s) for s=" + g6(s) + " order " + std::to_string(order));
        }
        // negative real part: C from the w = i norms, then the Re w < 0 branch near w = -1
        double C = 0.0;
        for (double h : H) C = std::max(C, resolvent_weighted_norm(m, 0, s, {0.0, 1.0}, h) * std::pow(h, 1.0 + s) / 2.0);
        double lo = 1e300, hi = 0.0;
        for (double h : H) {
            for (std::complex<double> w : {std::complex<double>{-1.0, 0.0}, {-1.0, 0.01}, {-1.0, 0.1}}) {
                const double v = resolvent_weighted_norm(m, 0, s, w, h);
                const double bound = 2.0 * C * std::pow(h, -1.0 - s) * std::pow(std::abs(w), -(1.0 - s) / 2.0);
                o.require(v <= bound, "Re w < 0 branch bound at H=" + g6(h));
                lo = std::min(lo, v * std::pow(h, 1.0 + s));
                hi = std::max(hi, v * std::pow(h, 1.0 + s));
            }
        }
        o.detail << " s=" << s << " w=-1 scaled norms in [" << g6(lo) << ", " << g6(hi) << "]";
        o.require(hi <= 2.0 * lo, "uniform in Im w");
    }
}

// 8. localized weighted pairing gain
void crit_gain(Outcome& o) {
    const ManifoldModel m = perturbed_n5();
    for (double sigma : {0.0, 0.5}) {
        for (int order : {0, 1, 2}) {
            const GainFit g = weighted_gain_fit(m, kI, sigma, order, {4, 8, 16, 32});
            o.detail << " sigma=" << sigma << " L" << order << " slope=" << g6(g.fit.slope);
            o.require(g.fitted && std::abs(g.fit.slope + 2.0 + sigma) <= 0.15,
                      "slope within 0.15 of -2-sigma for sigma=" + g6(sigma) + " order " + std::to_string(order));
        }
    }
}

// 9. uniform adjoint bounds and the conjugate-projector lemma
void crit_adjoint(Outcome& o) {
    const ManifoldModel m = perturbed_n3();
    const std::vector<double> H{8, 16, 32, 64};
    const AdjointBounds b = adjoint_bounds_check(m, kI, {0.5, 1.0}, H);
    o.detail << " ad1 ratio=" << g6(b.ratio_ad1) << " ad2 ratio=" << g6(b.ratio_ad2);
    o.require(b.ratio_ad1 <= 2.0 && b.ratio_ad2 <= 2.0, "ad1/ad2 ratio <= 2");
    for (std::size_t k = 0; k < b.mu.size(); ++k) {
        const double mu = b.mu[k];
        o.detail << " mu=" << mu << " slopes " << g6(b.fit_mourre1[k].slope) << " " << g6(b.fit_mourre2[k].slope);
        o.require(std::abs(b.fit_mourre1[k].slope + mu) <= 0.15, "mourre1 slope for mu=" + g6(mu));
        o.require(std::abs(b.fit_mourre2[k].slope + mu) <= 0.15, "mourre2 slope for mu=" + g6(mu));
    }
    const ConjugateProjector c = conjugate_projector_norms(m, kI, H);
    o.detail << " projector ratio=" << g6(c.max_ratio) << " adjoint gap=" << g6(c.max_adjoint_gap);
    o.require(c.max_ratio <= 2.0, "conjugate projector ratio <= 2");
    o.require(c.max_adjoint_gap <= 1e-8, "adjoint pair norms equal");
}

// 10. wave decay rates
void crit_wave(Outcome& o) {
    ManifoldModel m;
    m.angular_spectrum = sphere_spectrum(3, 2);
    const RadialGrid g = build_grid(m, 64.0, static_cast<int>(std::lround(63.0 / 0.05)) + 1);
    const std::vector<double> T{8, 16, 32, 48};
    const WaveState st = synthesize_initial_data(m, g, BumpSpec{});
    double drift = 0.0;
    for (double mu : {1.0, 0.25, 0.5}) {
        const DecayFit d = decay_rate_fit(m, st, mu, 0.0, T, 4.0);
        drift = std::max(drift, d.energy_drift);
        if (mu > 0.5) {
            o.detail << " mu=1 plateau=" << g6(d.plateau_ratio);
            o.require(d.plateau_ratio <= 1.1, "mu=1 plateau <= 1.1");
        } else {
            const double bound = 1.0 - 2.0 * mu + 0.15;
            o.detail << " mu=" << mu << " slope=" << g6(d.fit.slope);
            o.require(d.fitted && d.fit.slope <= bound, "mu=" + g6(mu) + " slope <= " + g6(bound));
        }
    }
    o.detail << " energy drift=" << g6(drift);
    o.require(drift <= 1e-8, "energy conservation");
    const ManifoldModel tm = trapping_control_model(m);
    const RadialGrid tg = build_grid(tm, 64.0, g.N);
    const DecayFit t = decay_rate_fit(tm, tg, 0.25, 0.0, T, trapping_control_data(BumpSpec{}));
    o.detail << " trapping mu=0.25 slope=" << g6(t.fit.slope);
    o.require(t.fitted && t.fit.slope > 0.65, "trapping control violates the mu=0.25 bound");
}

// 11. structural properties
void crit_structural(Outcome& o) {
    const ManifoldModel m = perturbed_n3();
    const RadialGrid g = window_grid(m, 4.0, kI.a, 8.3, 0.1);
    const auto w = g.interior_weights();
    double sa = 0.0, proj = 0.0;
    for (const auto& mode : m.angular_spectrum) {
        const ModeOperator op = build_mode(m, g, mode.lambda, mode.multiplicity);
        const SparseMat P = to_sparse(op.P);
        sa = std::max({sa, selfadjoint_residual(P, w), antiselfadjoint_residual(conjugate_B(op.G, w), w),
                       selfadjoint_residual(commutator_K(P, op.G, w), w),
                       selfadjoint_residual(to_sparse(assemble_commutator(m, g, mode.lambda)), w)});
        const SpectralData sd = spectral_data(op);
        const Eigen::MatrixXd Pi = projector(sd, SpectralWindow{kI.a, kI.b, 4.0});
        proj = std::max(proj, (Pi * Pi - Pi).cwiseAbs().maxCoeff());
    }
    o.detail << " self-adjointness residual=" << g6(sa) << " idempotency=" << g6(proj);
    o.require(sa <= 1e-14, "self-adjointness at machine precision");
    o.require(proj <= 1e-10, "projector idempotency");

    const ExperimentConfig c = parse_config("hardy.N = 256\nhardy.ratios = 100, 1000\n");
    const auto a = to_json(run_suites(c, {"hardy", "weight"}));
    const auto b = to_json(run_suites(c, {"hardy", "weight"}));
    o.require(strip_timing(a).dump() == strip_timing(b).dump(), "identical reports for identical configs");
    o.require(validate_report(a).empty(), "report validates");
    bool rejected = false;
    try {
        parse_config("rmax = 64\n");
    } catch (const ConfigError& e) {
        rejected = std::string(e.what()).find("rmax") != std::string::npos;
    }
    o.require(rejected, "unknown key rejected");
    o.detail << " determinism and strict schema checked";
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"sharp Hardy constant", crit_hardy},
        {"flat-cone eigenvalue oracle", crit_flat_cone},
        {"exact-cone commutator identity", crit_exact_commutator},
        {"H^2 P Mourre scan", crit_mourre},
        {"H sqrt(P) Mourre", crit_sqrt_mourre},
        {"sqrt(P) functional-calculus quadrature", crit_sqrt_quadrature},
        {"resolvent weight gain", crit_resolvent},
        {"localized weighted pairing gain", crit_gain},
        {"uniform adjoint bounds and conjugate projector", crit_adjoint},
        {"wave decay rates", crit_wave},
        {"structural properties", crit_structural},
    };
    if (argc != 2) {
        std::cerr << "usage: acceptance <1.." << criteria.size() << ">\n";
        return 2;
    }
    const int id = std::atoi(argv[1]);
    if (id < 1 || id > static_cast<int>(criteria.size())) {
        std::cerr << "unknown criterion " << argv[1] << "\n";
        return 2;
    }
    Outcome o;
    try {
        criteria[id - 1].second(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [error: " << e.what() << "]";
    }
    std::cout << "criterion " << id << " (" << criteria[id - 1].first << "): " << (o.pass ? "PASS" : "FAIL") << " "
              << o.detail.str() << "\n";
    return o.pass ? 0 : 1;
}
