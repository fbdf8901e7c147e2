#include "scatspec/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "scatspec/errors.hpp"
#include "scatspec/inequalities.hpp"
#include "scatspec/linalg.hpp"
#include "scatspec/positivity.hpp"
#include "scatspec/spectral.hpp"

namespace scatspec {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRoundoffFloor = 1e-12;

ojson jnum(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

ojson jlist(const std::vector<double>& v) {
    ojson a = ojson::array();
    for (double x : v) a.push_back(jnum(x));
    return a;
}

std::string tag(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

int nodes_for(double r_min, double r_max, double h) {
    return static_cast<int>(std::lround((r_max - r_min) / h)) + 1;
}

// Smallest scheduled H beyond which every value is >= bound.
double locate_H0(const std::vector<double>& H, const std::vector<double>& c, double bound, bool& found) {
    found = false;
    for (std::size_t k = 0; k < H.size(); ++k) {
        if (std::all_of(c.begin() + static_cast<long>(k), c.end(), [bound](double v) { return v >= bound; })) {
            found = true;
            return H[k];
        }
    }
    return 0.0;
}

void hardy_suite(const ExperimentConfig& cfg, SuiteBlock& b) {
    const int n = cfg.model.n;
    b.inputs = {{"n", n}, {"s", jlist(cfg.hardy_s)}, {"ratios", jlist(cfg.hardy_ratios)}, {"N", cfg.hardy_N}};
    Curve curve{"hardy", {"s", "ratio", "kappa", "sharp", "continuum"}, {}};
    ojson cases = ojson::array();
    for (double s : cfg.hardy_s) {
        std::vector<double> kappa;
        double sharp = 0.0;
        for (double R : cfg.hardy_ratios) {
            const HardyResult r = hardy_rayleigh_min(n, s, R, cfg.hardy_N);
            sharp = r.sharp;
            kappa.push_back(r.kappa);
            const double cont = r.sharp + std::pow(std::numbers::pi / std::log(R), 2);
            curve.rows.push_back({s, R, r.kappa, r.sharp, cont});
        }
        cases.push_back({{"s", s}, {"sharp", sharp}, {"kappa", jlist(kappa)}});
        b.checks.push_back(check_in("hardy kappa s=" + tag(s) + " at ratio " + tag(cfg.hardy_ratios.back()),
                                    kappa.back(), sharp, sharp * (1.0 + cfg.tol.hardy_band), "tol.hardy_band",
                                    cfg.tol.hardy_band));
        bool monotone = true;
        for (std::size_t k = 1; k < kappa.size(); ++k)
            if (!(kappa[k] <= kappa[k - 1] && kappa[k] >= sharp)) monotone = false;
        b.checks.push_back(check_true("hardy kappa s=" + tag(s) + " decreases toward sharp", monotone));
    }
    b.values["cases"] = cases;
    b.curves.push_back(std::move(curve));
}

void poincare_suite(const ExperimentConfig& cfg, SuiteBlock& b) {
    const ManifoldModel& m = cfg.model;
    const RadialGrid grid = build_grid(m, cfg.poincare_r_max, cfg.poincare_N);
    const double s = cfg.poincare_s;
    const double sharp = std::pow(0.5 * (m.n - 2 - 2 * s), 2);
    b.inputs = {{"s", s}, {"r_max", cfg.poincare_r_max}, {"N", cfg.poincare_N}, {"theta", cfg.poincare_theta}};
    const double kappa = poincare_min(m, grid, s);
    b.values["kappa"] = jnum(kappa);
    b.values["sharp"] = sharp;
    const bool flat = m.warp.family == WarpFamily::flat;
    if (flat) b.checks.push_back(check_ge("poincare kappa >= sharp constant (flat)", kappa, sharp, "", 0.0));
    else b.checks.push_back(check_ge("poincare kappa > 0", kappa, std::numeric_limits<double>::min(), "", 0.0));

    const double l = 0.5 * m.n - s;
    if (l > 1.0) {
        const double kl = poincare_lemma_min(m, grid, l, l - 0.1);
        b.values["lemma"] = {{"l", l}, {"l_prime", l - 0.1}, {"kappa", jnum(kl)}};
        b.checks.push_back(check_ge("poincare lemma kappa > 0", kl, std::numeric_limits<double>::min(), "", 0.0));
    }

    const auto samples = random_bumps(grid, cfg.poincare_samples, cfg.hash ^ 0x9e3779b97f4a7c15ULL);
    const double ratio = interpolation_check(m, grid, cfg.poincare_theta, samples);
    b.values["interpolation_ratio"] = jnum(ratio);
    if (flat) {
        // Hardy ||x u|| <= 2 r_min/(n-2) ||grad u|| and Holder
        const double bound = std::pow(2.0 * m.r_min / (m.n - 2), cfg.poincare_theta);
        b.checks.push_back(check_le("interpolation ratio <= Hardy-Holder bound", ratio, bound, "", 0.0));
    } else {
        b.checks.push_back(check_true("interpolation ratio finite", std::isfinite(ratio)));
    }
    if (m.n >= 5) {
        const double vb = vb_lower_bound(m, grid, cfg.hash);
        b.values["vb_lower_bound"] = jnum(vb);
        b.checks.push_back(check_ge("vb lower bound > 0", vb, std::numeric_limits<double>::min(), "", 0.0));
    }
}

void weight_suite(const ExperimentConfig& cfg, SuiteBlock& b) {
    const ManifoldModel& m = cfg.model;
    const WeightFunction& w = cfg.weight;
    b.inputs = {{"t0", w.t0}, {"s", w.s}, {"eps", w.eps}, {"points", cfg.weight_points}, {"h", cfg.weight_h}};
    std::vector<double> t(cfg.weight_points);
    for (int k = 0; k < cfg.weight_points; ++k) t[k] = w.t0 * k / cfg.weight_points;
    const WeightPositivity wp = model_weight_positivity(m.n, w, t);
    b.values["model_min_full"] = jnum(wp.min_full);
    b.values["model_min_reduced"] = jnum(wp.min_reduced);
    b.checks.push_back(check_true("model Laplacian of g^{2s} >= 0", wp.nonnegative));
    b.checks.push_back(check_true("g'' < 0 on [0, t0)", wp.g_concave));
    b.checks.push_back(check_true("t g' <= g on [0, t0)", wp.t_dg_below_g));

    const double rc = m.r_min / (w.eps * w.t0);
    const double r_max = 4.0 * rc;
    const RadialGrid grid = build_grid(m, r_max, nodes_for(m.r_min, r_max, cfg.weight_h));
    const LaplacianOnF lf = full_laplacian_on_f(m, w, grid);
    b.values["laplacian_min"] = jnum(lf.min);
    b.values["laplacian_tol_pos"] = jnum(lf.tol_pos);
    b.checks.push_back(check_ge("Delta_g f >= -tol_pos", lf.min, -lf.tol_pos, "richardson", lf.tol_pos));

    const EpsThreshold et = locate_eps0(m, w, w.eps, cfg.weight_eps_steps, cfg.weight_h);
    b.values["eps0_found"] = et.found;
    b.values["eps0"] = jnum(et.eps0);
    Curve curve{"weight_eps_scan", {"eps", "laplacian_min", "nonnegative"}, {}};
    for (std::size_t k = 0; k < et.eps.size(); ++k)
        curve.rows.push_back({et.eps[k], et.min[k], et.nonnegative[k] ? 1.0 : 0.0});
    b.curves.push_back(std::move(curve));
    b.checks.push_back(check_true("eps0 located", et.found));

    // warp perturbation w/r - 1 in S^{-rho}, V in S^{-2-rho'}
    auto pert = [&m](double r) {
        const Jet j = eval_warp(m, r);
        return Jet{j.value / r - 1.0, (j.d1 * r - j.value) / (r * r),
                   j.d2 / r - 2.0 * j.d1 / (r * r) + 2.0 * j.value / (r * r * r)};
    };
    const double r_hi = std::max(50.0, 10.0 * m.r_min);
    const SymbolDecayReport sw = check_symbol_decay_extended(pert, m.rho, m.r_min, r_hi, 2000);
    const SymbolDecayReport sv =
        check_symbol_decay_extended([&m](double r) { return eval_potential(m, r); }, 2.0 + m.potential.rho_prime,
                                    m.r_min, r_hi, 2000);
    b.values["symbol_warp"] = {sw.extended.sup0, sw.extended.sup1, sw.extended.sup2};
    b.values["symbol_potential"] = {sv.extended.sup0, sv.extended.sup1, sv.extended.sup2};
    b.checks.push_back(check_true("warp perturbation in S^{-rho}", sw.bounded));
    b.checks.push_back(check_true("potential in S^{-2-rho'}", sv.bounded));
}

void mourre_suite(const ExperimentConfig& cfg, SuiteBlock& b) {
    const SpectralWindow& I = cfg.window;
    b.inputs = {{"I", {I.a, I.b}}, {"H", jlist(cfg.mourre_H)}, {"q", cfg.grid.q}, {"h", cfg.grid.h}};
    const MourreScan sc = scan_H(cfg.model, I, cfg.mourre_H, cfg.grid);
    Curve curve{"mourre_scan", {"H", "c_H", "window_rank"}, {}};
    Curve dev{"mourre_deviation", {"H", "deviation", "infI_minus_c"}, {}};
    ojson pts = ojson::array();
    double asym = 0.0;
    for (const auto& p : sc.points) {
        if (p.empty) {
            pts.push_back({{"H", p.H}, {"empty", true}});
            continue;
        }
        curve.rows.push_back({p.H, p.c, static_cast<double>(p.rank)});
        dev.rows.push_back({p.H, p.deviation, I.a - p.c});
        pts.push_back({{"H", p.H}, {"c", p.c}, {"rank", p.rank}, {"deviation", p.deviation}, {"min_window_t", p.min_window_t}});
        asym = std::max(asym, p.asymmetry / I.b);
        if (sc.H0_found && p.H >= sc.H0)
            b.checks.push_back(check_ge("c(H=" + tag(p.H) + ")", p.c, cfg.tol.mourre_c, "tol.mourre_c", cfg.tol.mourre_c));
    }
    b.values["points"] = pts;
    b.values["H0_found"] = sc.H0_found;
    b.values["H0"] = sc.H0;
    b.checks.push_back(check_true("H0 located within the schedule", sc.H0_found));
    b.checks.push_back(check_le("sandwich asymmetry", asym, cfg.tol.symmetry, "tol.symmetry", cfg.tol.symmetry));
    const double rho = cfg.model.rho;
    if (sc.noise_floor) {
        b.values["deviation"] = "exact-model fast decay";
        b.checks.push_back(check_true("deviation at noise floor", true));
    } else if (sc.fitted) {
        b.fits.push_back({"deviation", sc.fit, -rho});
        if (cfg.model.warp.family != WarpFamily::flat)
            b.checks.push_back(check_slope("deviation exponent", sc.fit, -rho * (1.0 + cfg.tol.mourre_slope),
                                           -rho * (1.0 - cfg.tol.mourre_slope), "tol.mourre_slope",
                                           cfg.tol.mourre_slope, cfg.tol.r2));
    }
    b.curves.push_back(std::move(curve));
    b.curves.push_back(std::move(dev));
}

void sqrt_mourre_suite(const ExperimentConfig& cfg, SuiteBlock& b) {
    const SpectralWindow& I = cfg.window;
    b.inputs = {{"I", {I.a, I.b}}, {"H", jlist(cfg.mourre_H)}, {"quad_levels", cfg.quad.levels}, {"quad_order", cfg.quad.order}};
    std::vector<SqrtMourreResult> res;
    std::vector<double> Hs, cs;
    for (double H : cfg.mourre_H) {
        res.push_back(sqrt_mourre_min(cfg.model, SpectralWindow{I.a, I.b, H}, cfg.grid, cfg.quad));
        if (!res.back().empty) {
            Hs.push_back(H);
            cs.push_back(res.back().c);
        }
    }
    bool found = false;
    const double H0 = locate_H0(Hs, cs, 0.5 * I.a, found);
    b.values["H0_found"] = found;
    b.values["H0"] = H0;
    b.checks.push_back(check_true("H0 located within the schedule", found));
    Curve curve{"sqrt_mourre", {"H", "c_sqrt", "c", "quad_vs_eigen"}, {}};
    ojson pts = ojson::array();
    double worst_quad = 0.0;
    for (const auto& r : res) {
        if (r.empty) continue;
        curve.rows.push_back({r.H, r.c_sqrt, r.c, r.quad_vs_eigen});
        pts.push_back({{"H", r.H}, {"c_sqrt", r.c_sqrt}, {"c", r.c}, {"rank", r.rank}, {"quad_vs_eigen", r.quad_vs_eigen}});
        worst_quad = std::max(worst_quad, r.quad_vs_eigen);
        if (found && r.H >= H0) {
            b.checks.push_back(check_ge("c_sqrt(H=" + tag(r.H) + ")", r.c_sqrt, cfg.tol.sqrt_c, "tol.sqrt_c", cfg.tol.sqrt_c));
            b.checks.push_back(check_ge("c_sqrt(H=" + tag(r.H) + ") >= c(H) factor", r.c_sqrt,
                                        r.c * r.factor * (1.0 - 1e-10), "", 0.0));
        }
    }
    b.values["points"] = pts;
    b.checks.push_back(check_le("quadrature vs eigen construction", worst_quad, cfg.tol.quad, "tol.quad", cfg.tol.quad));
    if (!res.empty()) {
        const double f = res.front().factor, fe = res.front().factor_exact;
        b.values["factor"] = f;
        b.values["factor_exact"] = fe;
        b.checks.push_back(check_le("lower-bound factor vs 1/(2 sqrt(sup I))", std::abs(f - fe) / fe, cfg.tol.quad,
                                    "tol.quad", cfg.tol.quad));
    }
    b.curves.push_back(std::move(curve));

    // sqrt P by quadrature on the full lambda = 0 mode
    const RadialGrid grid = build_grid(cfg.model, cfg.model.r_min + 50.0, 512);
    const ModeOperator op = build_mode(cfg.model, grid, 0.0);
    const SpectralData sd = spectral_data(op);
    const Eigen::MatrixXd ref = apply_spectral_function(sd, [](double v) { return std::sqrt(v); });
    Curve qc{"sqrt_quadrature", {"levels", "nodes", "relative_error"}, {}};
    std::vector<double> errs;
    std::vector<int> levels{2, 4, 6};
    levels.erase(std::remove_if(levels.begin(), levels.end(), [&](int v) { return v >= cfg.quad.levels; }), levels.end());
    levels.push_back(cfg.quad.levels);
    for (int lv : levels) {
        QuadSpec q = cfg.quad;
        q.levels = lv;
        const double e = spectral_norm(Eigen::MatrixXd(sqrt_via_quadrature(op.P, op.m, q) - ref)) / spectral_norm(ref);
        errs.push_back(e);
        qc.rows.push_back({static_cast<double>(lv), static_cast<double>(q.nodes()), e});
    }
    b.values["sqrt_quadrature_error"] = jnum(errs.back());
    b.checks.push_back(check_le("sqrt P quadrature error", errs.back(), cfg.tol.quad, "tol.quad", cfg.tol.quad));
    // nonincreasing until the roundoff floor is reached
    bool monotone = true;
    for (std::size_t k = 1; k < errs.size(); ++k)
        if (!(errs[k] <= errs[k - 1] || errs[k] < kRoundoffFloor)) monotone = false;
    b.checks.push_back(check_true("sqrt P quadrature error monotone in nodes", monotone, "roundoff_floor", kRoundoffFloor));
    b.curves.push_back(std::move(qc));
}

void resolvent_suite(const ExperimentConfig& cfg, SuiteBlock& b) {
    const ManifoldModel& m = cfg.model;
    const double tol = cfg.tol.fit;
    b.inputs = {{"s", jlist(cfg.resolvent_s)},
                {"w", {cfg.resolvent_w.real(), cfg.resolvent_w.imag()}},
                {"H", jlist(cfg.resolvent_H)},
                {"r_factor", cfg.resolvent_r_factor},
                {"sigma", jlist(cfg.gain_sigma)},
                {"gain_H", jlist(cfg.gain_H)}};
    Curve rc{"resolvent", {"s", "order", "H", "norm"}, {}};
    for (double s : cfg.resolvent_s) {
        for (int o : cfg.resolvent_order) {
            const ResolventGain g = resolvent_gain_fit(m, o, s, cfg.resolvent_w, cfg.resolvent_H,
                                                       cfg.resolvent_r_factor, cfg.resolvent_h, cfg.hash);
            for (std::size_t k = 0; k < g.H.size(); ++k) rc.rows.push_back({s, static_cast<double>(o), g.H[k], g.norm[k]});
            const std::string nm = "resolvent s=" + tag(s) + " order=" + tag(o);
            b.fits.push_back({nm, g.fit, -1.0 - s});
            b.checks.push_back(check_slope(nm + " exponent", g.fit, -1.0 - s - tol, -1.0 - s + tol, "tol.fit", tol, cfg.tol.r2));
        }
        if (cfg.resolvent_negative_branch) {
            // Re w < 0 branch near w = -1
            const std::vector<std::complex<double>> ws{{-1.0, 0.0}, {-1.0, 0.01}, {-1.0, 0.1}};
            std::vector<std::vector<double>> norms;
            for (const auto& w : ws) {
                std::vector<double> row;
                for (double H : cfg.resolvent_H)
                    row.push_back(resolvent_weighted_norm(m, 0, s, w, H, cfg.resolvent_r_factor, cfg.resolvent_h, cfg.hash));
                norms.push_back(row);
            }
            // smallest C with norm(w = i) <= 2 C H^{-1-s} on the schedule
            double C = 0.0;
            for (double H : cfg.resolvent_H)
                C = std::max(C, resolvent_weighted_norm(m, 0, s, {0.0, 1.0}, H, cfg.resolvent_r_factor, cfg.resolvent_h,
                                                        cfg.hash) * std::pow(H, 1.0 + s) / 2.0);
            double worst = 0.0, uniform = 1.0;
            for (std::size_t j = 0; j < ws.size(); ++j) {
                for (std::size_t k = 0; k < cfg.resolvent_H.size(); ++k) {
                    const double H = cfg.resolvent_H[k];
                    const double bound = 2.0 * C * std::pow(H, -1.0 - s) * std::pow(std::abs(ws[j]), -(1.0 - s) / 2.0);
                    worst = std::max(worst, norms[j][k] / bound);
                    uniform = std::max(uniform, norms[j][k] / norms[0][k]);
                }
            }
            b.values["negative_branch_s=" + tag(s)] = {{"C_fit", C}, {"max_norm_over_bound", worst}, {"max_ratio_over_im_w", uniform}};
            b.checks.push_back(check_le("w=-1 branch bound s=" + tag(s), worst, 1.0, "", 0.0));
            b.checks.push_back(check_le("w=-1 uniform in Im w s=" + tag(s), uniform, cfg.tol.ratio, "tol.ratio", cfg.tol.ratio));
        }
    }
    b.curves.push_back(std::move(rc));

    Curve gc{"gain", {"sigma", "order", "H", "value"}, {}};
    for (double sigma : cfg.gain_sigma) {
        for (int o : cfg.gain_order) {
            const GainFit g = weighted_gain_fit(m, cfg.window, sigma, o, cfg.gain_H, cfg.grid.q, cfg.grid.h);
            for (std::size_t k = 0; k < g.H.size(); ++k) gc.rows.push_back({sigma, static_cast<double>(o), g.H[k], g.value[k]});
            const std::string nm = "gain sigma=" + tag(sigma) + " order=" + tag(o);
            b.fits.push_back({nm, g.fit, -2.0 - sigma});
            b.checks.push_back(check_slope(nm + " exponent", g.fit, -2.0 - sigma - tol, -2.0 - sigma + tol, "tol.fit", tol, cfg.tol.r2));
        }
    }
    b.curves.push_back(std::move(gc));
}

void adjoint_suite(const ExperimentConfig& cfg, SuiteBlock& b) {
    const SpectralWindow& I = cfg.window;
    b.inputs = {{"I", {I.a, I.b}}, {"mu", jlist(cfg.adjoint_mu)}, {"H", jlist(cfg.adjoint_H)}};
    const AdjointBounds ab = adjoint_bounds_check(cfg.model, I, cfg.adjoint_mu, cfg.adjoint_H, cfg.grid, cfg.quad);
    Curve curve{"adjoint_bounds", {"H", "rank", "ad1", "ad2", "mu", "mourre1", "mourre2", "identity_defect"}, {}};
    double defect = 0.0;
    for (const auto& p : ab.points) {
        defect = std::max(defect, p.identity_defect);
        for (std::size_t q = 0; q < ab.mu.size(); ++q)
            curve.rows.push_back({p.H, static_cast<double>(p.rank), p.ad1, p.ad2, ab.mu[q], p.mourre1[q], p.mourre2[q], p.identity_defect});
    }
    b.curves.push_back(std::move(curve));
    b.values["ratio_ad1"] = jnum(ab.ratio_ad1);
    b.values["ratio_ad2"] = jnum(ab.ratio_ad2);
    b.values["identity_defect"] = jnum(defect);
    b.checks.push_back(check_le("decomposition identity defect", defect, cfg.tol.identity, "tol.identity", cfg.tol.identity));
    b.checks.push_back(check_le("(ad1) max/min ratio", ab.ratio_ad1, cfg.tol.ratio, "tol.ratio", cfg.tol.ratio));
    b.checks.push_back(check_le("(ad2) max/min ratio", ab.ratio_ad2, cfg.tol.ratio, "tol.ratio", cfg.tol.ratio));
    for (std::size_t q = 0; q < ab.mu.size(); ++q) {
        const double mu = ab.mu[q];
        if (mu == 0.0) {
            double worst = 0.0;
            for (const auto& p : ab.points) worst = std::max({worst, p.mourre1[q], p.mourre2[q]});
            b.checks.push_back(check_le("(mourre1)/(mourre2) at mu=0", worst, 1.0 + 1e-10, "", 1e-10));
            continue;
        }
        const double t = cfg.tol.fit;
        b.fits.push_back({"mourre1 mu=" + tag(mu), ab.fit_mourre1[q], -mu});
        b.fits.push_back({"mourre2 mu=" + tag(mu), ab.fit_mourre2[q], -mu});
        b.checks.push_back(check_slope("(mourre1) exponent mu=" + tag(mu), ab.fit_mourre1[q], -mu - t, -mu + t, "tol.fit", t, cfg.tol.r2));
        b.checks.push_back(check_slope("(mourre2) exponent mu=" + tag(mu), ab.fit_mourre2[q], -mu - t, -mu + t, "tol.fit", t, cfg.tol.r2));
    }

    const ConjugateProjector cp = conjugate_projector_norms(cfg.model, I, cfg.adjoint_H, cfg.grid);
    Curve pc{"conjugate_projector", {"H", "L", "l_psi_xinv", "xinv_psi_lstar", "xinv_psi_l"}, {}};
    for (const auto& p : cp.points)
        for (std::size_t l = 0; l < p.l_psi_xinv.size(); ++l)
            pc.rows.push_back({p.H, static_cast<double>(l), p.l_psi_xinv[l], p.xinv_psi_lstar[l], p.xinv_psi_l[l]});
    b.curves.push_back(std::move(pc));
    b.values["projector_max_ratio"] = jnum(cp.max_ratio);
    b.values["projector_adjoint_gap"] = jnum(cp.max_adjoint_gap);
    b.checks.push_back(check_le("conjugate projector max/min ratio", cp.max_ratio, cfg.tol.ratio, "tol.ratio", cfg.tol.ratio));
    b.checks.push_back(check_le("conjugate projector adjoint gap", cp.max_adjoint_gap, cfg.tol.adjoint_gap, "tol.adjoint_gap", cfg.tol.adjoint_gap));
}

void wave_suite(const ExperimentConfig& cfg, SuiteBlock& b) {
    const ManifoldModel& m = cfg.model;
    b.inputs = {{"mu", jlist(cfg.wave_mu)}, {"eps", cfg.wave_eps}, {"T", jlist(cfg.wave_T)},
                {"r_max", cfg.wave_r_max}, {"h", cfg.wave_h}, {"bump", {cfg.wave_data.r_a, cfg.wave_data.r_b}}};
    const RadialGrid grid = build_grid(m, cfg.wave_r_max, nodes_for(m.r_min, cfg.wave_r_max, cfg.wave_h));
    const WaveState st = synthesize_initial_data(m, grid, cfg.wave_data);
    std::vector<Eigen::VectorXd> u0;
    const Eigen::VectorXd bump = bump_profile(grid, cfg.wave_data.r_a, cfg.wave_data.r_b);
    for (std::size_t q = 0; q < m.angular_spectrum.size(); ++q) u0.push_back(bump);
    const double rec = reconstruction_error(st, u0);
    b.values["reconstruction_error"] = jnum(rec);
    b.checks.push_back(check_le("initial data reconstruction", rec, 1e-6, "", 1e-6));
    const double tol = cfg.tol.fit;
    Curve qc{"wave_Q", {"mu", "T", "Q"}, {}};
    for (double mu : cfg.wave_mu) {
        const DecayFit f = decay_rate_fit(m, st, mu, cfg.wave_eps, cfg.wave_T, cfg.wave_data.r_b, cfg.wave_dt, cfg.wave_margin);
        Curve ts{"wave_mu_" + tag(mu), {"t", "weighted_energy", "energy"}, {}};
        for (std::size_t k = 0; k < f.t.size(); ++k) ts.rows.push_back({f.t[k], f.density[k], f.energy[k]});
        b.curves.push_back(std::move(ts));
        for (std::size_t k = 0; k < f.T.size(); ++k) qc.rows.push_back({mu, f.T[k], f.Q[k]});
        b.checks.push_back(check_le("energy conservation mu=" + tag(mu), f.energy_drift, cfg.tol.energy, "tol.energy", cfg.tol.energy));
        b.fits.push_back({"Q(T) mu=" + tag(mu), f.fit, f.rate_exponent});
        if (mu > 0.5) {
            b.checks.push_back(check_le("plateau Q(Tmax)/Q(Tmax/2) mu=" + tag(mu), f.plateau_ratio, cfg.tol.plateau,
                                        "tol.plateau", cfg.tol.plateau));
        } else {
            b.checks.push_back(check_slope("Q(T) exponent mu=" + tag(mu), f.fit, -kInf, 1.0 - 2.0 * mu + tol, "tol.fit",
                                           tol, cfg.tol.r2));
        }
    }
    b.curves.push_back(std::move(qc));
    if (cfg.wave_trapping_control) {
        const ManifoldModel tm = trapping_control_model(m);
        const RadialGrid tg = build_grid(tm, cfg.wave_r_max, grid.N);
        double mu = 0.25;
        for (double v : cfg.wave_mu)
            if (v <= 0.5) {
                mu = v;
                break;
            }
        const DecayFit f = decay_rate_fit(tm, tg, mu, cfg.wave_eps, cfg.wave_T, trapping_control_data(cfg.wave_data),
                                          cfg.wave_dt, cfg.wave_margin);
        b.fits.push_back({"trapping control Q(T) mu=" + tag(mu), f.fit, f.rate_exponent});
        b.values["trapping_slope"] = jnum(f.fit.slope);
        b.checks.push_back(check_ge("trapping control violates mu=" + tag(mu) + " bound", f.fit.slope,
                                    1.0 - 2.0 * mu + tol, "tol.fit", tol));
    }
}

}  // namespace

std::vector<std::string> expand_suites(const std::string& name) {
    if (name == "all") return known_suites();
    const auto& k = known_suites();
    if (std::find(k.begin(), k.end(), name) == k.end()) throw ConfigError("unknown suite '" + name + "'");
    return {name};
}

SuiteBlock run_suite(const ExperimentConfig& cfg, const std::string& suite) {
    SuiteBlock b;
    b.name = suite;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (suite == "hardy") hardy_suite(cfg, b);
        else if (suite == "poincare") poincare_suite(cfg, b);
        else if (suite == "weight") weight_suite(cfg, b);
        else if (suite == "mourre") mourre_suite(cfg, b);
        else if (suite == "sqrt-mourre") sqrt_mourre_suite(cfg, b);
        else if (suite == "resolvent") resolvent_suite(cfg, b);
        else if (suite == "adjoint-bounds") adjoint_suite(cfg, b);
        else if (suite == "wave") wave_suite(cfg, b);
        else throw ConfigError("unknown suite '" + suite + "'");
    } catch (const ConfigError& e) {
        b.error = e.what();
        b.error_kind = "config";
    } catch (const ParameterError& e) {
        b.error = e.what();
        b.error_kind = "config";
    } catch (const ResolutionError& e) {
        b.error = e.what();
        b.error_kind = "config";
    } catch (const Error& e) {
        b.error = e.what();
        b.error_kind = "numerical";
    }
    b.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return b;
}

VerificationReport run_suites(const ExperimentConfig& cfg, const std::vector<std::string>& suites) {
    std::vector<std::string> names = suites;
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    VerificationReport r;
    r.config_hash = cfg.hash;
    for (const auto& [k, v] : cfg.resolved) r.config[k] = v;
    for (const auto& s : names) r.blocks.push_back(run_suite(cfg, s));
    return r;
}

int exit_code(const VerificationReport& report) {
    bool numerical = false;
    for (const auto& b : report.blocks) {
        if (b.error_kind == "config") return 2;
        if (b.error_kind == "numerical") numerical = true;
    }
    if (numerical) return 3;
    return report.status() == Status::pass ? 0 : 1;
}

}  // namespace scatspec
