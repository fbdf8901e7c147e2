#include "scatspec/mourre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "scatspec/errors.hpp"
#include "scatspec/linalg.hpp"

namespace scatspec {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct ModeWindow {
    ModeOperator op;
    SpectralData sd;
    VectorXd t;  // H^2 mu over the window
};

Eigen::Map<const VectorXd> as_vec(const std::vector<double>& v) {
    return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<ModeWindow> window_modes(const ManifoldModel& model, const RadialGrid& grid, const SpectralWindow& I) {
    I.validate();
    std::vector<ModeWindow> out;
    for (const auto& mode : model.angular_spectrum) {
        ModeWindow mw;
        mw.op = build_mode(model, grid, mode.lambda, mode.multiplicity);
        mw.sd = spectral_data(mw.op, I);
        if (mw.sd.values.empty()) continue;
        mw.t = I.H * I.H * as_vec(mw.sd.values);
        out.push_back(std::move(mw));
    }
    return out;
}

// <E_j, T E_k>_m for a tridiagonal T in the original frame
MatrixXd compress(const ModeWindow& mw, const Tridiag& T) {
    return mw.sd.vectors.transpose() * as_vec(mw.sd.m).asDiagonal() * T.apply(mw.sd.vectors);
}

MatrixXd compress(const ModeWindow& mw, const SparseMat& T) {
    return mw.sd.vectors.transpose() * as_vec(mw.sd.m).asDiagonal() * (T * mw.sd.vectors);
}

double min_eig(const MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Tridiag scaled(const Tridiag& t, double f) {
    Tridiag o = t;
    for (auto& v : o.diag) v *= f;
    for (auto& v : o.lower) v *= f;
    for (auto& v : o.upper) v *= f;
    return o;
}

// Nodes lambda_k and weights of int_0^inf (.) dlambda.
struct HalfLine {
    std::vector<double> lambda;
    std::vector<double> weight;
};

HalfLine half_line(const QuadSpec& spec) {
    const QuadRule rule = graded_rule(spec);
    HalfLine h;
    for (std::size_t k = 0; k < rule.theta.size(); ++k) {
        const double t = std::tan(rule.theta[k]);
        const double c = std::cos(rule.theta[k]);
        h.lambda.push_back(spec.scale * t * t);
        h.weight.push_back(rule.weight[k] * 2.0 * spec.scale * t / (c * c));
    }
    return h;
}

// Divided-difference weights pi^{-1} int lambda^{1/2} (t_j + lambda)^{-1} (t_k + lambda)^{-1} dlambda.
MatrixXd lowner_quadrature(const VectorXd& t, const QuadSpec& spec) {
    const HalfLine hl = half_line(spec);
    const Eigen::Index k = t.size();
    MatrixXd w = MatrixXd::Zero(k, k);
    for (std::size_t q = 0; q < hl.lambda.size(); ++q) {
        const VectorXd r = (t.array() + hl.lambda[q]).inverse();
        w += (hl.weight[q] * std::sqrt(hl.lambda[q]) / std::numbers::pi) * (r * r.transpose());
    }
    return w;
}

VectorXd bump_values(const VectorXd& t, const SpectralWindow& I) {
    VectorXd p(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) p[j] = window_bump(t[j], I.a, I.b).value;
    return p;
}

double ratio_max_min(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

}  // namespace

SandwichResult mourre_sandwich_min(const ManifoldModel& model, const RadialGrid& grid, const SpectralWindow& I) {
    SandwichResult res;
    res.H = I.H;
    res.c = std::numeric_limits<double>::infinity();
    res.min_window_t = std::numeric_limits<double>::infinity();
    for (const auto& mw : window_modes(model, grid, I)) {
        const Tridiag K = assemble_commutator(model, grid, mw.op.lambda);
        const MatrixXd S = I.H * I.H * compress(mw, K);
        res.asymmetry = std::max(res.asymmetry, (S - S.transpose()).cwiseAbs().maxCoeff());
        res.c = std::min(res.c, min_eig(S));
        res.min_window_t = std::min(res.min_window_t, mw.t.minCoeff());
        const MatrixXd Dv = S - I.H * I.H * compress(mw, mw.op.P);
        res.deviation = std::max(res.deviation, spectral_norm(MatrixXd(0.5 * (Dv + Dv.transpose()))));
        res.rank += static_cast<int>(mw.t.size()) * mw.op.multiplicity;
    }
    res.empty = res.rank == 0;
    if (res.empty) res.c = res.min_window_t = 0.0;
    return res;
}

SandwichResult mourre_sandwich_min(const ManifoldModel& model, const SpectralWindow& I, const WindowGridRule& rule) {
    I.validate();
    return mourre_sandwich_min(model, window_grid(model, I.H, I.a, rule.q, rule.h), I);
}

MourreScan scan_H(const ManifoldModel& model, const SpectralWindow& I, const std::vector<double>& H_list,
                  const WindowGridRule& rule) {
    if (H_list.size() < 4) throw ParameterError("scan_H: needs at least 4 H values");
    if (!std::is_sorted(H_list.begin(), H_list.end()) ||
        std::adjacent_find(H_list.begin(), H_list.end()) != H_list.end())
        throw ParameterError("scan_H: H schedule must be strictly increasing");
    MourreScan scan;
    scan.I = I;
    for (double H : H_list) scan.points.push_back(mourre_sandwich_min(model, SpectralWindow{I.a, I.b, H}, rule));
    // H0: first scheduled H from which every nonempty window has c >= inf I / 2
    for (std::size_t k = 0; k < scan.points.size(); ++k) {
        bool all = true;
        bool any = false;
        for (std::size_t j = k; j < scan.points.size(); ++j) {
            if (scan.points[j].empty) continue;
            any = true;
            if (scan.points[j].c < 0.5 * I.a) all = false;
        }
        if (any && all) {
            scan.H0_found = true;
            scan.H0 = scan.points[k].H;
            break;
        }
    }
    std::vector<double> hs, dv;
    bool floor = true;
    for (const auto& p : scan.points) {
        if (p.empty) continue;
        hs.push_back(p.H);
        dv.push_back(p.deviation);
        if (p.deviation > 1e-10 * I.a) floor = false;
    }
    scan.noise_floor = floor && !hs.empty();
    if (hs.size() >= 4 && !scan.noise_floor) {
        scan.fit = fit_loglog(hs, dv);
        scan.fitted = true;
    }
    return scan;
}

SqrtMourreResult sqrt_mourre_min(const ManifoldModel& model, const SpectralWindow& I, const WindowGridRule& rule,
                                 const QuadSpec& quad) {
    I.validate();
    SqrtMourreResult res;
    res.H = I.H;
    const RadialGrid grid = window_grid(model, I.H, I.a, rule.q, rule.h);
    res.c = std::numeric_limits<double>::infinity();
    res.c_sqrt = std::numeric_limits<double>::infinity();
    const HalfLine hl = half_line(quad);
    double diff2 = 0.0, ref2 = 0.0;
    for (const auto& mw : window_modes(model, grid, I)) {
        const Tridiag K = assemble_commutator(model, grid, mw.op.lambda);
        const MatrixXd KH = I.H * I.H * compress(mw, K);
        const MatrixXd KHs = 0.5 * (KH + KH.transpose());
        res.c = std::min(res.c, min_eig(KHs));
        // eigen-built: divided differences of sqrt over the window eigenvalues
        const VectorXd st = mw.t.array().sqrt();
        MatrixXd eig = KHs;
        for (Eigen::Index j = 0; j < eig.rows(); ++j)
            for (Eigen::Index k = 0; k < eig.cols(); ++k) eig(j, k) /= st[j] + st[k];
        res.c_sqrt = std::min(res.c_sqrt, min_eig(eig));
        // quadrature-built: pi^{-1} int lambda^{1/2} R K_H R dlambda with R = (H^2 P + lambda)^{-1}
        const SymTridiag S = symmetrize(mw.op.P, mw.op.m);
        SymTridiag SH = S;
        for (auto& v : SH.d) v *= I.H * I.H;
        for (auto& v : SH.e) v *= I.H * I.H;
        const VectorXd sq = as_vec(mw.op.m).array().sqrt();
        const MatrixXd Et = sq.asDiagonal() * mw.sd.vectors;  // orthonormal in the unweighted frame
        const SparseMat Kt = to_unweighted(to_sparse(scaled(K, I.H * I.H)), mw.op.m);
        MatrixXd acc = MatrixXd::Zero(Et.cols(), Et.cols());
        for (std::size_t q = 0; q < hl.lambda.size(); ++q) {
            MatrixXd Y(Et.rows(), Et.cols());
            for (Eigen::Index c = 0; c < Et.cols(); ++c) Y.col(c) = solve_shifted(SH, -hl.lambda[q], Et.col(c));
            const MatrixXd KY = Kt * Y;
            acc += (hl.weight[q] * std::sqrt(hl.lambda[q]) / std::numbers::pi) * (Y.transpose() * KY);
        }
        acc = 0.5 * (acc + acc.transpose()).eval();
        diff2 += (acc - eig).squaredNorm();
        ref2 += eig.squaredNorm();
        res.rank += static_cast<int>(mw.t.size()) * mw.op.multiplicity;
    }
    const double supI = I.b;
    res.factor = integrate_half_line(
        [supI](double l) { return std::sqrt(l) / ((supI + l) * (supI + l)) / std::numbers::pi; }, quad);
    res.factor_exact = 1.0 / (2.0 * std::sqrt(supI));
    res.empty = res.rank == 0;
    if (res.empty) {
        res.c = res.c_sqrt = 0.0;
    } else {
        res.quad_vs_eigen = std::sqrt(diff2 / std::max(ref2, 1e-300));
    }
    return res;
}

double resolvent_weighted_norm(const ManifoldModel& model, int order, double s, std::complex<double> w, double H,
                               double r_factor, double h, std::uint64_t seed) {
    if (!(s >= 0.0 && s < 0.5)) throw ParameterError("resolvent gain: s must lie in [0, 1/2)");
    if (order < 0 || order > 1) throw ParameterError("resolvent gain: L has at most one b-derivative");
    if (!(w.imag() != 0.0 || w.real() < 0.0)) throw ParameterError("resolvent gain: needs Im w != 0 or Re w < 0");
    const double r_max = model.r_min + r_factor * H;
    const int N = static_cast<int>(std::lround((r_max - model.r_min) / h)) + 1;
    const RadialGrid grid = build_grid(model, r_max, N);
    const int k = grid.interior();
    const std::vector<double> m = grid.interior_weights();
    const std::vector<double> r = grid.interior_nodes();
    std::vector<double> xw(k);
    for (int i = 0; i < k; ++i) xw[i] = std::pow(model.x(r[i]), 1.0 + s);
    SparseMat L = multiplier(xw);
    if (order == 1) L = SparseMat(L * r_dr(grid));
    const Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor> Lt =
        to_unweighted(L, m).cast<std::complex<double>>();
    const Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor> LtT = Lt.adjoint();
    double best = 0.0;
    std::uint64_t salt = 0;
    for (const auto& mode : model.angular_spectrum) {
        const SymTridiag S = symmetrize(assemble_P(model, grid, mode.lambda), m);
        Tridiag T;
        T.diag = S.d;
        T.lower = S.e;
        T.upper = S.e;
        T = scaled(T, H * H);
        if (std::abs(w.imag()) < 1e-12) {
            SymTridiag SH = S;
            for (auto& v : SH.d) v *= H * H;
            for (auto& v : SH.e) v *= H * H;
            if (sturm_count(SH, w.real() + 1e-12) != sturm_count(SH, w.real() - 1e-12))
                throw DomainError("resolvent gain: w lies within 1e-12 of the spectrum");
        }
        auto op = [&](const CVec& v) {
            const auto u = solve_shifted(T, w, std::span<const std::complex<double>>(v.data(), v.size()));
            return CVec(Lt * Eigen::Map<const CVec>(u.data(), k));
        };
        auto adj = [&](const CVec& v) {
            const CVec z = LtT * v;
            const auto u = solve_shifted(T, std::conj(w), std::span<const std::complex<double>>(z.data(), z.size()));
            return CVec(Eigen::Map<const CVec>(u.data(), k));
        };
        best = std::max(best, top_singular_value(op, adj, k, seed + salt++));
    }
    return best;
}

ResolventGain resolvent_gain_fit(const ManifoldModel& model, int order, double s, std::complex<double> w,
                                 const std::vector<double>& H_list, double r_factor, double h, std::uint64_t seed) {
    ResolventGain g;
    g.s = s;
    g.w = w;
    g.order = order;
    for (double H : H_list) {
        g.H.push_back(H);
        g.norm.push_back(resolvent_weighted_norm(model, order, s, w, H, r_factor, h, seed));
    }
    if (g.H.size() >= 2) {
        g.fit = fit_loglog(g.H, g.norm);
        g.fitted = true;
    }
    return g;
}

AdjointBounds adjoint_bounds_check(const ManifoldModel& model, const SpectralWindow& I,
                                   const std::vector<double>& mu_list, const std::vector<double>& H_list,
                                   const WindowGridRule& rule, const QuadSpec& quad) {
    for (double mu : mu_list)
        if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterError("adjoint_bounds_check: mu must lie in [0, 1]");
    AdjointBounds out;
    out.mu = mu_list;
    for (double H : H_list) {
        const SpectralWindow win{I.a, I.b, H};
        const RadialGrid grid = window_grid(model, H, I.a, rule.q, rule.h);
        AdjointPoint pt;
        pt.H = H;
        pt.mourre1.assign(mu_list.size(), 0.0);
        pt.mourre2.assign(mu_list.size(), 0.0);
        const auto modes = window_modes(model, grid, win);
        if (modes.empty()) continue;
        std::vector<double> xr(grid.interior());
        for (int i = 0; i < grid.interior(); ++i) xr[i] = model.x(grid.r[i + 1]);
        for (const auto& mw : modes) {
            const Eigen::Index k = mw.t.size();
            pt.rank += static_cast<int>(k) * mw.op.multiplicity;
            const SparseMat B = conjugate_B(mw.op.G, mw.op.m);
            const MatrixXd b = compress(mw, B);
            const VectorXd psi = bump_values(mw.t, win);
            const MatrixXd bt = psi.asDiagonal() * b * psi.asDiagonal();
            const VectorXd st = mw.t.array().sqrt();
            // A_H = i bt in the window basis; H P^{1/2} = diag(st)
            const MatrixXd c1 = bt * st.asDiagonal() - st.asDiagonal() * bt;
            const MatrixXd c2 = bt * c1 - c1 * bt;
            pt.ad1 = std::max(pt.ad1, spectral_norm(c1));
            pt.ad2 = std::max(pt.ad2, spectral_norm(c2));
            // decomposition: i c1 = i psi^2 st + B with B = pi^{-1} int lambda^{1/2} R psi 2i (K_H - H^2 P) psi R
            const SparseMat Km = commutator_K(to_sparse(mw.op.P), mw.op.G, mw.op.m);
            const MatrixXd KH = H * H * compress(mw, Km);
            const MatrixXd rem = psi.asDiagonal() * (KH - MatrixXd(mw.t.asDiagonal())) * psi.asDiagonal();
            const MatrixXd Bq = 2.0 * lowner_quadrature(mw.t, quad).cwiseProduct(rem);  // B / i
            const MatrixXd rhs = MatrixXd(psi.cwiseProduct(psi).cwiseProduct(st).asDiagonal()) + Bq;
            const double scale = std::max(spectral_norm(c1), 1e-300);
            pt.identity_defect = std::max(pt.identity_defect, spectral_norm(MatrixXd(c1 - rhs)) / scale);
            // Gram of x^mu e_j
            for (std::size_t q = 0; q < mu_list.size(); ++q) {
                const double mu = mu_list[q];
                VectorXd wx(grid.interior());
                for (int i = 0; i < grid.interior(); ++i) wx[i] = mw.sd.m[i] * std::pow(xr[i], 2.0 * mu);
                const MatrixXd G = mw.sd.vectors.transpose() * wx.asDiagonal() * mw.sd.vectors;
                const MatrixXd btb = bt.transpose() * bt;
                const MatrixXd c = sym_function(btb, [mu](double v) { return std::pow(std::max(v, 0.0), 0.5 * mu); });
                pt.mourre1[q] = std::max(pt.mourre1[q], norm_from_grams(c * c, G));
                const MatrixXd c2m =
                    sym_function(MatrixXd::Identity(k, k) + btb, [mu](double v) { return std::pow(v, 0.5 * mu); }) *
                    psi.asDiagonal();
                pt.mourre2[q] = std::max(pt.mourre2[q], norm_from_grams(c2m * c2m.transpose(), G));
            }
        }
        out.points.push_back(std::move(pt));
    }
    std::vector<double> a1, a2, hs;
    for (const auto& p : out.points) {
        a1.push_back(p.ad1);
        a2.push_back(p.ad2);
        hs.push_back(p.H);
    }
    out.ratio_ad1 = ratio_max_min(a1);
    out.ratio_ad2 = ratio_max_min(a2);
    for (std::size_t q = 0; q < mu_list.size(); ++q) {
        std::vector<double> v1, v2;
        for (const auto& p : out.points) {
            v1.push_back(p.mourre1[q]);
            v2.push_back(p.mourre2[q]);
        }
        LogFit f1, f2;
        if (hs.size() >= 2 && mu_list[q] > 0.0) {
            f1 = fit_loglog(hs, v1);
            f2 = fit_loglog(hs, v2);
        }
        out.fit_mourre1.push_back(f1);
        out.fit_mourre2.push_back(f2);
    }
    return out;
}

ConjugateProjector conjugate_projector_norms(const ManifoldModel& model, const SpectralWindow& I,
                                             const std::vector<double>& H_list, const WindowGridRule& rule,
                                             double psi_scale) {
    ConjugateProjector out;
    for (double H : H_list) {
        const SpectralWindow win{I.a, I.b, H};
        const RadialGrid grid = window_grid(model, H, I.a, rule.q, rule.h);
        const int n = grid.interior();
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = model.x(grid.r[i + 1]);
        const std::vector<SparseMat> Ls{multiplier(x), SparseMat(multiplier(x) * r_dr(grid))};
        ProjectorPoint pt;
        pt.H = H;
        pt.l_psi_xinv.assign(Ls.size(), 0.0);
        pt.xinv_psi_lstar.assign(Ls.size(), 0.0);
        pt.xinv_psi_l.assign(Ls.size(), 0.0);
        const auto modes = window_modes(model, grid, win);
        if (modes.empty()) continue;
        for (const auto& mw : modes) {
            const VectorXd psi = psi_scale * bump_values(mw.t, win);
            const VectorXd m = as_vec(mw.sd.m);
            VectorXd wx(n);
            for (int i = 0; i < n; ++i) wx[i] = m[i] / (x[i] * x[i]);
            const MatrixXd Gx = mw.sd.vectors.transpose() * wx.asDiagonal() * mw.sd.vectors;  // Gram of x^{-1} e_j
            const MatrixXd PGP = psi.asDiagonal() * Gx * psi.asDiagonal();
            for (std::size_t l = 0; l < Ls.size(); ++l) {
                const MatrixXd LE = Ls[l] * mw.sd.vectors;
                const MatrixXd GL = LE.transpose() * m.asDiagonal() * LE;  // Gram of L e_j
                // L psi x^{-1} = (L E Psi)(E^T D x^{-1})
                pt.l_psi_xinv[l] = std::max(pt.l_psi_xinv[l], norm_from_grams(Gx, psi.asDiagonal() * GL * psi.asDiagonal()));
                // x^{-1} psi L^* = (x^{-1} E Psi)((L E)^T D)
                pt.xinv_psi_lstar[l] = std::max(pt.xinv_psi_lstar[l], norm_from_grams(GL, PGP));
                // x^{-1} psi L = (x^{-1} E Psi)(E^T D L); Z Z^* = E^T D L D^{-1} L^T D E
                const MatrixXd Y = SparseMat(Ls[l].transpose()) * (m.asDiagonal() * mw.sd.vectors);  // Z^T
                const MatrixXd ZZ = Y.transpose() * m.cwiseInverse().asDiagonal() * Y;
                pt.xinv_psi_l[l] = std::max(pt.xinv_psi_l[l], norm_from_grams(ZZ, PGP));
            }
        }
        out.points.push_back(std::move(pt));
    }
    for (std::size_t l = 0; l < 2 && !out.points.empty(); ++l) {
        std::vector<double> a, b, c;
        for (const auto& p : out.points) {
            a.push_back(p.l_psi_xinv[l]);
            b.push_back(p.xinv_psi_lstar[l]);
            c.push_back(p.xinv_psi_l[l]);
            const double scale = std::max({p.l_psi_xinv[l], p.xinv_psi_lstar[l], 1e-300});
            out.max_adjoint_gap =
                std::max(out.max_adjoint_gap, std::abs(p.l_psi_xinv[l] - p.xinv_psi_lstar[l]) / scale);
        }
        if (psi_scale != 0.0)
            out.max_ratio = std::max({out.max_ratio, ratio_max_min(a), ratio_max_min(b), ratio_max_min(c)});
    }
    return out;
}

}  // namespace scatspec
