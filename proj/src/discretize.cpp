#include "scatspec/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scatspec/errors.hpp"

namespace scatspec {

namespace {

double weight_W(const ManifoldModel& model, double r) {
    return std::pow(eval_warp(model, r).value, model.n - 1);
}

double max_abs(const SparseMat& a) {
    double out = 0.0;
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMat::InnerIterator it(a, k); it; ++it) out = std::max(out, std::abs(it.value()));
    return out;
}

}  // namespace

std::vector<double> RadialGrid::interior_nodes() const {
    return std::vector<double>(r.begin() + 1, r.end() - 1);
}

std::vector<double> RadialGrid::interior_weights() const {
    return std::vector<double>(m.begin() + 1, m.end() - 1);
}

RadialGrid build_grid(const ManifoldModel& model, double r_max, int N) {
    model.validate();
    if (N < 3) throw ConfigError("build_grid: N must be >= 3");
    const double edge = model.cutoff.identically_one ? model.r_min : model.cutoff.r1;
    if (!(r_max > edge)) {
        std::ostringstream os;
        os << "build_grid: r_max = " << r_max << " must exceed " << edge
           << " so the cutoff transition is resolved";
        throw ConfigError(os.str());
    }
    RadialGrid g;
    g.r_min = model.r_min;
    g.r_max = r_max;
    g.N = N;
    g.h = (r_max - model.r_min) / (N - 1);
    g.r.resize(N);
    g.m.resize(N);
    for (int i = 0; i < N; ++i) {
        g.r[i] = (i == N - 1) ? r_max : model.r_min + i * g.h;
        g.m[i] = weight_W(model, g.r[i]) * g.h;
    }
    g.m.front() *= 0.5;
    g.m.back() *= 0.5;
    return g;
}

RadialGrid window_grid(const ManifoldModel& model, double H, double inf_I, double q, double h) {
    if (!(H > 0.0) || !(inf_I > 0.0) || !(q > 0.0) || !(h > 0.0))
        throw ParameterError("window_grid: H, inf I, q and h must be positive");
    const double r_max = model.r_min + std::numbers::pi * H * q / std::sqrt(inf_I);
    const int N = static_cast<int>(std::lround((r_max - model.r_min) / h)) + 1;
    return build_grid(model, r_max, N);
}

Tridiag assemble_P(const ManifoldModel& model, const RadialGrid& grid, double lambda) {
    if (lambda < 0.0) throw ParameterError("assemble_P: angular eigenvalue must be >= 0");
    const int n = grid.interior();
    const double h = grid.h;
    Tridiag t;
    t.diag.resize(n);
    t.lower.resize(std::max(n - 1, 0));
    t.upper.resize(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) {
        const int i = k + 1;
        const double r = grid.r[i];
        const double W = weight_W(model, r);
        const double Wm = weight_W(model, r - 0.5 * h);
        const double Wp = weight_W(model, r + 0.5 * h);
        const double w = eval_warp(model, r).value;
        t.diag[k] = (Wm + Wp) / (h * h * W) + lambda / (w * w) + eval_potential(model, r).value;
        if (k > 0) t.lower[k - 1] = -Wm / (h * h * W);
        if (k + 1 < n) t.upper[k] = -Wp / (h * h * W);
    }
    return t;
}

SparseMat assemble_G(const ManifoldModel& model, const RadialGrid& grid) {
    const int n = grid.interior();
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < n; ++k) {
        const double r = grid.r[k + 1];
        const double c = eval_cutoff_phi(model, r).value * r / (2.0 * grid.h);
        if (c == 0.0) continue;
        if (k > 0) trip.emplace_back(k, k - 1, -c);
        if (k + 1 < n) trip.emplace_back(k, k + 1, c);
    }
    SparseMat g(n, n);
    g.setFromTriplets(trip.begin(), trip.end());
    return g;
}

ModeOperator build_mode(const ManifoldModel& model, const RadialGrid& grid, double lambda,
                        int multiplicity) {
    ModeOperator op;
    op.lambda = lambda;
    op.multiplicity = multiplicity;
    op.P = assemble_P(model, grid, lambda);
    op.G = assemble_G(model, grid);
    op.m = grid.interior_weights();
    op.r = grid.interior_nodes();
    return op;
}

SparseMat multiplier(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    SparseMat out(n, n);
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, values[i]);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SparseMat weighted_adjoint(const SparseMat& t, const std::vector<double>& m) {
    if (t.rows() != static_cast<Eigen::Index>(m.size()) || t.cols() != t.rows())
        throw DomainError("weighted_adjoint: dimension mismatch");
    std::vector<double> inv(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) inv[i] = 1.0 / m[i];
    SparseMat tt = t.transpose();
    return SparseMat(multiplier(inv) * tt * multiplier(m));
}

SparseMat to_sparse(const Tridiag& t) {
    const int n = t.size();
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n; ++i) {
        trip.emplace_back(i, i, t.diag[i]);
        if (i + 1 < n) {
            trip.emplace_back(i, i + 1, t.upper[i]);
            trip.emplace_back(i + 1, i, t.lower[i]);
        }
    }
    SparseMat out(n, n);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SparseMat conjugate_B(const SparseMat& g, const std::vector<double>& m) {
    return SparseMat(0.5 * (weighted_adjoint(g, m) - g));
}

SparseMat commutator_K(const SparseMat& p, const SparseMat& g, const std::vector<double>& m) {
    if (p.rows() != g.rows() || p.cols() != g.cols() || p.rows() != static_cast<Eigen::Index>(m.size()))
        throw DomainError("commutator_K: dimension mismatch");
    const SparseMat pg = p * g;
    const SparseMat gp = g * p;
    const SparseMat M = 0.5 * (pg - gp);
    SparseMat k = 0.5 * (M + weighted_adjoint(M, m));
    k.prune(0.0);
    return k;
}

Tridiag assemble_commutator(const ManifoldModel& model, const RadialGrid& grid, double lambda) {
    if (lambda < 0.0) throw ParameterError("assemble_commutator: angular eigenvalue must be >= 0");
    const int n = grid.interior();
    const double h = grid.h;
    const int dim = model.n;
    auto F = [&](double r) { return eval_cutoff_phi(model, r).value * r; };
    auto dF = [&](double r) {
        const Jet phi = eval_cutoff_phi(model, r);
        return phi.value + r * phi.d1;
    };
    auto divF = [&](double r) {
        const Jet w = eval_warp(model, r);
        return dF(r) + (dim - 1) * F(r) * w.d1 / w.value;
    };
    std::vector<double> dv(grid.N);
    for (int i = 0; i < grid.N; ++i) dv[i] = divF(grid.r[i]);

    Tridiag t;
    t.diag.resize(n);
    t.lower.resize(std::max(n - 1, 0));
    t.upper.resize(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) {
        const int i = k + 1;
        const double r = grid.r[i];
        const double W = weight_W(model, r);
        const double Wm = weight_W(model, r - 0.5 * h);
        const double Wp = weight_W(model, r + 0.5 * h);
        const double km = Wm * dF(r - 0.5 * h);
        const double kp = Wp * dF(r + 0.5 * h);
        const double lap = -(Wp * (dv[i + 1] - dv[i]) - Wm * (dv[i] - dv[i - 1])) / (h * h * W);
        const Jet w = eval_warp(model, r);
        const double dQ = -2.0 * lambda * w.d1 / (w.value * w.value * w.value) +
                          eval_potential(model, r).d1;
        t.diag[k] = (km + kp) / (h * h * W) + 0.25 * lap - 0.5 * F(r) * dQ;
        if (k > 0) t.lower[k - 1] = -km / (h * h * W);
        if (k + 1 < n) t.upper[k] = -kp / (h * h * W);
    }
    return t;
}

SymTridiag symmetrize(const Tridiag& t, const std::vector<double>& m, double tol) {
    const int n = t.size();
    if (static_cast<int>(m.size()) != n) throw DomainError("symmetrize: dimension mismatch");
    SymTridiag s;
    s.d = t.diag;
    s.e.resize(std::max(n - 1, 0));
    double scale = 0.0, resid = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double a = m[i] * t.upper[i];
        const double b = m[i + 1] * t.lower[i];
        scale = std::max({scale, std::abs(a), std::abs(b)});
        resid = std::max(resid, std::abs(a - b));
        s.e[i] = 0.5 * (t.upper[i] * std::sqrt(m[i] / m[i + 1]) + t.lower[i] * std::sqrt(m[i + 1] / m[i]));
    }
    if (scale > 0.0 && resid > tol * scale) {
        std::ostringstream os;
        os << "symmetrize: operator is not self-adjoint in the weighted inner product (relative residual "
           << resid / scale << ")";
        throw DomainError(os.str());
    }
    return s;
}

SparseMat to_unweighted(const SparseMat& t, const std::vector<double>& m) {
    std::vector<double> sq(m.size()), isq(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        sq[i] = std::sqrt(m[i]);
        isq[i] = 1.0 / sq[i];
    }
    return SparseMat(multiplier(sq) * t * multiplier(isq));
}

double selfadjoint_residual(const SparseMat& t, const std::vector<double>& m) {
    const SparseMat dt = multiplier(m) * t;
    const SparseMat r = dt - SparseMat(dt.transpose());
    const double s = max_abs(dt);
    return s > 0.0 ? max_abs(r) / s : 0.0;
}

double antiselfadjoint_residual(const SparseMat& t, const std::vector<double>& m) {
    const SparseMat dt = multiplier(m) * t;
    const SparseMat r = dt + SparseMat(dt.transpose());
    const double s = max_abs(dt);
    return s > 0.0 ? max_abs(r) / s : 0.0;
}

SparseMat r_dr(const RadialGrid& grid) {
    const int n = grid.interior();
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < n; ++k) {
        const double c = grid.r[k + 1] / (2.0 * grid.h);
        if (k > 0) trip.emplace_back(k, k - 1, -c);
        if (k + 1 < n) trip.emplace_back(k, k + 1, c);
    }
    SparseMat out(n, n);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

}  // namespace scatspec
