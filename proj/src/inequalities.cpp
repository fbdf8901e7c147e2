#include "scatspec/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "scatspec/errors.hpp"
#include "scatspec/linalg.hpp"

namespace scatspec {

SymTridiag QuotientProblem::reduced() const {
    const int k = size();
    if (static_cast<int>(flux.size()) != k + 1 || static_cast<int>(pot.size()) != k)
        throw DomainError("QuotientProblem: inconsistent sizes");
    SymTridiag s;
    s.d.resize(k);
    s.e.resize(std::max(k - 1, 0));
    for (int i = 0; i < k; ++i) {
        if (!(den[i] > 0.0)) throw DomainError("QuotientProblem: denominator weights must be positive");
        s.d[i] = (flux[i] + flux[i + 1] + pot[i]) / den[i];
        if (i + 1 < k) s.e[i] = -flux[i + 1] / std::sqrt(den[i] * den[i + 1]);
    }
    return s;
}

double QuotientProblem::numerator(const Eigen::VectorXd& u) const {
    const int k = size();
    double out = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double a = (j < k) ? u[j] : 0.0;
        const double b = (j > 0) ? u[j - 1] : 0.0;
        out += flux[j] * (a - b) * (a - b);
    }
    for (int i = 0; i < k; ++i) out += pot[i] * u[i] * u[i];
    return out;
}

double QuotientProblem::denominator(const Eigen::VectorXd& u) const {
    double out = 0.0;
    for (int i = 0; i < size(); ++i) out += den[i] * u[i] * u[i];
    return out;
}

double quotient_min(const QuotientProblem& q) {
    if (q.size() == 0) throw DomainError("quotient_min: empty test space");
    return bisect_eigenvalues(q.reduced(), 0, 1).front();
}

QuotientProblem hardy_problem(int n, double s, double ratio, int N) {
    if (!(ratio > 1.0)) throw DomainError("hardy_problem: domain ratio must exceed 1");
    if (N < 3) throw DomainError("hardy_problem: N must be >= 3");
    // x = e^y: both forms become int e^{a y} (.) dy with a = 2 + 2s - n
    const double a = 2.0 + 2.0 * s - n;
    const double y0 = -std::log(ratio);
    const double h = -y0 / (N - 1);
    QuotientProblem q;
    const int k = N - 2;
    for (int j = 0; j <= k; ++j) q.flux.push_back(std::exp(a * (y0 + (j + 0.5) * h)) / h);
    for (int i = 1; i <= k; ++i) {
        q.den.push_back(std::exp(a * (y0 + i * h)) * h);
        q.pot.push_back(0.0);
    }
    return q;
}

HardyResult hardy_rayleigh_min(int n, double s, double ratio, int N) {
    if (!(s < 0.5 * (n - 2))) {
        std::ostringstream os;
        os << "hardy_rayleigh_min: s must satisfy s < (n-2)/2 = " << 0.5 * (n - 2) << " (got s = " << s << ")";
        throw ParameterError(os.str());
    }
    if (n < 3) throw ParameterError("hardy_rayleigh_min: n must be >= 3");
    if (!(ratio >= 10.0)) throw ParameterError("hardy_rayleigh_min: domain ratio must be >= 10");
    HardyResult r;
    r.n = n;
    r.s = s;
    r.ratio = ratio;
    r.N = N;
    r.sharp = std::pow(0.5 * (n - 2 - 2 * s), 2);
    r.kappa = quotient_min(hardy_problem(n, s, ratio, N));
    return r;
}

QuotientProblem poincare_problem(const ManifoldModel& model, const RadialGrid& grid, double lambda, double s,
                                 double eps) {
    const int k = grid.interior();
    QuotientProblem q;
    const double h = grid.h;
    for (int j = 0; j <= k; ++j) {
        const double rh = grid.r[j] + 0.5 * h;
        const double W = std::pow(eval_warp(model, rh).value, model.n - 1);
        q.flux.push_back(W * std::pow(model.x(rh), 2.0 * s) / h);
    }
    for (int i = 1; i <= k; ++i) {
        const double r = grid.r[i];
        const double x = model.x(r);
        const double w = eval_warp(model, r).value;
        q.pot.push_back(grid.m[i] * std::pow(x, 2.0 * s) * lambda / (w * w));
        q.den.push_back(grid.m[i] * std::pow(x, 2.0 * (1.0 + s + eps)));
    }
    return q;
}

double poincare_min(const ManifoldModel& model, const RadialGrid& grid, double s) {
    if (!(s >= 0.0 && s < 0.5 * (model.n - 2))) {
        std::ostringstream os;
        os << "poincare_min: s must satisfy 0 <= s < (n-2)/2 = " << 0.5 * (model.n - 2);
        throw ParameterError(os.str());
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mode : model.angular_spectrum)
        best = std::min(best, quotient_min(poincare_problem(model, grid, mode.lambda, s, 0.0)));
    return best;
}

double poincare_lemma_min(const ManifoldModel& model, const RadialGrid& grid, double l, double l_prime) {
    if (!(l > 1.0) || !(l > l_prime)) throw ParameterError("poincare_lemma_min: requires l > 1 and l > l'");
    const double s = 0.5 * model.n - l;
    const double eps = l - l_prime;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mode : model.angular_spectrum)
        best = std::min(best, quotient_min(poincare_problem(model, grid, mode.lambda, s, eps)));
    return best;
}

std::vector<Eigen::VectorXd> random_bumps(const RadialGrid& grid, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double span = grid.r_max - grid.r_min;
    std::uniform_real_distribution<double> width_d(std::max(8.0 * grid.h, 0.05 * span), 0.5 * span);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    const int k = grid.interior();
    for (int c = 0; c < count; ++c) {
        const double width = width_d(rng);
        const double lo = grid.r_min + (span - width) * unit(rng);
        Eigen::VectorXd u(k);
        for (int i = 0; i < k; ++i) {
            const double t = (grid.r[i + 1] - lo) / width;
            u[i] = (t > 0.0 && t < 1.0) ? std::exp(-1.0 / (t * (1.0 - t)) + 4.0) : 0.0;
        }
        out.push_back(std::move(u));
    }
    return out;
}

double interpolation_check(const ManifoldModel& model, const RadialGrid& grid, double theta,
                           const std::vector<Eigen::VectorXd>& samples) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("interpolation_check: theta must lie in [0, 1]");
    const QuotientProblem grad = poincare_problem(model, grid, 0.0, 0.0, 0.0);
    double worst = 0.0;
    for (const auto& u : samples) {
        if (u.size() != grid.interior()) throw DomainError("interpolation_check: sample size mismatch");
        double nu = 0.0, nx = 0.0;
        for (int i = 0; i < grid.interior(); ++i) {
            const double x = model.x(grid.r[i + 1]);
            nu += grid.m[i + 1] * u[i] * u[i];
            nx += grid.m[i + 1] * std::pow(x, 2.0 * theta) * u[i] * u[i];
        }
        if (!(nu > 0.0)) throw DomainError("interpolation_check: zero sample");
        const double ng = grad.numerator(u);
        // theta = 0 is the identity ||u|| / ||u||
        const double ratio = theta == 0.0 ? 1.0
                                          : std::sqrt(nx) / (std::pow(ng, 0.5 * theta) * std::pow(nu, 0.5 * (1.0 - theta)));
        worst = std::max(worst, ratio);
    }
    return worst;
}

double vb_lower_bound(const ManifoldModel& model, const RadialGrid& grid, std::uint64_t seed) {
    if (model.n < 5) throw ParameterError("vb_lower_bound: requires n >= 5");
    const int k = grid.interior();
    const std::vector<double> m = grid.interior_weights();
    const std::vector<double> r = grid.interior_nodes();
    std::vector<double> x2(k), rw(k);
    for (int i = 0; i < k; ++i) {
        const double x = model.x(r[i]);
        x2[i] = x * x;
        rw[i] = x * x * r[i] / eval_warp(model, r[i]).value;
    }
    const SparseMat L2 = to_unweighted(SparseMat(multiplier(x2) * r_dr(grid)), m);
    const SparseMat L2t = L2.transpose();
    double best = std::numeric_limits<double>::infinity();
    int salt = 0;
    for (const auto& mode : model.angular_spectrum) {
        const SymTridiag S = symmetrize(assemble_P(model, grid, mode.lambda), m);
        const double sl = std::sqrt(mode.lambda);
        auto solve = [&](const CVec& v) {
            const Eigen::VectorXd re = solve_shifted(S, 0.0, Eigen::VectorXd(v.real()));
            const Eigen::VectorXd im = solve_shifted(S, 0.0, Eigen::VectorXd(v.imag()));
            CVec out(k);
            out.real() = re;
            out.imag() = im;
            return out;
        };
        auto op = [&](const CVec& v) {
            const CVec y = solve(v);
            CVec out(3 * k);
            for (int i = 0; i < k; ++i) {
                out[i] = x2[i] * y[i];
                out[2 * k + i] = sl * rw[i] * y[i];
            }
            out.segment(k, k) = L2.cast<std::complex<double>>() * y;
            return out;
        };
        auto adj = [&](const CVec& w) {
            CVec z(k);
            for (int i = 0; i < k; ++i) z[i] = x2[i] * w[i] + sl * rw[i] * w[2 * k + i];
            z += L2t.cast<std::complex<double>>() * w.segment(k, k);
            return solve(z);
        };
        const double sigma = top_singular_value(op, adj, k, seed + static_cast<std::uint64_t>(salt++));
        best = std::min(best, 1.0 / (sigma * sigma));
    }
    return best;
}

GainFit weighted_gain_fit(const ManifoldModel& model, const SpectralWindow& I, double sigma, int order,
                          const std::vector<double>& H_list, double q, double h) {
    if (!(sigma >= 0.0 && sigma < 1.0)) throw ParameterError("weighted_gain_fit: sigma must lie in [0, 1)");
    if (order < 0 || order > 2) throw ParameterError("weighted_gain_fit: L has at most two b-derivatives");
    GainFit out;
    for (double H : H_list) {
        const SpectralWindow win{I.a, I.b, H};
        win.validate();
        const RadialGrid grid = window_grid(model, H, I.a, q, h);
        const std::vector<double> r = grid.interior_nodes();
        std::vector<double> xw(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) xw[i] = std::pow(model.x(r[i]), 2.0 + sigma);
        const SparseMat D = r_dr(grid);
        double value = 0.0;
        int rank = 0;
        for (const auto& mode : model.angular_spectrum) {
            const ModeOperator op = build_mode(model, grid, mode.lambda, mode.multiplicity);
            const SpectralData sd = spectral_data(op, win);
            if (sd.values.empty()) continue;
            rank += static_cast<int>(sd.values.size()) * mode.multiplicity;
            Eigen::MatrixXd LE = sd.vectors;
            for (int j = 0; j < order; ++j) LE = (D * LE).eval();
            for (Eigen::Index i = 0; i < LE.rows(); ++i) LE.row(i) *= xw[i];
            const Eigen::Map<const Eigen::VectorXd> m(op.m.data(), static_cast<Eigen::Index>(op.m.size()));
            const Eigen::MatrixXd C = sd.vectors.transpose() * m.asDiagonal() * LE;
            value = std::max(value, spectral_norm(C));
        }
        if (rank == 0) {
            out.skipped.push_back(H);
            continue;
        }
        out.H.push_back(H);
        out.value.push_back(value);
        out.rank.push_back(rank);
    }
    if (out.H.size() >= 2) {
        out.fit = fit_loglog(out.H, out.value);
        out.fitted = true;
    }
    return out;
}

}  // namespace scatspec
