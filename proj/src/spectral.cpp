#include "scatspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "scatspec/errors.hpp"

namespace scatspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void ql_implicit(std::vector<double>& d, std::vector<double>& e, Eigen::MatrixXd* z, int max_iter) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);
    if (n > 0) e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iter) {
                    std::ostringstream os;
                    os << "eig_sym_tridiag: no convergence for eigenvalue " << l << " after " << max_iter
                       << " sweeps (|e| = " << std::abs(e[l]) << ")";
                    throw NumericalError(os.str());
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        Eigen::VectorXd zi1 = z->col(i + 1);
                        z->col(i + 1) = s * z->col(i) + c * zi1;
                        z->col(i) = c * z->col(i) - s * zi1;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

Eigen::VectorXd random_start(int n, int salt) {
    // fixed pseudo-random start vector; deterministic across runs
    Eigen::VectorXd v(n);
    std::uint64_t x = 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(salt + 1);
    for (int i = 0; i < n; ++i) {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        v[i] = static_cast<double>(x % 2000003) / 2000003.0 - 0.5;
    }
    return v;
}

Eigen::VectorXd inverse_iteration(const SymTridiag& s, double mu, const std::vector<Eigen::VectorXd>& prev,
                                  int salt) {
    const int n = s.size();
    const double scale = std::max(s.max_abs_gershgorin(), std::numeric_limits<double>::min());
    double shift = mu;
    Eigen::VectorXd v = random_start(n, salt);
    v.normalize();
    for (int it = 0; it < 4; ++it) {
        Eigen::VectorXd x;
        try {
            x = solve_shifted(s, shift, v);
        } catch (const NumericalError&) {
            shift = mu + 4.0 * kEps * scale;
            x = solve_shifted(s, shift, v);
        }
        for (const auto& q : prev) x -= q.dot(x) * q;
        const double nx = x.norm();
        if (!(nx > 0.0) || !std::isfinite(nx)) throw NumericalError("inverse iteration broke down");
        v = x / nx;
    }
    for (const auto& q : prev) v -= q.dot(v) * q;
    v.normalize();
    return v;
}

void sort_pairs(EigenPairs& p) {
    const int k = static_cast<int>(p.values.size());
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return p.values[a] < p.values[b]; });
    EigenPairs out;
    out.values.resize(k);
    out.vectors.resize(p.vectors.rows(), k);
    for (int j = 0; j < k; ++j) {
        out.values[j] = p.values[idx[j]];
        out.vectors.col(j) = p.vectors.col(idx[j]);
    }
    p = std::move(out);
}

SpectralData from_pairs(const ModeOperator& op, EigenPairs&& pairs, bool complete) {
    SpectralData sd;
    sd.lambda = op.lambda;
    sd.multiplicity = op.multiplicity;
    sd.m = op.m;
    sd.values = std::move(pairs.values);
    sd.vectors = std::move(pairs.vectors);
    for (int i = 0; i < sd.size(); ++i) sd.vectors.row(i) /= std::sqrt(sd.m[i]);
    sd.complete = complete;
    return sd;
}

}  // namespace

EigenPairs eig_sym_tridiag(const SymTridiag& s, int max_iter) {
    const int n = s.size();
    EigenPairs p;
    p.values = s.d;
    std::vector<double> e = s.e;
    p.vectors = Eigen::MatrixXd::Identity(n, n);
    ql_implicit(p.values, e, &p.vectors, max_iter);
    sort_pairs(p);
    return p;
}

std::vector<double> eigvals_sym_tridiag(const SymTridiag& s, int max_iter) {
    std::vector<double> d = s.d;
    std::vector<double> e = s.e;
    ql_implicit(d, e, nullptr, max_iter);
    std::sort(d.begin(), d.end());
    return d;
}

int sturm_count(const SymTridiag& s, double x) {
    const int n = s.size();
    const double tiny = kEps * std::max(s.max_abs_gershgorin(), 1e-300);
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < n; ++i) {
        const double off = (i > 0) ? s.e[i - 1] * s.e[i - 1] / q : 0.0;
        q = s.d[i] - x - off;
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

std::vector<double> bisect_eigenvalues(const SymTridiag& s, int i0, int i1) {
    const int n = s.size();
    if (i0 < 0 || i1 > n || i0 > i1) throw DomainError("bisect_eigenvalues: index range out of bounds");
    const double g = s.max_abs_gershgorin();
    std::vector<double> out;
    for (int k = i0; k < i1; ++k) {
        double lo = -g - 1.0, hi = g + 1.0;
        if (!out.empty()) lo = std::max(lo, out.back() - 2.0 * kEps * g);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + 1e-300) break;
            if (mid == lo || mid == hi) break;
            if (sturm_count(s, mid) > k)
                hi = mid;
            else
                lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

EigenPairs eig_sym_tridiag_index(const SymTridiag& s, int i0, int i1) {
    EigenPairs p;
    p.values = bisect_eigenvalues(s, i0, i1);
    const int k = static_cast<int>(p.values.size());
    p.vectors.resize(s.size(), k);
    std::vector<Eigen::VectorXd> prev;
    for (int j = 0; j < k; ++j) {
        Eigen::VectorXd v = inverse_iteration(s, p.values[j], prev, i0 + j);
        p.vectors.col(j) = v;
        prev.push_back(std::move(v));
    }
    return p;
}

EigenPairs eig_sym_tridiag_range(const SymTridiag& s, double lo, double hi) {
    if (!(hi >= lo)) throw DomainError("eig_sym_tridiag_range: empty interval");
    const int i0 = sturm_count(s, lo);
    // closed interval: eigenvalues equal to hi are included
    const int i1 = sturm_count(s, std::nextafter(hi, std::numeric_limits<double>::infinity()));
    return eig_sym_tridiag_index(s, i0, i1);
}

void SpectralWindow::validate() const {
    if (!(a > 0.0)) throw ParameterError("spectral window must satisfy a > 0 (I compact in (0, inf))");
    if (!(b > a)) throw ParameterError("spectral window must satisfy b > a");
    if (!(H > 0.0)) throw ParameterError("window scale H must be positive");
}

bool SpectralWindow::contains(double mu) const {
    const double t = H * H * mu;
    return t >= a && t <= b;
}

SpectralData spectral_data(const ModeOperator& op) {
    const SymTridiag s = symmetrize(op.P, op.m);
    return from_pairs(op, eig_sym_tridiag(s), true);
}

SpectralData spectral_data(const ModeOperator& op, double lo, double hi) {
    const SymTridiag s = symmetrize(op.P, op.m);
    return from_pairs(op, eig_sym_tridiag_range(s, lo, hi), false);
}

SpectralData spectral_data(const ModeOperator& op, const SpectralWindow& window) {
    window.validate();
    return spectral_data(op, window.lo(), window.hi());
}

double weighted_norm(const Eigen::VectorXd& v, const std::vector<double>& m) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += m[i] * v[i] * v[i];
    return std::sqrt(s);
}

double residual_defect(const SpectralData& data, const Tridiag& P) {
    double worst = 0.0, scale = 0.0;
    for (double mu : data.values) scale = std::max(scale, std::abs(mu));
    for (int j = 0; j < static_cast<int>(data.values.size()); ++j) {
        const Eigen::VectorXd e = data.vectors.col(j);
        const Eigen::VectorXd r = P.apply(e) - data.values[j] * e;
        worst = std::max(worst, weighted_norm(r, data.m));
    }
    return scale > 0.0 ? worst / scale : worst;
}

double orthonormality_defect(const SpectralData& data) {
    const Eigen::Map<const Eigen::VectorXd> m(data.m.data(), data.size());
    const Eigen::MatrixXd g = data.vectors.transpose() * m.asDiagonal() * data.vectors;
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

std::vector<int> window_indices(const SpectralData& data, const SpectralWindow& window) {
    window.validate();
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(data.values.size()); ++j)
        if (window.contains(data.values[j])) out.push_back(j);
    return out;
}

int projector_rank(const SpectralData& data, const SpectralWindow& window) {
    return static_cast<int>(window_indices(data, window).size()) * data.multiplicity;
}

Eigen::MatrixXd projector(const SpectralData& data, const SpectralWindow& window) {
    const auto idx = window_indices(data, window);
    const int n = data.size();
    Eigen::MatrixXd E(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) E.col(static_cast<Eigen::Index>(c)) = data.vectors.col(idx[c]);
    const Eigen::Map<const Eigen::VectorXd> m(data.m.data(), n);
    return E * (E.transpose() * m.asDiagonal());
}

Eigen::MatrixXd apply_spectral_function(const SpectralData& data, const std::function<double(double)>& fn) {
    if (!data.complete) throw DomainError("apply_spectral_function: needs a complete eigendecomposition");
    const int n = data.size();
    Eigen::VectorXd f(static_cast<Eigen::Index>(data.values.size()));
    for (std::size_t j = 0; j < data.values.size(); ++j) {
        f[static_cast<Eigen::Index>(j)] = fn(data.values[j]);
        if (!std::isfinite(f[static_cast<Eigen::Index>(j)])) {
            std::ostringstream os;
            os << "apply_spectral_function: fn is not finite at eigenvalue " << data.values[j];
            throw DomainError(os.str());
        }
    }
    const Eigen::Map<const Eigen::VectorXd> m(data.m.data(), n);
    return data.vectors * f.asDiagonal() * (data.vectors.transpose() * m.asDiagonal());
}

std::vector<std::complex<double>> resolvent_apply(const Tridiag& P, const std::vector<double>& m,
                                                  std::complex<double> w,
                                                  std::span<const std::complex<double>> v) {
    const int n = P.size();
    if (static_cast<int>(v.size()) != n || static_cast<int>(m.size()) != n)
        throw DomainError("resolvent_apply: dimension mismatch");
    if (std::abs(w.imag()) < 1e-12) {
        const SymTridiag s = symmetrize(P, m);
        const int c = sturm_count(s, w.real() + 1e-12) - sturm_count(s, w.real() - 1e-12);
        if (c > 0) {
            std::ostringstream os;
            os << "resolvent_apply: w = " << w.real() << " lies within 1e-12 of the spectrum";
            throw DomainError(os.str());
        }
    }
    auto u = solve_shifted(P, w, v);
    double rn = 0.0, vn = 0.0;
    for (int i = 0; i < n; ++i) {
        std::complex<double> pu = (P.diag[i] - w) * u[i];
        if (i > 0) pu += P.lower[i - 1] * u[i - 1];
        if (i + 1 < n) pu += P.upper[i] * u[i + 1];
        rn += m[i] * std::norm(pu - v[i]);
        vn += m[i] * std::norm(v[i]);
    }
    if (std::sqrt(rn) > 1e-10 * std::sqrt(vn)) {
        std::ostringstream os;
        os << "resolvent_apply: residual " << std::sqrt(rn / std::max(vn, 1e-300)) << " exceeds 1e-10";
        throw NumericalError(os.str());
    }
    return u;
}

Jet window_bump(double t, double a, double b) {
    const double delta = (b - a) / 3.0;
    const Jet l = smooth_step((t - a) / delta);
    const Jet r = smooth_step((b - t) / delta);
    const double l1 = l.d1 / delta, l2 = l.d2 / (delta * delta);
    const double r1 = -r.d1 / delta, r2 = r.d2 / (delta * delta);
    return {l.value * r.value, l1 * r.value + l.value * r1, l2 * r.value + 2.0 * l1 * r1 + l.value * r2};
}

}  // namespace scatspec
