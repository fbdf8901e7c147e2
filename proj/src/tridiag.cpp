#include "scatspec/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scatspec/errors.hpp"

namespace scatspec {

double SymTridiag::max_abs_gershgorin() const {
    double out = 0.0;
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double row = std::abs(d[i]);
        if (i > 0) row += std::abs(e[i - 1]);
        if (i + 1 < n) row += std::abs(e[i]);
        out = std::max(out, row);
    }
    return out;
}

std::vector<double> Tridiag::apply(std::span<const double> u) const {
    const int n = size();
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double v = diag[i] * u[i];
        if (i > 0) v += lower[i - 1] * u[i - 1];
        if (i + 1 < n) v += upper[i] * u[i + 1];
        out[i] = v;
    }
    return out;
}

Eigen::VectorXd Tridiag::apply(const Eigen::VectorXd& u) const {
    const auto v = apply(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())));
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd Tridiag::apply(const Eigen::MatrixXd& u) const {
    const int n = size();
    Eigen::MatrixXd out(n, u.cols());
    for (int i = 0; i < n; ++i) {
        out.row(i) = diag[i] * u.row(i);
        if (i > 0) out.row(i) += lower[i - 1] * u.row(i - 1);
        if (i + 1 < n) out.row(i) += upper[i] * u.row(i + 1);
    }
    return out;
}

Eigen::MatrixXd Tridiag::dense() const {
    const int n = size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        out(i, i) = diag[i];
        if (i + 1 < n) {
            out(i, i + 1) = upper[i];
            out(i + 1, i) = lower[i];
        }
    }
    return out;
}

Eigen::MatrixXd dense(const SymTridiag& s) {
    const int n = s.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        out(i, i) = s.d[i];
        if (i + 1 < n) out(i, i + 1) = out(i + 1, i) = s.e[i];
    }
    return out;
}

namespace {

// Gaussian elimination with partial pivoting on a tridiagonal system; the
// second superdiagonal produced by row swaps is kept in u2.
template <class T>
std::vector<T> pivoted_solve(std::vector<T> lo, std::vector<T> dg, std::vector<T> up,
                             std::vector<T> b) {
    const int n = static_cast<int>(dg.size());
    if (n == 0) return {};
    std::vector<T> u2(n, T(0));
    up.push_back(T(0));
    for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(lo[i]) > std::abs(dg[i])) {
            std::swap(dg[i], lo[i]);
            std::swap(up[i], dg[i + 1]);
            std::swap(u2[i], up[i + 1]);
            std::swap(b[i], b[i + 1]);
        }
        if (dg[i] == T(0)) throw NumericalError("tridiagonal solve: singular pivot");
        const T f = lo[i] / dg[i];
        dg[i + 1] -= f * up[i];
        up[i + 1] -= f * u2[i];
        b[i + 1] -= f * b[i];
    }
    if (dg[n - 1] == T(0)) throw NumericalError("tridiagonal solve: singular pivot");
    std::vector<T> x(n);
    for (int i = n - 1; i >= 0; --i) {
        T v = b[i];
        if (i + 1 < n) v -= up[i] * x[i + 1];
        if (i + 2 < n) v -= u2[i] * x[i + 2];
        x[i] = v / dg[i];
    }
    return x;
}

}  // namespace

std::vector<std::complex<double>> solve_shifted(const Tridiag& t, std::complex<double> shift,
                                                std::span<const std::complex<double>> rhs) {
    using C = std::complex<double>;
    const int n = t.size();
    if (static_cast<int>(rhs.size()) != n) throw DomainError("solve_shifted: dimension mismatch");
    std::vector<C> lo(t.lower.begin(), t.lower.end());
    std::vector<C> up(t.upper.begin(), t.upper.end());
    std::vector<C> dg(n);
    for (int i = 0; i < n; ++i) dg[i] = t.diag[i] - shift;
    return pivoted_solve<C>(std::move(lo), std::move(dg), std::move(up),
                            std::vector<C>(rhs.begin(), rhs.end()));
}

Eigen::VectorXd solve_shifted(const SymTridiag& s, double shift, const Eigen::VectorXd& rhs) {
    const int n = s.size();
    if (rhs.size() != n) throw DomainError("solve_shifted: dimension mismatch");
    std::vector<double> dg(n);
    for (int i = 0; i < n; ++i) dg[i] = s.d[i] - shift;
    auto x = pivoted_solve<double>(s.e, std::move(dg), s.e,
                                   std::vector<double>(rhs.data(), rhs.data() + n));
    return Eigen::Map<Eigen::VectorXd>(x.data(), n);
}

}  // namespace scatspec
