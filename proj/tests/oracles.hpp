#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

// Sign changes of the characteristic-polynomial sequence p_0..p_n of a symmetric
// tridiagonal matrix at x: the number of eigenvalues below x.
inline int charpoly_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
    double pm1 = 1.0;
    double p = d[0] - x;
    int changes = 0;
    auto sign_change = [](double a, double b) { return (a > 0.0) != (b > 0.0) && a != 0.0; };
    if (p == 0.0) p = -1e-300;
    if (sign_change(pm1, p)) ++changes;
    for (std::size_t k = 1; k < d.size(); ++k) {
        double pn = (d[k] - x) * p - e[k - 1] * e[k - 1] * pm1;
        if (pn == 0.0) pn = -1e-300 * (p > 0 ? 1 : -1);
        if (sign_change(p, pn)) ++changes;
        // rescale to keep the sequence in range; signs are unaffected
        const double s = std::max(std::abs(pn), std::abs(p));
        if (s > 1e100 || s < 1e-100) {
            pm1 = p / s;
            p = pn / s;
        } else {
            pm1 = p;
            p = pn;
        }
    }
    return changes;
}

inline std::vector<double> charpoly_eigenvalues(const std::vector<double>& d, const std::vector<double>& e) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        double rad = 0.0;
        if (i > 0) rad += std::abs(e[i - 1]);
        if (i + 1 < d.size()) rad += std::abs(e[i]);
        lo = std::min(lo, d[i] - rad);
        hi = std::max(hi, d[i] + rad);
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < d.size(); ++k) {
        double a = lo - 1.0, b = hi + 1.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (charpoly_count(d, e, mid) > static_cast<int>(k)) b = mid;
            else a = mid;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

// Generalized eigenvalues of (A, B), B positive definite.
inline Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// -v'' = mu v on (0, L) with Dirichlet ends.
inline double dirichlet_eigenvalue(int j, double L) {
    const double k = j * std::numbers::pi / L;
    return k * k;
}

// Eigenvalues of the N-point second-difference matrix (2, -1)/h^2.
inline double second_difference_eigenvalue(int j, int N, double h) {
    const double s = std::sin(j * std::numbers::pi / (2.0 * (N + 1)));
    return 4.0 / (h * h) * s * s;
}

// Continuum infimum of the truncated Hardy quotient on [1/R, 1]: sharp + (pi / ln R)^2.
inline double hardy_truncated(int n, double s, double R) {
    const double a = (n - 2.0 - 2.0 * s) / 2.0;
    const double k = std::numbers::pi / std::log(R);
    return a * a + k * k;
}

// Flux-form P for w = r assembled densely from the stencil definition.
inline Eigen::MatrixXd flat_P_dense(int n_dim, double r_min, double r_max, int N, double lambda) {
    const double h = (r_max - r_min) / (N - 1);
    const int k = N - 2;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
    for (int a = 0; a < k; ++a) {
        const double r = r_min + (a + 1) * h;
        const double mi = std::pow(r, n_dim - 1);
        const double mp = std::pow(r + h / 2, n_dim - 1);
        const double mm = std::pow(r - h / 2, n_dim - 1);
        p(a, a) = (mp + mm) / (mi * h * h) + lambda / (r * r);
        if (a + 1 < k) p(a, a + 1) = -mp / (mi * h * h);
        if (a > 0) p(a, a - 1) = -mm / (mi * h * h);
    }
    return p;
}

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

}  // namespace oracle
