#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace scatspec {

/// Symmetric tridiagonal matrix: diagonal d (size n), off-diagonal e (size n-1).
struct SymTridiag {
    std::vector<double> d;
    std::vector<double> e;

    int size() const { return static_cast<int>(d.size()); }
    double max_abs_gershgorin() const;
};

/// General real tridiagonal matrix. lower[i] = T(i+1, i), upper[i] = T(i, i+1).
struct Tridiag {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    int size() const { return static_cast<int>(diag.size()); }
    std::vector<double> apply(std::span<const double> u) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& u) const;
    Eigen::MatrixXd dense() const;
};

Eigen::MatrixXd dense(const SymTridiag& s);

/// Solves (T - shift) u = rhs with partial pivoting. Throws NumericalError on an exact zero pivot.
std::vector<std::complex<double>> solve_shifted(const Tridiag& t, std::complex<double> shift,
                                                std::span<const std::complex<double>> rhs);

/// Real variant used by inverse iteration and the quadrature square root.
Eigen::VectorXd solve_shifted(const SymTridiag& s, double shift, const Eigen::VectorXd& rhs);

}  // namespace scatspec
