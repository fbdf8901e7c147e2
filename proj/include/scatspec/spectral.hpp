#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scatspec/discretize.hpp"
#include "scatspec/tridiag.hpp"

namespace scatspec {

/// Eigenpairs of a symmetric tridiagonal matrix; columns orthonormal in the
/// unweighted inner product, values ascending.
struct EigenPairs {
    std::vector<double> values;
    Eigen::MatrixXd vectors;
};

/// Implicit-shift QL with deflation. Throws NumericalError when an eigenvalue
/// needs more than max_iter sweeps.
EigenPairs eig_sym_tridiag(const SymTridiag& s, int max_iter = 30);
std::vector<double> eigvals_sym_tridiag(const SymTridiag& s, int max_iter = 30);

/// Number of eigenvalues strictly below x.
int sturm_count(const SymTridiag& s, double x);

/// Eigenvalues with indices [i0, i1) by Sturm bisection.
std::vector<double> bisect_eigenvalues(const SymTridiag& s, int i0, int i1);

/// Eigenpairs by bisection and inverse iteration.
EigenPairs eig_sym_tridiag_index(const SymTridiag& s, int i0, int i1);
EigenPairs eig_sym_tridiag_range(const SymTridiag& s, double lo, double hi);

/// Compact interval I = [a, b] with 0 < a < b, probed at scale H: the window
/// selects eigenvalues mu with H^2 mu in I.
struct SpectralWindow {
    double a = 0.5;
    double b = 2.0;
    double H = 1.0;

    void validate() const;
    double lo() const { return a / (H * H); }
    double hi() const { return b / (H * H); }
    bool contains(double mu) const;
};

/// Eigenpairs of one mode, orthonormal in <.,.>_m. `complete` marks a full
/// decomposition (required for arbitrary spectral functions).
struct SpectralData {
    double lambda = 0.0;
    int multiplicity = 1;
    std::vector<double> m;
    std::vector<double> values;
    Eigen::MatrixXd vectors;
    bool complete = false;

    int size() const { return static_cast<int>(m.size()); }
};

SpectralData spectral_data(const ModeOperator& op);
SpectralData spectral_data(const ModeOperator& op, double lo, double hi);
SpectralData spectral_data(const ModeOperator& op, const SpectralWindow& window);

/// max_j ||P e_j - mu_j e_j||_m / max_j |mu_j|.
double residual_defect(const SpectralData& data, const Tridiag& P);
/// max |<e_j, e_k>_m - delta_jk|.
double orthonormality_defect(const SpectralData& data);

std::vector<int> window_indices(const SpectralData& data, const SpectralWindow& window);
/// #{j : H^2 mu_j in I} times the mode multiplicity.
int projector_rank(const SpectralData& data, const SpectralWindow& window);

/// Dense projector sum_j e_j e_j^T D over the window.
Eigen::MatrixXd projector(const SpectralData& data, const SpectralWindow& window);

/// sum_j fn(mu_j) e_j e_j^T D. Needs complete data; throws DomainError when fn
/// is not finite at some eigenvalue.
Eigen::MatrixXd apply_spectral_function(const SpectralData& data,
                                        const std::function<double(double)>& fn);

/// Solves (P - w) u = v. Throws DomainError when w lies within 1e-12 of the
/// spectrum and NumericalError when the residual exceeds 1e-10 ||v||.
std::vector<std::complex<double>> resolvent_apply(const Tridiag& P, const std::vector<double>& m,
                                                  std::complex<double> w,
                                                  std::span<const std::complex<double>> v);

/// Smooth bump supported in [a, b], equal to 1 on the middle third.
Jet window_bump(double t, double a, double b);

/// ||v||_m
double weighted_norm(const Eigen::VectorXd& v, const std::vector<double>& m);

}  // namespace scatspec
