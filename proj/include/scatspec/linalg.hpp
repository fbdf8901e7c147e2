#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace scatspec {

using CVec = Eigen::VectorXcd;
using LinearMap = std::function<CVec(const CVec&)>;

/// Largest singular value of op: C^n -> C^k (unweighted norms) by Lanczos on
/// op* op with full reorthogonalization.
double top_singular_value(const LinearMap& op, const LinearMap& adjoint, int dim, std::uint64_t seed,
                          int max_iter = 120, double tol = 1e-10);

/// Spectral norm of a dense matrix.
double spectral_norm(const Eigen::MatrixXd& a);
double spectral_norm(const Eigen::MatrixXcd& a);

/// f(M) for symmetric M via its eigendecomposition.
Eigen::MatrixXd sym_function(const Eigen::MatrixXd& m, const std::function<double(double)>& f);

/// sqrt(lambda_max(A B)) for symmetric positive semidefinite A, B: the norm of
/// X Y when A = Gram(Y^*) and B = Gram(X).
double norm_from_grams(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Columns orthonormalized in <.,.>_m (modified Gram-Schmidt with one re-pass).
Eigen::MatrixXd weighted_orthonormalize(const Eigen::MatrixXd& v, const Eigen::VectorXd& m);

}  // namespace scatspec
