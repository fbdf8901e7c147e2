#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "scatspec/geometry.hpp"
#include "scatspec/tridiag.hpp"

namespace scatspec {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Uniform radial grid on [r_min, r_max]. Dirichlet conditions eliminate the two
/// end nodes, so operators act on the N - 2 interior nodes.
struct RadialGrid {
    double r_min = 0.0;
    double r_max = 0.0;
    int N = 0;
    double h = 0.0;
    std::vector<double> r;  ///< all N nodes
    std::vector<double> m;  ///< w(r_i)^{n-1} h, halved at both ends

    int interior() const { return N - 2; }
    std::vector<double> interior_nodes() const;
    std::vector<double> interior_weights() const;
};

/// Throws ConfigError when r_max does not clear the cutoff transition.
RadialGrid build_grid(const ManifoldModel& model, double r_max, int N);

/// Grid sized so the window I/H^2 holds about q (sqrt(sup I / inf I) - 1)
/// eigenvalues of the lambda = 0 mode: r_max = r_min + pi H q / sqrt(inf I), spacing close to h.
RadialGrid window_grid(const ManifoldModel& model, double H, double inf_I, double q, double h);

/// One angular mode: P and the conjugate-operator generator G on interior nodes.
struct ModeOperator {
    double lambda = 0.0;
    int multiplicity = 1;
    Tridiag P;
    SparseMat G;
    std::vector<double> m;  ///< interior measure weights
    std::vector<double> r;  ///< interior nodes
};

Tridiag assemble_P(const ManifoldModel& model, const RadialGrid& grid, double lambda);

/// (G u)_i = phi_i r_i (u_{i+1} - u_{i-1}) / (2h).
SparseMat assemble_G(const ManifoldModel& model, const RadialGrid& grid);

ModeOperator build_mode(const ManifoldModel& model, const RadialGrid& grid, double lambda,
                        int multiplicity = 1);

/// Adjoint in <u, v>_m = sum m_i u_i v_i: D^{-1} T^T D.
SparseMat weighted_adjoint(const SparseMat& t, const std::vector<double>& m);

SparseMat to_sparse(const Tridiag& t);

/// B = (G* - G)/2, so that A = i B is self-adjoint in <.,.>_m.
SparseMat conjugate_B(const SparseMat& g, const std::vector<double>& m);

/// K = (M + M*)/2 with M = (PG - GP)/2; the matrix form of (i/2)[P, A].
SparseMat commutator_K(const SparseMat& p, const SparseMat& g, const std::vector<double>& m);

/// Flux-form discretization of the differential operator (i/2)[P, A]:
/// -W^{-1}(W F' u')' + (1/4) Delta_W(div F) u - (1/2) F Q' u with F = phi r,
/// Q = lambda/w^2 + V. Equal to P when w = r, V = 0 and phi = 1.
Tridiag assemble_commutator(const ManifoldModel& model, const RadialGrid& grid, double lambda);

/// S = D^{1/2} T D^{-1/2}. Throws DomainError when T is not self-adjoint in
/// <.,.>_m to within tol (relative to the largest entry).
SymTridiag symmetrize(const Tridiag& t, const std::vector<double>& m, double tol = 1e-12);

/// max |(D T - T^T D)_{ij}| / max |(D T)_{ij}|; zero for exactly self-adjoint T.
double selfadjoint_residual(const SparseMat& t, const std::vector<double>& m);

/// Same for anti-self-adjoint T (D T + T^T D).
double antiselfadjoint_residual(const SparseMat& t, const std::vector<double>& m);

/// Centered r d/dr on interior nodes with Dirichlet ends.
SparseMat r_dr(const RadialGrid& grid);

/// Diagonal multiplication operator.
SparseMat multiplier(const std::vector<double>& values);

/// D^{1/2} T D^{-1/2}: the operator expressed in unweighted coordinates.
SparseMat to_unweighted(const SparseMat& t, const std::vector<double>& m);

}  // namespace scatspec
