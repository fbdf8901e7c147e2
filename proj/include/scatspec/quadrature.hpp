#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "scatspec/tridiag.hpp"

namespace scatspec {

/// Composite Gauss-Legendre rule on theta in [0, pi/2] for the substitution
/// lambda = scale * tan(theta)^2. Panels are graded geometrically (ratio 1/2)
/// toward both endpoints, `levels` panels on each side.
struct QuadSpec {
    int levels = 20;
    int order = 8;
    double scale = 1.0;

    void validate() const;
    int nodes() const { return 2 * levels * order; }
};

struct QuadRule {
    std::vector<double> theta;
    std::vector<double> weight;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
QuadRule gauss_legendre(int n);

QuadRule graded_rule(const QuadSpec& spec);

/// Node values of pi^{-1} lambda^{-1/2} dlambda/dtheta, i.e. 2 sqrt(scale) sec^2(theta) / pi, and
/// lambda itself; sqrt(mu) = sum_k c_k mu / (mu + lambda_k).
struct SqrtQuadrature {
    std::vector<double> lambda;
    std::vector<double> coef;
};

SqrtQuadrature sqrt_quadrature(const QuadSpec& spec);

double sqrt_via_quadrature(double mu, const QuadSpec& spec);

/// int_0^inf f(lambda) dlambda on the same graded rule.
double integrate_half_line(const std::function<double(double)>& f, const QuadSpec& spec);

/// pi^{-1} int lambda^{-1/2} P (P + lambda)^{-1} dlambda for P self-adjoint in <.,.>_m.
/// Returned in the original (weighted) frame. Throws DomainError unless P > 0.
Eigen::MatrixXd sqrt_via_quadrature(const Tridiag& P, const std::vector<double>& m, const QuadSpec& spec);

}  // namespace scatspec
