#include "scatspec/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "scatspec/discretize.hpp"
#include "scatspec/errors.hpp"
#include "scatspec/spectral.hpp"

namespace scatspec {

void QuadSpec::validate() const {
    if (levels < 1) throw ParameterError("quadrature levels must be >= 1");
    if (order < 1) throw ParameterError("quadrature order must be >= 1");
    if (!(scale > 0.0)) throw ParameterError("quadrature scale must be positive");
}

QuadRule gauss_legendre(int n) {
    QuadRule rule;
    rule.theta.resize(n);
    rule.weight.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.theta[i] = -x;
        rule.theta[n - 1 - i] = x;
        rule.weight[i] = rule.weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

QuadRule graded_rule(const QuadSpec& spec) {
    spec.validate();
    const double quarter = std::numbers::pi / 4.0;
    std::vector<double> bp{0.0};
    for (int k = spec.levels - 1; k >= 0; --k) bp.push_back(quarter * std::pow(0.5, k));
    for (int k = 1; k < spec.levels; ++k) bp.push_back(2.0 * quarter - quarter * std::pow(0.5, k));
    bp.push_back(2.0 * quarter);
    const QuadRule g = gauss_legendre(spec.order);
    QuadRule out;
    for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
        const double half = 0.5 * (bp[p + 1] - bp[p]);
        const double mid = 0.5 * (bp[p + 1] + bp[p]);
        for (int j = 0; j < spec.order; ++j) {
            out.theta.push_back(mid + half * g.theta[j]);
            out.weight.push_back(half * g.weight[j]);
        }
    }
    return out;
}

SqrtQuadrature sqrt_quadrature(const QuadSpec& spec) {
    const QuadRule rule = graded_rule(spec);
    SqrtQuadrature q;
    const double sc = std::sqrt(spec.scale);
    for (std::size_t k = 0; k < rule.theta.size(); ++k) {
        const double th = rule.theta[k];
        const double t = std::tan(th);
        const double c = std::cos(th);
        q.lambda.push_back(spec.scale * t * t);
        q.coef.push_back(rule.weight[k] * 2.0 * sc / (c * c) / std::numbers::pi);
    }
    return q;
}

double sqrt_via_quadrature(double mu, const QuadSpec& spec) {
    if (!(mu > 0.0)) throw DomainError("sqrt_via_quadrature: argument must be positive");
    const SqrtQuadrature q = sqrt_quadrature(spec);
    double s = 0.0;
    for (std::size_t k = 0; k < q.lambda.size(); ++k) s += q.coef[k] * mu / (mu + q.lambda[k]);
    return s;
}

double integrate_half_line(const std::function<double(double)>& f, const QuadSpec& spec) {
    const QuadRule rule = graded_rule(spec);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.theta.size(); ++k) {
        const double t = std::tan(rule.theta[k]);
        const double c = std::cos(rule.theta[k]);
        s += rule.weight[k] * f(spec.scale * t * t) * 2.0 * spec.scale * t / (c * c);
    }
    return s;
}

Eigen::MatrixXd sqrt_via_quadrature(const Tridiag& P, const std::vector<double>& m, const QuadSpec& spec) {
    const SymTridiag s = symmetrize(P, m);
    if (sturm_count(s, 0.0) > 0 || s.size() == 0)
        throw DomainError("sqrt_via_quadrature: P must be positive definite");
    const int n = s.size();
    const Eigen::MatrixXd S = dense(s);
    const SqrtQuadrature q = sqrt_quadrature(spec);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < q.lambda.size(); ++k) {
        // (S + lambda)^{-1} S, column by column; no cancellation for large lambda
        for (int j = 0; j < n; ++j) {
            const Eigen::VectorXd x = solve_shifted(s, -q.lambda[k], S.col(j));
            acc.col(j) += q.coef[k] * x;
        }
    }
    acc = 0.5 * (acc + acc.transpose()).eval();
    Eigen::VectorXd sq(n);
    for (int i = 0; i < n; ++i) sq[i] = std::sqrt(m[i]);
    return sq.cwiseInverse().asDiagonal() * acc * sq.asDiagonal();
}

}  // namespace scatspec
