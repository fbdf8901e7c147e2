#include "scatspec/linalg.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "scatspec/errors.hpp"

namespace scatspec {

double top_singular_value(const LinearMap& op, const LinearMap& adjoint, int dim, std::uint64_t seed,
                          int max_iter, double tol) {
    if (dim <= 0) return 0.0;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CVec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = {nd(rng), nd(rng)};
    v.normalize();
    const int kmax = std::min(max_iter, dim);
    std::vector<CVec> basis;
    std::vector<double> alpha, beta;
    double prev = -1.0;
    for (int k = 0; k < kmax; ++k) {
        basis.push_back(v);
        CVec w = adjoint(op(v));
        const double a = v.dot(w).real();
        alpha.push_back(a);
        for (const auto& q : basis) w -= q.dot(w) * q;
        for (const auto& q : basis) w -= q.dot(w) * q;
        const double b = w.norm();
        const int n = static_cast<int>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < n) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
        const double top = es.eigenvalues().maxCoeff();
        if (b <= 1e-14 * std::max(std::abs(top), 1e-300)) return std::sqrt(std::max(top, 0.0));
        if (prev >= 0.0 && std::abs(top - prev) <= tol * std::abs(top)) return std::sqrt(std::max(top, 0.0));
        prev = top;
        beta.push_back(b);
        v = w / b;
    }
    if (kmax == dim) return std::sqrt(std::max(prev, 0.0));
    throw NumericalError("top_singular_value: Lanczos did not converge");
}

double spectral_norm(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    return svd.singularValues()(0);
}

double spectral_norm(const Eigen::MatrixXcd& a) {
    if (a.size() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues()(0);
}

Eigen::MatrixXd sym_function(const Eigen::MatrixXd& m, const std::function<double(double)>& f) {
    if (m.size() == 0) return m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    Eigen::VectorXd fv = es.eigenvalues().unaryExpr(f);
    return es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().transpose();
}

double norm_from_grams(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.size() == 0 || b.size() == 0) return 0.0;
    const Eigen::MatrixXd ra = sym_function(a, [](double x) { return std::sqrt(std::max(x, 0.0)); });
    const Eigen::MatrixXd c = ra * b * ra;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

Eigen::MatrixXd weighted_orthonormalize(const Eigen::MatrixXd& v, const Eigen::VectorXd& m) {
    Eigen::MatrixXd q = v;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < j; ++i)
                q.col(j) -= (q.col(i).cwiseProduct(m)).dot(q.col(j)) * q.col(i);
        const double nrm = std::sqrt(q.col(j).cwiseProduct(m).dot(q.col(j)));
        if (!(nrm > 0.0)) throw NumericalError("weighted_orthonormalize: dependent columns");
        q.col(j) /= nrm;
    }
    return q;
}

}  // namespace scatspec
